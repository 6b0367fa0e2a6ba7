#include "gvflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace gvflow {

DiscreteDomain::DiscreteDomain(std::vector<std::vector<NodeId>> adjacency)
    : adj_(std::move(adjacency)), kind_(DomainKind::GeneralGraph) {
  validate();
}

DiscreteDomain::DiscreteDomain(std::vector<std::vector<NodeId>> adjacency,
                               DomainKind kind)
    : adj_(std::move(adjacency)), kind_(kind) {
  validate();
}

void DiscreteDomain::validate() const {
  const int n = node_count();
  if (n == 0) throw ContractError("domain must have at least one node");
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b : adj_[a]) {
      if (b < 0 || b >= n) {
        std::ostringstream os;
        os << "adjacency of node " << a << " references invalid node " << b;
        throw ContractError(os.str());
      }
      if (b == a) {
        std::ostringstream os;
        os << "self-loop at node " << a;
        throw ContractError(os.str());
      }
      const auto& back = adj_[b];
      if (std::find(back.begin(), back.end(), a) == back.end()) {
        std::ostringstream os;
        os << "adjacency is not symmetric: " << a << " -> " << b
           << " has no reverse edge";
        throw ContractError(os.str());
      }
    }
  }
  // One BFS up front; the gradual-variation theorem presumes finite distances.
  const auto dist = hop_distances(0);
  for (NodeId a = 0; a < n; ++a) {
    if (dist[a] < 0) {
      std::ostringstream os;
      os << "domain is not connected: node " << a << " unreachable from 0";
      throw ContractError(os.str());
    }
  }
}

const std::vector<NodeId>& DiscreteDomain::neighbors(NodeId a) const {
  require_node(a);
  return adj_[a];
}

void DiscreteDomain::require_node(NodeId a) const {
  if (a < 0 || a >= node_count()) {
    std::ostringstream os;
    os << "node " << a << " out of range [0, " << node_count() << ")";
    throw ContractError(os.str());
  }
}

std::vector<int> DiscreteDomain::hop_distances(NodeId src) const {
  require_node(src);
  std::vector<int> dist(adj_.size(), -1);
  std::deque<NodeId> queue;
  dist[src] = 0;
  queue.push_back(src);
  while (!queue.empty()) {
    const NodeId a = queue.front();
    queue.pop_front();
    for (NodeId b : adj_[a]) {
      if (dist[b] < 0) {
        dist[b] = dist[a] + 1;
        queue.push_back(b);
      }
    }
  }
  return dist;
}

std::vector<std::vector<NodeId>> GridDomain::build_adjacency(LatLong sw,
                                                             LatLong ne,
                                                             int rows, int cols,
                                                             Adjacency scheme) {
  if (rows < 2 || cols < 2)
    throw ContractError("grid needs rows >= 2 and cols >= 2");
  if (!(ne.lat > sw.lat) || !(ne.lon > sw.lon)) {
    std::ostringstream os;
    os << "degenerate bounding box: NE (" << ne.lat << ", " << ne.lon
       << ") must strictly dominate SW (" << sw.lat << ", " << sw.lon << ")";
    throw ContractError(os.str());
  }
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(rows) * cols);
  const bool diag = scheme == Adjacency::EightNeighbor;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      auto& nbrs = adj[static_cast<std::size_t>(i) * cols + j];
      auto add = [&](int ii, int jj) {
        if (ii >= 0 && ii < rows && jj >= 0 && jj < cols)
          nbrs.push_back(ii * cols + jj);
      };
      add(i - 1, j);
      add(i + 1, j);
      add(i, j - 1);
      add(i, j + 1);
      if (diag) {
        add(i - 1, j - 1);
        add(i - 1, j + 1);
        add(i + 1, j - 1);
        add(i + 1, j + 1);
      }
    }
  }
  return adj;
}

GridDomain::GridDomain(LatLong sw, LatLong ne, int rows, int cols,
                       Adjacency scheme)
    : DiscreteDomain(build_adjacency(sw, ne, rows, cols, scheme),
                     DomainKind::Grid),
      rows_(rows),
      cols_(cols),
      lat_min_(sw.lat),
      lat_max_(ne.lat),
      long_min_(sw.lon),
      long_max_(ne.lon),
      lat_det_((ne.lat - sw.lat) / rows),
      long_det_((ne.lon - sw.lon) / cols),
      scheme_(scheme) {}

NodeId GridDomain::node_of(Cell c) const {
  if (c.row < 0 || c.row >= rows_ || c.col < 0 || c.col >= cols_) {
    std::ostringstream os;
    os << "cell (" << c.row << ", " << c.col << ") outside " << rows_ << "x"
       << cols_ << " grid";
    throw ContractError(os.str());
  }
  return c.row * cols_ + c.col;
}

Cell GridDomain::cell_of(NodeId a) const {
  require_node(a);
  return {a / cols_, a % cols_};
}

LatLong GridDomain::cell_center(Cell c) const {
  node_of(c);  // range check
  return {lat_min_ + (c.row + 0.5) * lat_det_,
          long_min_ + (c.col + 0.5) * long_det_};
}

bool GridDomain::is_interior(NodeId a) const {
  const Cell c = cell_of(a);
  return c.row > 0 && c.row < rows_ - 1 && c.col > 0 && c.col < cols_ - 1;
}

GridDomain build_grid(LatLong sw, LatLong ne, int rows, int cols,
                      Adjacency scheme) {
  return GridDomain(sw, ne, rows, cols, scheme);
}

double euclidean_cells(Cell a, Cell b) {
  const double di = a.row - b.row;
  const double dj = a.col - b.col;
  return std::sqrt(di * di + dj * dj);
}

double distance(const DiscreteDomain& dom, NodeId a, NodeId b,
                DistanceMetric metric) {
  dom.require_node(a);
  dom.require_node(b);
  switch (metric) {
    case DistanceMetric::GraphHops:
      return static_cast<double>(dom.hop_distances(a)[b]);
    case DistanceMetric::EuclideanCells: {
      if (dom.kind() != DomainKind::Grid)
        throw UnsupportedMetricError(
            "euclidean-cells distance requires a grid domain");
      const auto& grid = static_cast<const GridDomain&>(dom);
      return euclidean_cells(grid.cell_of(a), grid.cell_of(b));
    }
  }
  throw ContractError("unknown distance metric");
}

Cell latlong_to_cell(const GridDomain& dom, double lat, double lon) {
  if (lat < dom.lat_min() || lat > dom.lat_max()) {
    std::ostringstream os;
    os << "lat " << lat << " outside [" << dom.lat_min() << ", "
       << dom.lat_max() << "]";
    throw OutOfDomainError(os.str());
  }
  if (lon < dom.long_min() || lon > dom.long_max()) {
    std::ostringstream os;
    os << "long " << lon << " outside [" << dom.long_min() << ", "
       << dom.long_max() << "]";
    throw OutOfDomainError(os.str());
  }
  int row = static_cast<int>(std::floor((lat - dom.lat_min()) / dom.lat_det()));
  int col =
      static_cast<int>(std::floor((lon - dom.long_min()) / dom.long_det()));
  // NE boundary absorbs into the last cell.
  row = std::min(row, dom.rows() - 1);
  col = std::min(col, dom.cols() - 1);
  return {row, col};
}

}  // namespace gvflow
