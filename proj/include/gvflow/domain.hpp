#pragma once

#include <vector>

#include "gvflow/errors.hpp"

namespace gvflow {

using NodeId = int;

enum class DomainKind { GeneralGraph, Grid };
enum class Adjacency { FourNeighbor, EightNeighbor };

// graph-hops is the BFS shortest-path distance and works on any domain;
// euclidean-cells is sqrt((ii-i)^2 + (jj-j)^2) on grid cell indices and is
// only defined for grids.
enum class DistanceMetric { GraphHops, EuclideanCells };

// Finite connected graph with dense node ids 0..N-1 and symmetric adjacency.
// Immutable after construction; safe to share read-only across threads.
class DiscreteDomain {
public:
  // Validates symmetry, absence of self-loops, and connectivity.
  explicit DiscreteDomain(std::vector<std::vector<NodeId>> adjacency);

  int node_count() const { return static_cast<int>(adj_.size()); }
  const std::vector<NodeId>& neighbors(NodeId a) const;
  DomainKind kind() const { return kind_; }

  // BFS hop count from src to every node.
  std::vector<int> hop_distances(NodeId src) const;

  void require_node(NodeId a) const;

protected:
  DiscreteDomain(std::vector<std::vector<NodeId>> adjacency, DomainKind kind);

private:
  void validate() const;

  std::vector<std::vector<NodeId>> adj_;
  DomainKind kind_;
};

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

struct LatLong {
  double lat = 0.0;
  double lon = 0.0;
};

// Regular lat/long grid. Cell (i,j) maps to node id i*cols + j; row 0 sits on
// the southern (lat_min) edge, column 0 on the western (long_min) edge.
class GridDomain : public DiscreteDomain {
public:
  GridDomain(LatLong sw, LatLong ne, int rows, int cols,
             Adjacency scheme = Adjacency::FourNeighbor);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double lat_min() const { return lat_min_; }
  double lat_max() const { return lat_max_; }
  double long_min() const { return long_min_; }
  double long_max() const { return long_max_; }
  double lat_det() const { return lat_det_; }    // degrees per row
  double long_det() const { return long_det_; }  // degrees per column
  Adjacency scheme() const { return scheme_; }

  NodeId node_of(Cell c) const;
  Cell cell_of(NodeId a) const;
  LatLong cell_center(Cell c) const;

  // True when all four cardinal neighbors exist.
  bool is_interior(NodeId a) const;

private:
  static std::vector<std::vector<NodeId>> build_adjacency(LatLong sw,
                                                          LatLong ne, int rows,
                                                          int cols,
                                                          Adjacency scheme);

  int rows_, cols_;
  double lat_min_, lat_max_, long_min_, long_max_;
  double lat_det_, long_det_;
  Adjacency scheme_;
};

// sw/ne are the A/B map corners; ne must strictly dominate sw in both
// coordinates and rows, cols >= 2.
GridDomain build_grid(LatLong sw, LatLong ne, int rows, int cols,
                      Adjacency scheme = Adjacency::FourNeighbor);

// Symmetric, zero iff a == b. Integer-valued (as a double) for graph-hops.
double distance(const DiscreteDomain& dom, NodeId a, NodeId b,
                DistanceMetric metric);

// Euclidean distance between two cells in cell units.
double euclidean_cells(Cell a, Cell b);

// Floor of the scaled offset from the SW corner. The NE boundary absorbs into
// the last cell so every in-bbox point has a cell; points outside the bbox
// raise OutOfDomainError naming the offending coordinate.
Cell latlong_to_cell(const GridDomain& dom, double lat, double lon);

}  // namespace gvflow
