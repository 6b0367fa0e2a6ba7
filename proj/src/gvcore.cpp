#include "gvflow/gvcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gvflow {

namespace {

int floor_div2(int v) { return v >= 0 ? v / 2 : (v - 1) / 2; }

std::string witness_message(const FeasibilityWitness& w) {
  std::ostringstream os;
  os << "infeasible sample pair: nodes " << w.node_x << " and " << w.node_y
     << ", level gap " << w.level_gap << " > distance " << w.distance;
  return os.str();
}

}  // namespace

LevelScale::LevelScale(int n, double r) : n_levels(n), ratio(r) {
  if (n < 1) throw ContractError("level scale needs at least one level");
  if (!(r > 0.0)) throw ContractError("level scale ratio must be positive");
}

int LevelScale::quantize(double v) const {
  const long q = std::lround(v / ratio);
  if (q < 1) return 1;
  if (q > n_levels) return n_levels;
  return static_cast<int>(q);
}

SampleSet::SampleSet(std::vector<Sample> entries, LevelScale scale)
    : entries_(std::move(entries)), scale_(scale) {
  if (entries_.empty()) throw ContractError("sample set must be nonempty");
  std::vector<NodeId> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.node);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ContractError("sample set has duplicate node ids");
  for (const auto& e : entries_)
    if (!std::isfinite(e.value))
      throw ContractError("sample values must be finite");
}

int SampleSet::level(std::size_t i) const {
  return scale_.quantize(entries_[i].value);
}

void SampleSet::require_on(const DiscreteDomain& dom) const {
  for (const auto& e : entries_) dom.require_node(e.node);
}

HeadSurface::HeadSurface(std::vector<double> values, LevelScale scale)
    : values_(std::move(values)), scale_(scale) {
  if (values_.empty()) throw ContractError("surface must cover a domain");
  for (double v : values_)
    if (!std::isfinite(v)) throw ContractError("surface values must be finite");
}

HeadSurface HeadSurface::constant(int node_count, double value,
                                  LevelScale scale) {
  return HeadSurface(std::vector<double>(node_count, value), scale);
}

void HeadSurface::require_on(const DiscreteDomain& dom) const {
  if (size() != dom.node_count()) {
    std::ostringstream os;
    os << "surface covers " << size() << " nodes, domain has "
       << dom.node_count();
    throw ContractError(os.str());
  }
}

FeasibilityError::FeasibilityError(FeasibilityReport report)
    : Error(report.witness ? witness_message(*report.witness)
                           : "infeasible sample set"),
      report_(std::move(report)) {}

bool is_gradually_varied(const HeadSurface& surface,
                         const DiscreteDomain& dom) {
  surface.require_on(dom);
  std::vector<int> levels(dom.node_count());
  for (NodeId a = 0; a < dom.node_count(); ++a) levels[a] = surface.level(a);
  for (NodeId a = 0; a < dom.node_count(); ++a)
    for (NodeId b : dom.neighbors(a))
      if (b > a && std::abs(levels[a] - levels[b]) > 1) return false;
  return true;
}

FeasibilityReport check_feasibility(const SampleSet& samples,
                                    const DiscreteDomain& dom,
                                    DistanceMetric metric) {
  samples.require_on(dom);

  // Scan pairs in ascending (node_x, node_y) order so the witness is the
  // lexicographically first violation.
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples.entries()[a].node < samples.entries()[b].node;
  });

  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeId node_i = samples.entries()[order[i]].node;
    const int level_i = samples.level(order[i]);
    std::vector<int> hops;
    if (metric == DistanceMetric::GraphHops) hops = dom.hop_distances(node_i);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const NodeId node_j = samples.entries()[order[j]].node;
      const int gap = std::abs(level_i - samples.level(order[j]));
      const double d = metric == DistanceMetric::GraphHops
                           ? static_cast<double>(hops[node_j])
                           : distance(dom, node_i, node_j, metric);
      if (gap > d) {
        FeasibilityReport report;
        report.feasible = false;
        report.witness = FeasibilityWitness{node_i, node_j, gap, d};
        return report;
      }
    }
  }
  return {};
}

Envelopes compute_envelopes(const SampleSet& samples,
                            const DiscreteDomain& dom) {
  samples.require_on(dom);
  const int n = dom.node_count();
  Envelopes env{std::vector<int>(n, std::numeric_limits<int>::min()),
                std::vector<int>(n, std::numeric_limits<int>::max())};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto hops = dom.hop_distances(samples.entries()[k].node);
    const int level = samples.level(k);
    for (NodeId x = 0; x < n; ++x) {
      env.lower[x] = std::max(env.lower[x], level - hops[x]);
      env.upper[x] = std::min(env.upper[x], level + hops[x]);
    }
  }
  return env;
}

HeadSurface gv_extend(const SampleSet& samples, const DiscreteDomain& dom,
                      ExtendPolicy policy) {
  // The theorem's guarantee is stated for graph distance, so feasibility is
  // always decided under graph-hops here.
  auto report = check_feasibility(samples, dom, DistanceMetric::GraphHops);
  if (!report.feasible) throw FeasibilityError(std::move(report));

  const auto env = compute_envelopes(samples, dom);
  const LevelScale scale = samples.scale();
  std::vector<double> values(dom.node_count());
  for (NodeId x = 0; x < dom.node_count(); ++x) {
    int level = 0;
    switch (policy) {
      case ExtendPolicy::Lower:
        level = env.lower[x];
        break;
      case ExtendPolicy::Upper:
        level = env.upper[x];
        break;
      case ExtendPolicy::Midpoint:
        level = floor_div2(env.lower[x] + env.upper[x]);
        break;
    }
    level = std::clamp(level, 1, scale.n_levels);
    values[x] = scale.dequantize(level);
  }
  return HeadSurface(std::move(values), scale);
}

namespace {

// Iterated repair sweep: clamp each node's level into
// [max neighbor - 1, min neighbor + 1] in ascending node id order, in place,
// until a full pass changes nothing. The lower bound is applied first, so the
// upper bound wins when the window is empty. Any fixpoint is gradually varied.
std::vector<int> sweep_to_gv(std::vector<int> levels,
                             const DiscreteDomain& dom) {
  const int n = dom.node_count();
  const int max_passes = 4 * n;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (NodeId x = 0; x < n; ++x) {
      const auto& nbrs = dom.neighbors(x);
      if (nbrs.empty()) continue;
      int max_nbr = std::numeric_limits<int>::min();
      int min_nbr = std::numeric_limits<int>::max();
      for (NodeId y : nbrs) {
        max_nbr = std::max(max_nbr, levels[y]);
        min_nbr = std::min(min_nbr, levels[y]);
      }
      const int v = std::min(std::max(levels[x], max_nbr - 1), min_nbr + 1);
      if (v != levels[x]) {
        levels[x] = v;
        changed = true;
      }
    }
    if (!changed) return levels;
  }
  throw ConvergenceError(
      "gv projection did not reach a fixpoint within 4*|D| passes");
}

// Rebuild real values from final levels: a node whose level survived keeps
// its exact input value, anything else snaps to the level's head value.
HeadSurface rebuild(const HeadSurface& input, const std::vector<int>& levels) {
  std::vector<double> values(input.values());
  for (NodeId x = 0; x < input.size(); ++x)
    if (levels[x] != input.level(x))
      values[x] = input.scale().dequantize(levels[x]);
  return HeadSurface(std::move(values), input.scale());
}

std::vector<int> quantized_levels(const HeadSurface& surface) {
  std::vector<int> levels(surface.size());
  for (NodeId x = 0; x < surface.size(); ++x) levels[x] = surface.level(x);
  return levels;
}

}  // namespace

HeadSurface gv_project(const HeadSurface& surface, const DiscreteDomain& dom) {
  surface.require_on(dom);
  return rebuild(surface, sweep_to_gv(quantized_levels(surface), dom));
}

HeadSurface gv_project(const HeadSurface& surface, const DiscreteDomain& dom,
                       const SampleSet& pinned) {
  surface.require_on(dom);
  pinned.require_on(dom);
  if (!(pinned.scale() == surface.scale()))
    throw ContractError("pinned samples and surface use different scales");

  auto report = check_feasibility(pinned, dom, DistanceMetric::GraphHops);
  if (!report.feasible) throw FeasibilityError(std::move(report));

  // Repair first, then fold into the pinned envelopes. The median of three
  // gradually varied level fields is gradually varied, and lower = upper at
  // every pinned node, which forces the pinned values.
  auto levels = sweep_to_gv(quantized_levels(surface), dom);
  const auto env = compute_envelopes(pinned, dom);
  for (NodeId x = 0; x < dom.node_count(); ++x)
    levels[x] = std::max(env.lower[x], std::min(levels[x], env.upper[x]));
  return rebuild(surface, levels);
}

}  // namespace gvflow
