#include "gvflow/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gvflow {

namespace {

// Distance from every grid cell to each sample's cell, [sample][node].
std::vector<std::vector<double>> sample_distance_fields(
    const SampleSet& samples, const GridDomain& grid, DistanceMetric metric) {
  std::vector<std::vector<double>> fields;
  fields.reserve(samples.size());
  for (const auto& s : samples.entries()) {
    std::vector<double> d(grid.node_count());
    if (metric == DistanceMetric::GraphHops) {
      const auto hops = grid.hop_distances(s.node);
      for (NodeId x = 0; x < grid.node_count(); ++x)
        d[x] = static_cast<double>(hops[x]);
    } else {
      const Cell sc = grid.cell_of(s.node);
      for (NodeId x = 0; x < grid.node_count(); ++x)
        d[x] = euclidean_cells(grid.cell_of(x), sc);
    }
    fields.push_back(std::move(d));
  }
  return fields;
}

// Head interval a cell must land in to satisfy the condition against one
// sample: value +- distance*ratio. Moving to the nearest endpoint is the
// same real-arithmetic step as adding/subtracting violation*ratio, but the
// clamped value is exactly reproducible, so the per-pair sign test and the
// update can never disagree at the fixpoint.
struct HeadInterval {
  double lo;
  double hi;
};

HeadInterval sample_interval(double sample_value, double dist, double ratio) {
  const double extent = dist * ratio;
  return {sample_value - extent, sample_value + extent};
}

double clamp_into(double v, HeadInterval iv) {
  return std::min(std::max(v, iv.lo), iv.hi);
}

double mean_sample_value(const SampleSet& samples) {
  double sum = 0.0;
  for (const auto& s : samples.entries()) sum += s.value;
  return sum / static_cast<double>(samples.size());
}

}  // namespace

double algorithm_a_step(const HeadSurface& surface, NodeId cell,
                        const SampleSet& samples, const GridDomain& grid,
                        const FitConfig& cfg) {
  surface.require_on(grid);
  samples.require_on(grid);
  grid.require_node(cell);

  std::vector<double> dist(samples.size());
  if (cfg.metric == DistanceMetric::GraphHops) {
    const auto hops = grid.hop_distances(cell);
    for (std::size_t k = 0; k < samples.size(); ++k)
      dist[k] = static_cast<double>(hops[samples.entries()[k].node]);
  } else {
    const Cell c = grid.cell_of(cell);
    for (std::size_t k = 0; k < samples.size(); ++k)
      dist[k] = euclidean_cells(c, grid.cell_of(samples.entries()[k].node));
  }

  const double ratio = samples.scale().ratio;
  double v = surface[cell];
  // Updates apply cumulatively within the step, in sample entry order.
  for (std::size_t k = 0; k < samples.size(); ++k)
    v = clamp_into(v, sample_interval(samples.entries()[k].value, dist[k], ratio));
  return v;
}

double residual_violation(const HeadSurface& surface, const SampleSet& samples,
                          const GridDomain& grid, DistanceMetric metric) {
  surface.require_on(grid);
  samples.require_on(grid);

  const auto fields = sample_distance_fields(samples, grid, metric);
  const double ratio = samples.scale().ratio;
  double worst = -std::numeric_limits<double>::infinity();
  for (NodeId x = 0; x < grid.node_count(); ++x) {
    const double v = surface[x];
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto iv =
          sample_interval(samples.entries()[k].value, fields[k][x], ratio);
      // Signed distance outside [lo, hi], in level units. Equals
      // |v - value|/ratio - d up to rounding, but shares the interval
      // arithmetic of the update so its sign is exact at the fixpoint.
      const double excess = std::max(v - iv.hi, iv.lo - v);
      worst = std::max(worst, excess / ratio);
    }
  }
  return worst;
}

std::pair<HeadSurface, FitReport> fit_individual(const SampleSet& samples,
                                                 const GridDomain& grid,
                                                 const FitConfig& cfg) {
  samples.require_on(grid);
  if (cfg.max_sweeps < 1) throw ContractError("max_sweeps must be >= 1");

  const double init = cfg.init_value.value_or(mean_sample_value(samples));
  const auto fields = sample_distance_fields(samples, grid, cfg.metric);
  const double ratio = samples.scale().ratio;

  HeadSurface surface =
      HeadSurface::constant(grid.node_count(), init, samples.scale());

  FitReport report;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    for (NodeId x = 0; x < grid.node_count(); ++x) {
      double v = surface[x];
      for (std::size_t k = 0; k < samples.size(); ++k)
        v = clamp_into(
            v, sample_interval(samples.entries()[k].value, fields[k][x], ratio));
      surface[x] = v;
    }
    report.sweeps_run = sweep + 1;
    const double residual =
        residual_violation(surface, samples, grid, cfg.metric);
    report.residual_history.push_back(residual);
    if (residual <= 0.0) {
      report.converged = true;
      report.max_violation = 0.0;
      return {std::move(surface), std::move(report)};
    }
    report.max_violation = residual;
  }
  return {std::move(surface), std::move(report)};
}

}  // namespace gvflow
