#include "gvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

#include "gvflow/errors.hpp"

namespace gvflow {

namespace {

void validate_params(const FlowParams& p) {
  if (!std::isfinite(p.alpha) || p.alpha <= 0.0) {
    throw ContractError("flow alpha must be positive and finite");
  }
  if (!std::isfinite(p.tolerance) || p.tolerance <= 0.0) {
    throw ContractError("flow tolerance must be positive and finite");
  }
  if (p.max_iters < 1) {
    throw ContractError("flow max_iters must be at least 1");
  }
}

void require_same_scale(const HeadSurface& a, const HeadSurface& b) {
  if (!(a.scale() == b.scale())) {
    throw ContractError("surfaces must share one level scale");
  }
}

// Sum of the cardinal h2 neighbors that exist; deg reports how many did.
double cardinal_sum(const GridDomain& grid, const HeadSurface& h2, Cell c,
                    int& deg) {
  double sum = 0.0;
  deg = 0;
  if (c.row > 0) {
    sum += h2[grid.node_of({c.row - 1, c.col})];
    ++deg;
  }
  if (c.row + 1 < grid.rows()) {
    sum += h2[grid.node_of({c.row + 1, c.col})];
    ++deg;
  }
  if (c.col > 0) {
    sum += h2[grid.node_of({c.row, c.col - 1})];
    ++deg;
  }
  if (c.col + 1 < grid.cols()) {
    sum += h2[grid.node_of({c.row, c.col + 1})];
    ++deg;
  }
  return sum;
}

double max_abs_delta(const HeadSurface& a, const HeadSurface& b) {
  double worst = 0.0;
  for (NodeId x = 0; x < a.size(); ++x) {
    worst = std::max(worst, std::abs(a[x] - b[x]));
  }
  return worst;
}

}  // namespace

SourceTerm SourceTerm::field(std::vector<double> per_node) {
  if (per_node.empty()) {
    throw ContractError("source field must cover at least one cell");
  }
  for (double g : per_node) {
    if (!std::isfinite(g)) {
      throw ContractError("source field values must be finite");
    }
  }
  SourceTerm s;
  s.per_node_ = std::move(per_node);
  return s;
}

void SourceTerm::require_on(const DiscreteDomain& dom) const {
  if (per_node_.empty()) {
    if (!std::isfinite(scalar_)) {
      throw ContractError("source term must be finite");
    }
    return;
  }
  if (static_cast<int>(per_node_.size()) != dom.node_count()) {
    std::ostringstream msg;
    msg << "source field covers " << per_node_.size()
        << " cells but the domain has " << dom.node_count();
    throw ContractError(msg.str());
  }
}

bool SequentialFitResult::all_converged() const {
  for (const FlowStepReport& step : steps) {
    if (!step.converged) return false;
  }
  return true;
}

double stencil_residual(const GridDomain& grid, const HeadSurface& h1,
                        const HeadSurface& h2, NodeId cell,
                        const FlowParams& p) {
  validate_params(p);
  h1.require_on(grid);
  h2.require_on(grid);
  require_same_scale(h1, h2);
  p.source.require_on(grid);
  grid.require_node(cell);
  if (!grid.is_interior(cell)) {
    std::ostringstream msg;
    msg << "stencil residual needs all four cardinal neighbors; cell " << cell
        << " lies on the boundary";
    throw ContractError(msg.str());
  }
  int deg = 0;
  const double nbr_sum = cardinal_sum(grid, h2, grid.cell_of(cell), deg);
  return (h2[cell] - h1[cell]) - p.alpha * (nbr_sum - 4.0 * h2[cell]) +
         p.source.at(cell);
}

double center_update(double h1_value, double neighbor_sum, double alpha,
                     double g) {
  return (h1_value + alpha * neighbor_sum - g) / (1.0 + 4.0 * alpha);
}

std::pair<HeadSurface, double> update_sweep(const GridDomain& grid,
                                            const HeadSurface& h1,
                                            const HeadSurface& h2,
                                            const FlowParams& p,
                                            const SampleSet* pinned) {
  validate_params(p);
  h1.require_on(grid);
  h2.require_on(grid);
  require_same_scale(h1, h2);
  p.source.require_on(grid);

  std::vector<char> hold(static_cast<std::size_t>(grid.node_count()), 0);
  if (pinned != nullptr) {
    pinned->require_on(grid);
    if (!(pinned->scale() == h2.scale())) {
      throw ContractError("pinned samples must share the surface level scale");
    }
    for (const Sample& s : pinned->entries()) hold[s.node] = 1;
  }

  std::vector<double> next = h2.values();
  double max_change = 0.0;
  for (NodeId a = 0; a < grid.node_count(); ++a) {
    if (hold[a]) continue;
    const bool interior = grid.is_interior(a);
    if (!interior && p.boundary == BoundaryMode::Frozen) continue;
    int deg = 0;
    double nbr_sum = cardinal_sum(grid, h2, grid.cell_of(a), deg);
    if (!interior) nbr_sum += (4 - deg) * h2[a];  // ghost mirrors the center
    const double updated = center_update(h1[a], nbr_sum, p.alpha,
                                         p.source.at(a));
    max_change = std::max(max_change, std::abs(updated - next[a]));
    next[a] = updated;
  }
  return {HeadSurface(std::move(next), h2.scale()), max_change};
}

SequentialFitResult fit_sequential(const GridDomain& grid,
                                   const TimeSeriesSurfaces& series,
                                   const std::vector<SampleSet>& wells_by_time,
                                   const FlowParams& p, int gv_every) {
  validate_params(p);
  p.source.require_on(grid);
  if (gv_every < 1) {
    throw ContractError("gv_every must be at least 1");
  }
  if (series.times.size() != series.surfaces.size()) {
    throw ContractError("time series must pair one surface with each time");
  }
  if (series.times.size() < 2) {
    throw ContractError("sequential fitting needs at least two times");
  }
  if (wells_by_time.size() != series.times.size()) {
    throw ContractError("sequential fitting needs one sample set per time");
  }
  for (std::size_t k = 1; k < series.times.size(); ++k) {
    if (series.times[k] <= series.times[k - 1]) {
      throw ContractError("time indices must be strictly increasing");
    }
  }
  const LevelScale& scale = series.surfaces.front().scale();
  for (const HeadSurface& s : series.surfaces) {
    s.require_on(grid);
    if (!(s.scale() == scale)) {
      throw ContractError("surfaces must share one level scale");
    }
  }
  for (const SampleSet& wells : wells_by_time) {
    wells.require_on(grid);
    if (!(wells.scale() == scale)) {
      throw ContractError("samples must share the surface level scale");
    }
  }

  SequentialFitResult result;
  result.series.times = series.times;
  result.series.surfaces.push_back(series.surfaces.front());

  for (std::size_t k = 1; k < series.surfaces.size(); ++k) {
    const HeadSurface& h1 = result.series.surfaces.back();
    const SampleSet& wells = wells_by_time[k];

    // The target surface starts from its individual fit with the observed
    // well values re-asserted; pins never move afterwards.
    HeadSurface h2 = series.surfaces[k];
    for (const Sample& s : wells.entries()) h2[s.node] = s.value;

    FlowStepReport report;
    report.time = series.times[k];
    for (int iter = 1; iter <= p.max_iters; ++iter) {
      auto [swept, change] = update_sweep(grid, h1, h2, p, &wells);
      h2 = std::move(swept);
      double max_change = change;
      if (iter % gv_every == 0) {
        HeadSurface projected = gv_project(h2, grid, wells);
        max_change = std::max(max_change, max_abs_delta(projected, h2));
        h2 = std::move(projected);
      }
      report.iterations = iter;
      report.final_max_change = max_change;
      if (max_change <= p.tolerance) {
        report.converged = true;
        break;
      }
    }
    result.series.surfaces.push_back(std::move(h2));
    result.steps.push_back(report);
  }
  return result;
}

}  // namespace gvflow
