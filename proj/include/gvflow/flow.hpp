#pragma once

#include <utility>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/gvcore.hpp"

namespace gvflow {

// Per-cell source/sink G (withdrawal positive), either uniform or a field.
class SourceTerm {
public:
  SourceTerm(double scalar = 0.0) : scalar_(scalar) {}
  static SourceTerm field(std::vector<double> per_node);

  double at(NodeId a) const {
    return per_node_.empty() ? scalar_ : per_node_[a];
  }
  bool is_scalar() const { return per_node_.empty(); }
  void require_on(const DiscreteDomain& dom) const;

private:
  double scalar_ = 0.0;
  std::vector<double> per_node_;
};

// Boundary cells lack stencil neighbors. Frozen keeps them at their fitted
// values (the data-driven fit supplies the boundary); MirrorGhost treats
// missing neighbors as copies of the center (zero-flux).
enum class BoundaryMode { Frozen, MirrorGhost };

struct FlowParams {
  double alpha = 0.25;  // diffusivity, absorbing time step and grid spacing
  SourceTerm source;    // G, per step
  int max_iters = 1000;
  double tolerance = 1e-9;  // max-abs update threshold
  BoundaryMode boundary = BoundaryMode::Frozen;
};

struct TimeSeriesSurfaces {
  std::vector<int> times;  // ascending time indices
  std::vector<HeadSurface> surfaces;
};

struct FlowStepReport {
  int time = 0;  // time index of the evolved surface (t+1)
  int iterations = 0;
  double final_max_change = 0.0;
  bool converged = false;
};

struct SequentialFitResult {
  TimeSeriesSurfaces series;
  std::vector<FlowStepReport> steps;
  bool all_converged() const;
};

// Signed defect of the discretized flow equation at an interior cell:
//   (h2 - h1) - alpha * (sum of 4 cardinal h2 neighbors - 4*h2) + G.
// Zero means the discrete equation holds exactly there. Boundary cells raise
// ContractError; boundary handling belongs to update_sweep.
double stencil_residual(const GridDomain& grid, const HeadSurface& h1,
                        const HeadSurface& h2, NodeId cell,
                        const FlowParams& p);

// Solves the stencil equation for the center value with neighbors fixed:
//   (h1 + alpha * neighbor_sum - g) / (1 + 4*alpha).
double center_update(double h1_value, double neighbor_sum, double alpha,
                     double g);

// One Jacobi pass: every non-pinned updatable cell receives center_update
// simultaneously (all reads from the pre-sweep h2). Pinned cells never move;
// under Frozen, boundary cells never move either. The stencil always uses the
// four cardinal cells regardless of the grid's adjacency scheme. Returns the
// new surface and the max absolute per-cell change.
std::pair<HeadSurface, double> update_sweep(const GridDomain& grid,
                                            const HeadSurface& h1,
                                            const HeadSurface& h2,
                                            const FlowParams& p,
                                            const SampleSet* pinned = nullptr);

// Evolves each consecutive pair (t, t+1): iterates update_sweep on the t+1
// surface until the max change drops to p.tolerance or max_iters is hit,
// re-projecting into the gradually varied class every gv_every sweeps with
// that time's wells pinned. Wells hold their exact observed values
// throughout. Non-convergence is reported per time step, not thrown.
SequentialFitResult fit_sequential(const GridDomain& grid,
                                   const TimeSeriesSurfaces& series,
                                   const std::vector<SampleSet>& wells_by_time,
                                   const FlowParams& p, int gv_every = 10);

}  // namespace gvflow
