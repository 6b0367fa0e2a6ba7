#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/gvcore.hpp"

namespace gvflow {

struct FitConfig {
  // Initial fill for the working array; defaults to the mean of the sample
  // values, which avoids biasing toward any one well.
  std::optional<double> init_value;
  int max_sweeps = 100;
  DistanceMetric metric = DistanceMetric::EuclideanCells;
};

struct FitReport {
  int sweeps_run = 0;
  // Largest remaining positive excess over the per-pair condition
  // |value gap| / ratio <= distance; zero when converged.
  double max_violation = 0.0;
  bool converged = false;
  // Signed residual after each sweep, for diagnostics.
  std::vector<double> residual_history;
};

// One sample-point-contribution update of a single cell: for each sample in
// entry order, if the cell violates the pairwise condition against that
// sample, move the cell value toward the sample by the violation (in head
// units). Returns the updated value; the cell at a sample's own location
// snaps exactly to the sample value.
double algorithm_a_step(const HeadSurface& surface, NodeId cell,
                        const SampleSet& samples, const GridDomain& grid,
                        const FitConfig& cfg = {});

// Sweeps all cells in row-major order, repeating until no positive violation
// remains or max_sweeps is hit. A converged surface interpolates every sample
// exactly at the sample's cell.
std::pair<HeadSurface, FitReport> fit_individual(const SampleSet& samples,
                                                 const GridDomain& grid,
                                                 const FitConfig& cfg = {});

// Max over all (cell, sample) pairs of |surface(cell) - value| / ratio - d.
// <= 0 means the pairwise condition holds everywhere.
double residual_violation(const HeadSurface& surface, const SampleSet& samples,
                          const GridDomain& grid, DistanceMetric metric);

}  // namespace gvflow
