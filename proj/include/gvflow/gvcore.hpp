#pragma once

#include <optional>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/errors.hpp"

namespace gvflow {

// Quantization between real-valued heads and the integer levels 1..n.
// quantize rounds half away from zero, then clamps into [1, n].
struct LevelScale {
  int n_levels = 1;
  double ratio = 1.0;  // head units per level

  LevelScale() = default;
  LevelScale(int n, double r);

  int quantize(double v) const;
  double dequantize(int level) const { return level * ratio; }

  bool operator==(const LevelScale&) const = default;
};

struct Sample {
  NodeId node = 0;
  double value = 0.0;
  bool operator==(const Sample&) const = default;
};

// Guide points: distinct nodes with observed head values. Nonempty.
class SampleSet {
public:
  SampleSet(std::vector<Sample> entries, LevelScale scale);

  const std::vector<Sample>& entries() const { return entries_; }
  const LevelScale& scale() const { return scale_; }
  std::size_t size() const { return entries_.size(); }
  int level(std::size_t i) const;

  void require_on(const DiscreteDomain& dom) const;

private:
  std::vector<Sample> entries_;
  LevelScale scale_;
};

// Complete per-node head assignment, stored dequantized (real heads). The
// gradual-variation predicate is evaluated on quantized levels.
class HeadSurface {
public:
  HeadSurface(std::vector<double> values, LevelScale scale);
  static HeadSurface constant(int node_count, double value, LevelScale scale);

  double operator[](NodeId a) const { return values_[a]; }
  double& operator[](NodeId a) { return values_[a]; }
  const std::vector<double>& values() const { return values_; }
  const LevelScale& scale() const { return scale_; }
  int size() const { return static_cast<int>(values_.size()); }
  int level(NodeId a) const { return scale_.quantize(values_[a]); }

  void require_on(const DiscreteDomain& dom) const;

  bool operator==(const HeadSurface&) const = default;

private:
  std::vector<double> values_;
  LevelScale scale_;
};

struct FeasibilityWitness {
  NodeId node_x = 0;
  NodeId node_y = 0;
  int level_gap = 0;
  double distance = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  // First violated pair in ascending (node_x, node_y) order; set iff
  // feasible is false, in which case level_gap > distance.
  std::optional<FeasibilityWitness> witness;
};

class FeasibilityError : public Error {
public:
  explicit FeasibilityError(FeasibilityReport report);
  const FeasibilityReport& report() const { return report_; }

private:
  FeasibilityReport report_;
};

// Per-node level bounds bracketing every gradually varied extension:
//   lower(x) = max over samples s of (level(s) - d(x, s))
//   upper(x) = min over samples s of (level(s) + d(x, s))
// Raw values; they may leave [1, n] before clamping.
struct Envelopes {
  std::vector<int> lower;
  std::vector<int> upper;
};

enum class ExtendPolicy { Lower, Upper, Midpoint };

// True iff every adjacent pair of quantized levels differs by at most 1.
bool is_gradually_varied(const HeadSurface& surface, const DiscreteDomain& dom);

// Existence test for a gradually varied extension: feasible iff every sample
// pair satisfies distance >= |level gap|.
FeasibilityReport check_feasibility(
    const SampleSet& samples, const DiscreteDomain& dom,
    DistanceMetric metric = DistanceMetric::GraphHops);

// Graph-hops envelopes (the theorem's distance).
Envelopes compute_envelopes(const SampleSet& samples, const DiscreteDomain& dom);

// Constructs a gradually varied extension that interpolates the samples at
// quantized level. Throws FeasibilityError (with witness) when none exists.
HeadSurface gv_extend(const SampleSet& samples, const DiscreteDomain& dom,
                      ExtendPolicy policy = ExtendPolicy::Midpoint);

// Projects an arbitrary surface into the gradually varied class by the
// iterated sweep that clamps each node's level into
// [max neighbor level - 1, min neighbor level + 1], ascending node id, until
// fixpoint. Capped at 4*|D| passes; raises ConvergenceError beyond the cap.
// Nodes whose level survives unchanged keep their exact input value.
HeadSurface gv_project(const HeadSurface& surface, const DiscreteDomain& dom);

// Pinned variant: pinned nodes keep their (quantized) values and every node's
// level ends within the pinned envelopes. Throws FeasibilityError when the
// pinned set itself is infeasible.
HeadSurface gv_project(const HeadSurface& surface, const DiscreteDomain& dom,
                       const SampleSet& pinned);

}  // namespace gvflow
