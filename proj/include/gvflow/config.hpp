#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gvflow/data.hpp"
#include "gvflow/domain.hpp"
#include "gvflow/fitting.hpp"
#include "gvflow/flow.hpp"
#include "gvflow/gvcore.hpp"

namespace gvflow {

// Flat key=value run configuration. Every key mirrors one library parameter;
// see the README for the full key list.
struct RunConfig {
  int rows = 60;
  int cols = 60;
  bool bbox_auto = true;  // derive corners from the dataset extent
  BoundingBox bbox;       // used when bbox_auto is false
  Adjacency adjacency = Adjacency::FourNeighbor;
  LevelScale scale{256, 1.0};
  FitConfig fit;
  FlowParams flow;
  int gv_every = 10;                  // projection cadence in fit_sequential
  std::string raster_format = "both";  // pgm | csv | both
};

// Line-oriented `key = value`; '#' starts a comment, blank lines are skipped.
// Unknown keys and malformed values raise ConfigError naming the line.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::filesystem::path& path);

// Applies one `key=value` assignment (command-line override).
void apply_override(RunConfig& cfg, const std::string& assignment);

// Grid for a dataset: explicit corners, or the dataset extent under auto.
GridDomain make_grid(const RunConfig& cfg, const WellDataset& ds);

}  // namespace gvflow
