#include "gvflow/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gvflow/errors.hpp"
#include "internal_util.hpp"

namespace gvflow {

using internal::trim;

namespace {

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': not a number: '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, comma - start)));
    start = comma + 1;
  }
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "grid.rows") {
    cfg.rows = parse_int(key, value);
  } else if (key == "grid.cols") {
    cfg.cols = parse_int(key, value);
  } else if (key == "grid.bbox") {
    if (value == "auto") {
      cfg.bbox_auto = true;
      return;
    }
    const std::vector<std::string> parts = split_commas(value);
    if (parts.size() != 4) {
      throw ConfigError(
          "key 'grid.bbox': expected 'auto' or 'swLat,swLong,neLat,neLong', "
          "got '" +
          value + "'");
    }
    cfg.bbox.sw.lat = parse_double(key, parts[0]);
    cfg.bbox.sw.lon = parse_double(key, parts[1]);
    cfg.bbox.ne.lat = parse_double(key, parts[2]);
    cfg.bbox.ne.lon = parse_double(key, parts[3]);
    cfg.bbox_auto = false;
  } else if (key == "grid.adjacency") {
    if (value == "4") {
      cfg.adjacency = Adjacency::FourNeighbor;
    } else if (value == "8") {
      cfg.adjacency = Adjacency::EightNeighbor;
    } else {
      throw ConfigError("key 'grid.adjacency': expected 4 or 8, got '" +
                        value + "'");
    }
  } else if (key == "scale.n_levels") {
    try {
      cfg.scale = LevelScale(parse_int(key, value), cfg.scale.ratio);
    } catch (const ContractError& e) {
      throw ConfigError("key 'scale.n_levels': " + std::string(e.what()));
    }
  } else if (key == "scale.ratio") {
    try {
      cfg.scale = LevelScale(cfg.scale.n_levels, parse_double(key, value));
    } catch (const ContractError& e) {
      throw ConfigError("key 'scale.ratio': " + std::string(e.what()));
    }
  } else if (key == "fit.init") {
    if (value == "auto") {
      cfg.fit.init_value.reset();
    } else {
      cfg.fit.init_value = parse_double(key, value);
    }
  } else if (key == "fit.max_sweeps") {
    cfg.fit.max_sweeps = parse_int(key, value);
  } else if (key == "fit.metric") {
    if (value == "euclidean") {
      cfg.fit.metric = DistanceMetric::EuclideanCells;
    } else if (value == "hops") {
      cfg.fit.metric = DistanceMetric::GraphHops;
    } else {
      throw ConfigError("key 'fit.metric': expected euclidean or hops, got '" +
                        value + "'");
    }
  } else if (key == "flow.alpha") {
    cfg.flow.alpha = parse_double(key, value);
  } else if (key == "flow.g") {
    cfg.flow.source = SourceTerm(parse_double(key, value));
  } else if (key == "flow.max_iters") {
    cfg.flow.max_iters = parse_int(key, value);
  } else if (key == "flow.tolerance") {
    cfg.flow.tolerance = parse_double(key, value);
  } else if (key == "flow.boundary") {
    if (value == "frozen") {
      cfg.flow.boundary = BoundaryMode::Frozen;
    } else if (value == "mirror") {
      cfg.flow.boundary = BoundaryMode::MirrorGhost;
    } else {
      throw ConfigError(
          "key 'flow.boundary': expected frozen or mirror, got '" + value +
          "'");
    }
  } else if (key == "flow.gv_every") {
    cfg.gv_every = parse_int(key, value);
  } else if (key == "io.raster_format") {
    if (value != "pgm" && value != "csv" && value != "both") {
      throw ConfigError(
          "key 'io.raster_format': expected pgm, csv, or both, got '" + value +
          "'");
    }
    cfg.raster_format = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void assign_line(RunConfig& cfg, const std::string& raw) {
  const std::size_t eq = raw.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + trim(raw) + "'");
  }
  const std::string key = trim(raw.substr(0, eq));
  const std::string value = trim(raw.substr(eq + 1));
  if (key.empty()) {
    throw ConfigError("missing key in '" + trim(raw) + "'");
  }
  assign(cfg, key, value);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    try {
      assign_line(cfg, line);
    } catch (const ConfigError& e) {
      std::ostringstream msg;
      msg << "line " << line_no << ": " << e.what();
      throw ConfigError(msg.str());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config '" + path.string() + "' for reading");
  }
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  try {
    assign_line(cfg, assignment);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("override: ") + e.what());
  }
}

GridDomain make_grid(const RunConfig& cfg, const WellDataset& ds) {
  const BoundingBox box = cfg.bbox_auto ? ds.extent() : cfg.bbox;
  return build_grid(box.sw, box.ne, cfg.rows, cfg.cols, cfg.adjacency);
}

}  // namespace gvflow
