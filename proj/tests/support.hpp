#pragma once

// Shared fixtures: the Virginia well table used across the test suite, plus
// scratch-directory and child-process helpers.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace support {

struct Well {
  const char* station;
  double value;
  double lat;
  double lon;
  int cell_row;  // on the 60x60 grid over the table's bounding box
  int cell_col;
};

// Eight observation wells (value in feet, WGS84 degrees) and the grid cell
// each one lands in on a 60x60 grid spanning their bounding box.
inline const std::vector<Well>& va_wells() {
  static const std::vector<Well> wells = {
      {"w0", 4.65, 36.62074879, -76.10938540, 0, 54},
      {"w1", 75.37, 36.92515020, -77.17746768, 59, 0},
      {"w2", 6.00, 36.69104276, -76.00948530, 13, 59},
      {"w3", 175.80, 36.78431615, -76.64328700, 32, 27},
      {"w4", 168.33, 36.80403855, -76.73495750, 36, 22},
      {"w5", 157.71, 36.85931567, -76.58634110, 47, 30},
      {"w6", 208.26, 36.68320624, -76.91329390, 12, 13},
      {"w7", 7.26, 36.78737704, -76.05153760, 32, 57},
  };
  return wells;
}

inline constexpr double kVaSwLat = 36.62074879;
inline constexpr double kVaSwLong = -77.17746768;
inline constexpr double kVaNeLat = 36.92515020;
inline constexpr double kVaNeLong = -76.00948530;

inline std::string va_wells_csv(int time_index = 0) {
  std::ostringstream out;
  out << "station_id,lat,long,value,time_index\n";
  out << std::setprecision(17);
  for (const auto& w : va_wells())
    out << w.station << ',' << w.lat << ',' << w.lon << ',' << w.value << ','
        << time_index << '\n';
  return out.str();
}

// Fresh scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("gvflow_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs a command line, capturing exit status and both output streams.
inline RunResult run_process(const std::string& command, const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / ("gvflow_run_" + tag + ".out");
  const auto err_path = dir / ("gvflow_run_" + tag + ".err");
  const std::string full = command + " >" + out_path.string() + " 2>" + err_path.string();
  const int status = std::system(full.c_str());
  RunResult result;
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  result.out = read_text(out_path);
  result.err = read_text(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return result;
}

}  // namespace support
