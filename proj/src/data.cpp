#include "gvflow/data.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <tuple>
#include <utility>

#include "gvflow/errors.hpp"
#include "internal_util.hpp"

namespace gvflow {

namespace fs = std::filesystem;

using internal::format_double;
using internal::trim;
using internal::write_file_atomic;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void fail_csv(std::size_t line, const std::string& column,
                           const std::string& detail) {
  std::ostringstream msg;
  msg << "line " << line;
  if (!column.empty()) msg << ", field '" << column << "'";
  msg << ": " << detail;
  throw CsvError(msg.str(), line, column);
}

double parse_double(const std::string& field, const char* name,
                    std::size_t line) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail_csv(line, name, "not a number: '" + field + "'");
  }
  return v;
}

int parse_time_index(const std::string& field, std::size_t line) {
  int v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail_csv(line, "time_index", "not an integer: '" + field + "'");
  }
  return v;
}

struct FieldIssue {
  std::string column;
  std::string message;
};

// First invariant the record breaks, if any. Shared between CSV ingestion
// (which adds line context) and direct dataset construction.
std::optional<FieldIssue> record_issue(const WellRecord& r) {
  if (r.station_id.empty()) {
    return FieldIssue{"station_id", "station_id must be nonempty"};
  }
  if (r.station_id.find_first_of(",\r\n") != std::string::npos) {
    return FieldIssue{"station_id",
                      "station_id must not contain commas or line breaks"};
  }
  if (trim(r.station_id) != r.station_id) {
    return FieldIssue{
        "station_id",
        "station_id must not have leading or trailing whitespace"};
  }
  if (!std::isfinite(r.lat) || r.lat < -90.0 || r.lat > 90.0) {
    std::ostringstream msg;
    msg << "lat " << r.lat << " out of range [-90, 90]";
    return FieldIssue{"lat", msg.str()};
  }
  if (!std::isfinite(r.lon) || r.lon < -180.0 || r.lon > 180.0) {
    std::ostringstream msg;
    msg << "long " << r.lon << " out of range [-180, 180]";
    return FieldIssue{"long", msg.str()};
  }
  if (!std::isfinite(r.value)) {
    return FieldIssue{"value", "value must be finite"};
  }
  if (r.time_index < 0) {
    std::ostringstream msg;
    msg << "time_index " << r.time_index << " must be nonnegative";
    return FieldIssue{"time_index", msg.str()};
  }
  return std::nullopt;
}

// Exclusive advisory lock: fails fast when another process holds the store.
class StoreLock {
public:
  explicit StoreLock(const fs::path& dir) : path_(dir / ".lock") {
    std::FILE* f = std::fopen(path_.string().c_str(), "wx");
    if (f == nullptr) {
      if (errno == EEXIST) {
        throw IoError("store '" + dir.string() +
                      "' is locked by another process (stale lock: remove " +
                      path_.string() + ")");
      }
      throw IoError("cannot lock store '" + dir.string() +
                    "': " + std::generic_category().message(errno));
    }
    std::fclose(f);
  }
  ~StoreLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

private:
  fs::path path_;
};

const char* kStoreVersion = "gvflow-store v1";
const char* kCsvHeader = "station_id,lat,long,value,time_index";

}  // namespace

WellDataset::WellDataset(std::vector<WellRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) {
    throw ContractError("dataset must contain at least one record");
  }
  for (const WellRecord& r : records_) {
    if (const auto issue = record_issue(r)) {
      throw ContractError(issue->message);
    }
  }
  std::sort(records_.begin(), records_.end(),
            [](const WellRecord& a, const WellRecord& b) {
              return std::tie(a.station_id, a.time_index) <
                     std::tie(b.station_id, b.time_index);
            });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].station_id == records_[i - 1].station_id &&
        records_[i].time_index == records_[i - 1].time_index) {
      std::ostringstream msg;
      msg << "duplicate record for station '" << records_[i].station_id
          << "' at time " << records_[i].time_index;
      throw ContractError(msg.str());
    }
  }
}

int WellDataset::time_min() const {
  int t = records_.front().time_index;
  for (const WellRecord& r : records_) t = std::min(t, r.time_index);
  return t;
}

int WellDataset::time_max() const {
  int t = records_.front().time_index;
  for (const WellRecord& r : records_) t = std::max(t, r.time_index);
  return t;
}

BoundingBox WellDataset::extent() const {
  BoundingBox box{{records_.front().lat, records_.front().lon},
                  {records_.front().lat, records_.front().lon}};
  for (const WellRecord& r : records_) {
    box.sw.lat = std::min(box.sw.lat, r.lat);
    box.sw.lon = std::min(box.sw.lon, r.lon);
    box.ne.lat = std::max(box.ne.lat, r.lat);
    box.ne.lon = std::max(box.ne.lon, r.lon);
  }
  return box;
}

std::vector<WellRecord> WellDataset::records_at(int time_index) const {
  std::vector<WellRecord> slice;
  for (const WellRecord& r : records_) {
    if (r.time_index == time_index) slice.push_back(r);
  }
  return slice;
}

WellDataset ingest_csv(std::istream& in) {
  std::vector<WellRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (!have_header) {
      if (split_fields(kCsvHeader) != fields) {
        fail_csv(line_no, "",
                 std::string("header must be '") + kCsvHeader + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 5) {
      std::ostringstream msg;
      msg << "expected 5 fields, found " << fields.size();
      fail_csv(line_no, "", msg.str());
    }
    WellRecord r;
    r.station_id = fields[0];
    r.lat = parse_double(fields[1], "lat", line_no);
    r.lon = parse_double(fields[2], "long", line_no);
    r.value = parse_double(fields[3], "value", line_no);
    r.time_index = parse_time_index(fields[4], line_no);
    if (const auto issue = record_issue(r)) {
      fail_csv(line_no, issue->column, issue->message);
    }
    records.push_back(std::move(r));
  }
  if (!have_header) {
    throw CsvError("empty input: missing header line", 1, "");
  }
  if (records.empty()) {
    fail_csv(line_no, "", "no data rows after the header");
  }
  return WellDataset(std::move(records));
}

WellDataset ingest_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  try {
    return ingest_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

MappedSamples samples_at(const WellDataset& ds, int time_index,
                         const GridDomain& grid, const LevelScale& scale) {
  const std::vector<WellRecord> slice = ds.records_at(time_index);
  if (slice.empty()) {
    std::ostringstream msg;
    msg << "no records at time " << time_index << " (dataset covers "
        << ds.time_min() << ".." << ds.time_max() << ")";
    throw ContractError(msg.str());
  }
  std::map<NodeId, std::pair<double, int>> cells;  // node -> (sum, count)
  for (const WellRecord& r : slice) {
    const Cell c = latlong_to_cell(grid, r.lat, r.lon);
    auto& [sum, count] = cells[grid.node_of(c)];
    sum += r.value;
    ++count;
  }
  std::vector<Sample> entries;
  entries.reserve(cells.size());
  int collisions = 0;
  for (const auto& [node, agg] : cells) {
    entries.push_back({node, agg.first / agg.second});
    collisions += agg.second - 1;
  }
  return {SampleSet(std::move(entries), scale), collisions};
}

void store(const WellDataset& ds, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create store directory '" + dir.string() +
                  "': " + ec.message());
  }
  const StoreLock lock(dir);
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (const WellRecord& r : ds.records()) {
    csv << r.station_id << ',' << format_double(r.lat) << ','
        << format_double(r.lon) << ',' << format_double(r.value) << ','
        << r.time_index << '\n';
  }
  write_file_atomic(dir / "manifest.txt", std::string(kStoreVersion) + "\n");
  write_file_atomic(dir / "records.csv", csv.str());
}

WellDataset load(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("no such store directory: '" + dir.string() + "'");
  }
  const StoreLock lock(dir);
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) {
    throw StoreFormatError("not a well store (missing manifest.txt): '" +
                           dir.string() + "'");
  }
  std::string first;
  std::getline(manifest, first);
  if (trim(first) != kStoreVersion) {
    throw StoreFormatError("unsupported store version '" + trim(first) +
                           "' in '" + dir.string() + "' (expected '" +
                           kStoreVersion + "')");
  }
  return ingest_csv(dir / "records.csv");
}

void export_raster(const HeadSurface& surface, const GridDomain& grid,
                   const fs::path& path, RasterFormat format) {
  surface.require_on(grid);
  double lo = surface[0];
  double hi = surface[0];
  for (NodeId a = 0; a < surface.size(); ++a) {
    lo = std::min(lo, surface[a]);
    hi = std::max(hi, surface[a]);
  }
  const double range = hi - lo;

  if (format == RasterFormat::Pgm) {
    std::ostringstream head;
    head << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
    std::string content = head.str();
    content.reserve(content.size() + static_cast<std::size_t>(
                                         grid.rows() * grid.cols()));
    for (int display_row = 0; display_row < grid.rows(); ++display_row) {
      const int row = grid.rows() - 1 - display_row;  // row 0 = north
      for (int col = 0; col < grid.cols(); ++col) {
        const double v = surface[grid.node_of({row, col})];
        int pixel = 0;
        if (range > 0.0) {
          pixel = static_cast<int>(std::lround(255.0 * (v - lo) / range));
        }
        pixel = std::clamp(pixel, 0, 255);
        content.push_back(static_cast<char>(static_cast<unsigned char>(pixel)));
      }
    }
    write_file_atomic(path, content);
    return;
  }

  std::ostringstream out;
  for (int display_row = 0; display_row < grid.rows(); ++display_row) {
    const int row = grid.rows() - 1 - display_row;
    for (int col = 0; col < grid.cols(); ++col) {
      if (col > 0) out << ',';
      out << format_double(surface[grid.node_of({row, col})]);
    }
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

HeadSurface import_raster_csv(const fs::path& path, const GridDomain& grid,
                              const LevelScale& scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::vector<double> values(static_cast<std::size_t>(grid.node_count()), 0.0);
  std::string line;
  for (int display_row = 0; display_row < grid.rows(); ++display_row) {
    if (!std::getline(in, line)) {
      std::ostringstream msg;
      msg << "raster has " << display_row << " rows, grid needs "
          << grid.rows();
      throw CsvError(msg.str(), static_cast<std::size_t>(display_row) + 1, "");
    }
    const std::vector<std::string> fields = split_fields(line);
    if (static_cast<int>(fields.size()) != grid.cols()) {
      std::ostringstream msg;
      msg << "expected " << grid.cols() << " values, found " << fields.size();
      fail_csv(static_cast<std::size_t>(display_row) + 1, "", msg.str());
    }
    const int row = grid.rows() - 1 - display_row;
    for (int col = 0; col < grid.cols(); ++col) {
      values[grid.node_of({row, col})] = parse_double(
          fields[col], "cell", static_cast<std::size_t>(display_row) + 1);
    }
  }
  return HeadSurface(std::move(values), scale);
}

}  // namespace gvflow
