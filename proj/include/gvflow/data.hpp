#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/gvcore.hpp"

namespace gvflow {

// One well observation. Values are carried opaquely in their source units.
struct WellRecord {
  std::string station_id;
  double lat = 0.0;
  double lon = 0.0;
  double value = 0.0;
  int time_index = 0;  // day index, nonnegative

  bool operator==(const WellRecord&) const = default;
};

struct BoundingBox {
  LatLong sw;
  LatLong ne;
};

// Immutable validated observations, sorted by (station_id, time_index) so
// downstream processing is independent of input row order. Nonempty; keys are
// unique; lat in [-90, 90], long in [-180, 180], values finite.
class WellDataset {
public:
  explicit WellDataset(std::vector<WellRecord> records);

  const std::vector<WellRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  int time_min() const;
  int time_max() const;

  // Component-wise min/max corners; degenerate (sw == ne) for one record.
  BoundingBox extent() const;

  // The slice at one time index, in station_id order. May be empty.
  std::vector<WellRecord> records_at(int time_index) const;

  bool operator==(const WellDataset&) const = default;

private:
  std::vector<WellRecord> records_;
};

// Reads the schema `station_id,lat,long,value,time_index` (header required,
// UTF-8, comma separators, '.' decimal point). Malformed rows raise CsvError
// carrying the 1-based line number and the field name; at least one data row
// is required.
WellDataset ingest_csv(std::istream& in);
WellDataset ingest_csv(const std::filesystem::path& path);

struct MappedSamples {
  SampleSet samples;
  int collisions = 0;  // records beyond the first in their cell
};

// Maps one time slice onto grid cells via latlong_to_cell; records landing in
// the same cell contribute the arithmetic mean of their values. Entries come
// out in ascending node id. An empty slice raises ContractError; a record
// outside the grid bbox raises OutOfDomainError.
MappedSamples samples_at(const WellDataset& ds, int time_index,
                         const GridDomain& grid, const LevelScale& scale);

// Directory store: manifest.txt holding the version line `gvflow-store v1`
// plus records.csv in the ingest schema with full-precision values, so
// load(store(ds)) round-trips bit-exactly. Files are written to a temporary
// name and renamed into place; store and load both take an advisory lock
// file (.lock) for the duration.
void store(const WellDataset& ds, const std::filesystem::path& dir);
WellDataset load(const std::filesystem::path& dir);

enum class RasterFormat { Pgm, Csv };

// PGM: binary P5, width=cols, height=rows, maxval 255,
// pixel = round(255*(v - min)/(max - min)); a constant surface maps to all
// zeros. CSV: rows lines of cols comma-separated full-precision values. Row 0
// of either raster is the northernmost grid row.
void export_raster(const HeadSurface& surface, const GridDomain& grid,
                   const std::filesystem::path& path, RasterFormat format);

// Reads back a raster CSV written by export_raster; the round-trip is exact.
HeadSurface import_raster_csv(const std::filesystem::path& path,
                              const GridDomain& grid, const LevelScale& scale);

}  // namespace gvflow
