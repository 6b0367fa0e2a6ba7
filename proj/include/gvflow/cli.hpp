#pragma once

#include <filesystem>
#include <iosfwd>

#include "gvflow/config.hpp"

namespace gvflow {

// Exit contract shared by every command: 0 success, 1 method
// non-convergence or infeasibility, 2 input error, 3 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitIoError = 3;

// Each command catches library errors itself and maps them onto the exit
// contract, printing a one-line diagnostic to err.

// Parses the CSV and persists it as a store directory.
int cmd_ingest(const std::filesystem::path& csv_path,
               const std::filesystem::path& store_dir, std::ostream& out,
               std::ostream& err);

// Prints a feasibility line per time index in the dataset's range; exits 1
// (with witness pairs printed) when any time is infeasible under graph-hops.
int cmd_check(const std::filesystem::path& store_dir, const RunConfig& cfg,
              std::ostream& out, std::ostream& err);

// Fits one time slice; writes fit_t<k> rasters and fit_t<k>.report.txt.
int cmd_fit(const std::filesystem::path& store_dir, const RunConfig& cfg,
            int time_index, const std::filesystem::path& out_dir,
            std::ostream& out, std::ostream& err);

// Fits every time then evolves consecutive pairs under the flow equation;
// writes sim_t<k> rasters and convergence.csv. A single-time store degrades
// to the individual fit with a warning.
int cmd_simulate(const std::filesystem::path& store_dir, const RunConfig& cfg,
                 const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err);

}  // namespace gvflow
