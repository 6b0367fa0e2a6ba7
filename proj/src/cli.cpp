#include "gvflow/cli.hpp"

#include <exception>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gvflow/data.hpp"
#include "gvflow/errors.hpp"
#include "gvflow/fitting.hpp"
#include "gvflow/flow.hpp"
#include "gvflow/gvcore.hpp"
#include "internal_util.hpp"

namespace gvflow {

namespace fs = std::filesystem;

using internal::format_double;
using internal::write_file_atomic;

namespace {

// Runs a command body and maps every library error onto the exit contract.
template <typename Fn>
int guarded(Fn&& body, std::ostream& err) {
  try {
    return body();
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const Error& e) {
    // Csv/Config/Contract/OutOfDomain/UnsupportedMetric/StoreFormat: the
    // caller gave us something we cannot work with.
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitIoError;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());
  }
}

void write_rasters(const HeadSurface& surface, const GridDomain& grid,
                   const fs::path& dir, const std::string& stem,
                   const std::string& format) {
  if (format == "pgm" || format == "both") {
    export_raster(surface, grid, dir / (stem + ".pgm"), RasterFormat::Pgm);
  }
  if (format == "csv" || format == "both") {
    export_raster(surface, grid, dir / (stem + ".csv"), RasterFormat::Csv);
  }
}

void write_fit_report(const FitReport& report, const fs::path& path) {
  std::ostringstream out;
  out << "sweeps_run=" << report.sweeps_run << '\n';
  out << "max_violation=" << format_double(report.max_violation) << '\n';
  out << "converged=" << (report.converged ? "true" : "false") << '\n';
  out << "residual_history=";
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(report.residual_history[i]);
  }
  out << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace

int cmd_ingest(const fs::path& csv_path, const fs::path& store_dir,
               std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const WellDataset ds = ingest_csv(csv_path);
        store(ds, store_dir);
        out << "ingested " << ds.size() << " records covering times "
            << ds.time_min() << ".." << ds.time_max() << " into "
            << store_dir.string() << '\n';
        return kExitOk;
      },
      err);
}

int cmd_check(const fs::path& store_dir, const RunConfig& cfg,
              std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const WellDataset ds = load(store_dir);
        const GridDomain grid = make_grid(cfg, ds);
        bool all_feasible = true;
        for (int t = ds.time_min(); t <= ds.time_max(); ++t) {
          const MappedSamples mapped = samples_at(ds, t, grid, cfg.scale);
          const FeasibilityReport report =
              check_feasibility(mapped.samples, grid);
          out << "time " << t << ": "
              << (report.feasible ? "feasible" : "infeasible") << " ("
              << mapped.samples.size() << " samples";
          if (mapped.collisions > 0) {
            out << ", " << mapped.collisions << " collisions";
          }
          out << ")";
          if (!report.feasible) {
            const FeasibilityWitness& w = *report.witness;
            out << "; witness: nodes " << w.node_x << " and " << w.node_y
                << ", level gap " << w.level_gap << " > distance "
                << w.distance;
            all_feasible = false;
          }
          out << '\n';
        }
        return all_feasible ? kExitOk : kExitNotConverged;
      },
      err);
}

int cmd_fit(const fs::path& store_dir, const RunConfig& cfg, int time_index,
            const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const WellDataset ds = load(store_dir);
        const GridDomain grid = make_grid(cfg, ds);
        const MappedSamples mapped =
            samples_at(ds, time_index, grid, cfg.scale);
        const auto [surface, report] =
            fit_individual(mapped.samples, grid, cfg.fit);
        ensure_dir(out_dir);
        const std::string stem = "fit_t" + std::to_string(time_index);
        write_rasters(surface, grid, out_dir, stem, cfg.raster_format);
        write_fit_report(report, out_dir / (stem + ".report.txt"));
        out << "time " << time_index << ": "
            << (report.converged ? "converged" : "sweep cap reached")
            << " after " << report.sweeps_run
            << " sweeps, max violation " << report.max_violation << '\n';
        return report.converged ? kExitOk : kExitNotConverged;
      },
      err);
}

int cmd_simulate(const fs::path& store_dir, const RunConfig& cfg,
                 const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  return guarded(
      [&] {
        const WellDataset ds = load(store_dir);
        const GridDomain grid = make_grid(cfg, ds);
        ensure_dir(out_dir);

        TimeSeriesSurfaces series;
        std::vector<SampleSet> wells;
        bool fits_converged = true;
        for (int t = ds.time_min(); t <= ds.time_max(); ++t) {
          const MappedSamples mapped = samples_at(ds, t, grid, cfg.scale);
          auto [surface, report] = fit_individual(mapped.samples, grid,
                                                  cfg.fit);
          out << "fit time " << t << ": "
              << (report.converged ? "converged" : "sweep cap reached")
              << " after " << report.sweeps_run << " sweeps\n";
          fits_converged = fits_converged && report.converged;
          series.times.push_back(t);
          series.surfaces.push_back(std::move(surface));
          wells.push_back(mapped.samples);
        }

        std::ostringstream convergence;
        convergence << "time,iterations,max_change\n";
        bool flow_converged = true;

        if (series.times.size() >= 2) {
          const SequentialFitResult result =
              fit_sequential(grid, series, wells, cfg.flow, cfg.gv_every);
          for (std::size_t k = 0; k < result.series.times.size(); ++k) {
            write_rasters(result.series.surfaces[k], grid, out_dir,
                          "sim_t" + std::to_string(result.series.times[k]),
                          cfg.raster_format);
          }
          for (const FlowStepReport& step : result.steps) {
            convergence << step.time << ',' << step.iterations << ','
                        << format_double(step.final_max_change) << '\n';
            out << "flow time " << step.time << ": "
                << (step.converged ? "converged" : "iteration cap reached")
                << " after " << step.iterations << " iterations (max change "
                << step.final_max_change << ")\n";
          }
          flow_converged = result.all_converged();
        } else {
          err << "warning: sequential fitting needs at least two times; "
                 "wrote the individual fit only\n";
          write_rasters(series.surfaces.front(), grid, out_dir,
                        "sim_t" + std::to_string(series.times.front()),
                        cfg.raster_format);
        }

        write_file_atomic(out_dir / "convergence.csv", convergence.str());
        return fits_converged && flow_converged ? kExitOk
                                                : kExitNotConverged;
      },
      err);
}

}  // namespace gvflow
