#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gvflow/cli.hpp"
#include "gvflow/config.hpp"
#include "gvflow/errors.hpp"

namespace {

gvflow::RunConfig resolve_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides) {
  gvflow::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = gvflow::parse_config_file(config_path);
  }
  for (const std::string& assignment : overrides) {
    gvflow::apply_override(cfg, assignment);
  }
  return cfg;
}

void add_config_options(CLI::App* cmd, std::string& config_path,
                        std::vector<std::string>& overrides) {
  cmd->add_option("--config", config_path, "run config file (key = value)");
  cmd->add_option("--set", overrides, "override one config key (key=value)")
      ->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gvflow: gradually varied surface fitting and groundwater flow"};
  app.require_subcommand(1);

  std::string csv_path;
  std::string store_dir;
  std::string out_dir;
  std::string config_path;
  std::vector<std::string> overrides;
  int time_index = 0;

  CLI::App* ingest =
      app.add_subcommand("ingest", "Ingest a well CSV into a store directory");
  ingest->add_option("csv", csv_path, "input CSV file")->required();
  ingest->add_option("store", store_dir, "store directory")->required();

  CLI::App* check =
      app.add_subcommand("check", "Report per-time sample feasibility");
  check->add_option("store", store_dir, "store directory")->required();
  add_config_options(check, config_path, overrides);

  CLI::App* fit = app.add_subcommand("fit", "Fit one time slice");
  fit->add_option("store", store_dir, "store directory")->required();
  fit->add_option("--time", time_index, "time index to fit")->required();
  fit->add_option("--out", out_dir, "output directory")->required();
  add_config_options(fit, config_path, overrides);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Fit every time and evolve the flow equation");
  simulate->add_option("store", store_dir, "store directory")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  add_config_options(simulate, config_path, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gvflow::kExitInputError;
  }

  gvflow::RunConfig cfg;
  try {
    cfg = resolve_config(config_path, overrides);
  } catch (const gvflow::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gvflow::kExitIoError;
  } catch (const gvflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gvflow::kExitInputError;
  }

  if (*ingest) {
    return gvflow::cmd_ingest(csv_path, store_dir, std::cout, std::cerr);
  }
  if (*check) {
    return gvflow::cmd_check(store_dir, cfg, std::cout, std::cerr);
  }
  if (*fit) {
    return gvflow::cmd_fit(store_dir, cfg, time_index, out_dir, std::cout,
                           std::cerr);
  }
  if (*simulate) {
    return gvflow::cmd_simulate(store_dir, cfg, out_dir, std::cout,
                                std::cerr);
  }
  return gvflow::kExitInputError;
}
