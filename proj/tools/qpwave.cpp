#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpwave/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasi-periodic spectral solver and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  bool serial = false;
  int threads = 1;

  const char* modes[] = {"solve", "certify", "diagnose-liouville",
                         "compare-oracle"};
  const char* blurbs[] = {
      "Certified fixed-point solve; writes manifest.json and trajectory.csv",
      "Contraction certificate only; writes certificate.json",
      "Small-divisor witnesses and divergence chain; writes chain_report.json",
      "Fixed-point solve cross-checked by the one-step integrator"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(modes[i], blurbs[i]);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--output", output_dir, "output directory");
    sub->add_flag("--serial", serial,
                  "deterministic byte-stable outputs (zeroes volatile fields)");
    sub->add_option("--threads", threads, "worker thread budget (recorded)")
        ->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string mode = app.get_subcommands().front()->get_name();
  qpwave::RunOptions opts;
  opts.output_dir = output_dir;
  opts.serial = serial;
  opts.threads = threads;

  try {
    qpwave::RunConfig cfg = qpwave::load_config_file(config_path, mode);
    return qpwave::execute_run(cfg, opts);
  } catch (const qpwave::error& e) {
    // Config loading/parsing failures arrive here; execute_run handles the rest.
    nlohmann::json err = {
        {"error",
         {{"code", qpwave::errc_name(e.code())}, {"message", e.what()}}}};
    std::cerr << err.dump() << std::endl;
    return qpwave::exit_code_for(e.code());
  }
}
