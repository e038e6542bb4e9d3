#pragma once

// Run orchestration: wires config -> model -> certificate -> solver/oracle
// and emits the output files.  All compute kernels run sequentially; the
// thread count is recorded for provenance only.

#include <string>

#include "qpwave/errors.hpp"
#include "qpwave/runconfig.hpp"

namespace qpwave {

struct RunOptions {
  std::string output_dir;  // overrides cfg.output; default "."
  bool serial = false;     // byte-stable outputs (volatile fields zeroed)
  int threads = 1;         // recorded in the manifest
};

// Each writes its artifacts into the resolved output directory and throws
// qpwave::error on any structured failure.
void run_solve(const RunConfig& cfg, const RunOptions& opts);    // manifest.json, trajectory.csv
void run_certify(const RunConfig& cfg, const RunOptions& opts);  // certificate.json
void run_diagnose(const RunConfig& cfg, const RunOptions& opts); // chain_report.json
void run_compare(const RunConfig& cfg, const RunOptions& opts);  // + oracle.csv

// Dispatch on cfg.mode; maps structured errors to exit codes (2 validation,
// 3 non-convergence/blow-up, 4 I/O) and prints {"error":{...}} to stderr.
int execute_run(const RunConfig& cfg, const RunOptions& opts);

int exit_code_for(errc code);

}  // namespace qpwave
