#pragma once

// JSON run configuration: strict parsing (unknown keys are errors), defaults
// resolved eagerly so every emitted manifest can echo the exact settings a
// run used.

#include <optional>
#include <string>
#include <vector>

#include "qpwave/lattice.hpp"
#include "qpwave/models.hpp"
#include "qpwave/qpfield.hpp"
#include "qpwave/solver.hpp"

namespace qpwave {

struct DataEntry {
  MultiIndex n;
  double re = 0.0;
  double im = 0.0;
};

struct InitialDataConfig {
  // Either explicit coefficient triples or the preset family
  // u_hat(n) = amplitude * e^{-rate|n|} on the box |n| <= box.
  std::vector<DataEntry> entries;
  bool use_preset = false;
  double amplitude = 0.0;
  double rate = 0.0;
  int box = 0;
};

struct CustomSymbolConfig {
  std::string name;
  std::vector<double> odd;   // odd-part coefficients c_1, c_3, ...
  std::vector<double> even;  // even-part coefficients c_0, c_2, ...
  std::optional<double> epsilon;
};

struct LiouvilleConfig {
  int n_levels = 2;
  double kappa = 0.0;  // defaults to ln(9)/4, resolved at parse time
  std::vector<double> sigma = {0.0, 0.0};
  std::optional<double> tightness_kappa;  // extra chain run expected to fail
};

struct RunConfig {
  std::string mode;  // optional; the CLI subcommand must agree when both set
  std::string equation;
  int p = 1;
  int nls_sign = 1;
  std::vector<double> omega;
  std::optional<InitialDataConfig> initial_data;
  double k = 0.0;
  double kappa = 0.0;
  std::optional<double> epsilon;  // default k/2
  double R = 0.0;
  int N = 8;
  int M = 32;
  std::optional<double> T_override;  // grid horizon override (still validated)
  double tol = 1e-10;
  int max_iter = 25;
  std::string direction = "both";
  std::optional<bool> real_data;  // force/deny the realness flag
  std::optional<CustomSymbolConfig> custom_symbol;
  int oracle_refine = 8;          // oracle dt = T / (M * oracle_refine)
  double prune_threshold = 0.0;
  double gamma_floor = 1.0;
  double t_cap = 1.0;
  std::string output;  // directory; CLI --output wins
  LiouvilleConfig liouville;
};

// Strict parse + per-mode completeness validation ("" skips the mode check).
RunConfig parse_config(const std::string& json_text, const std::string& mode = "");

// File loader; missing/unreadable file is an I/O failure.
RunConfig load_config_file(const std::string& path, const std::string& mode = "");

// Resolved-config echo for manifests (all defaults filled in).
std::string resolved_config_json(const RunConfig& cfg, int indent = -1);

Direction direction_from_string(const std::string& s);

// Model with the equation's nonlinearity and either the built-in or the
// configured custom symbol, carrying the resolved epsilon.
ModelSpec config_model(const RunConfig& cfg);

// Initial data over cfg.omega; realness flag auto-detected from conjugate
// symmetry unless real_data forces it (forcing true on asymmetric data fails).
CoefficientField config_initial_data(const RunConfig& cfg);

SolverParams config_params(const RunConfig& cfg, const Certificate& cert);

double resolved_epsilon(const RunConfig& cfg);

}  // namespace qpwave
