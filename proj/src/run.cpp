#include "qpwave/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "qpwave/diagnostics.hpp"
#include "qpwave/oracle.hpp"
#include "qpwave/solver.hpp"
#include "qpwave/symbols.hpp"

namespace qpwave {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg,
                                         const RunOptions& opts) {
  std::string dir = !opts.output_dir.empty() ? opts.output_dir
                    : !cfg.output.empty()    ? cfg.output
                                             : ".";
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) fail(errc::io_failure, "cannot create output directory " + dir);
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_failure, "cannot open " + path.string());
  out << text;
  out.flush();
  if (!out) fail(errc::io_failure, "cannot write " + path.string());
}

std::string trajectory_csv(const Trajectory& traj) {
  const int nu = traj.states.front().omega().nu();
  std::string s = "t";
  for (int i = 1; i <= nu; ++i) s += ",n" + std::to_string(i);
  s += ",re,im\n";
  for (size_t j = 0; j < traj.states.size(); ++j) {
    const std::string t = fmt17(traj.grid.nodes[j]);
    for (const auto& [n, v] : traj.states[j].coeffs()) {
      s += t;
      for (int c : n) {
        s += ',';
        s += std::to_string(c);
      }
      s += ',';
      s += fmt17(v.real());
      s += ',';
      s += fmt17(v.imag());
      s += '\n';
    }
  }
  return s;
}

json certificate_json(const Certificate& cert) {
  return {{"R", cert.R},         {"gamma", cert.gamma}, {"T", cert.T},
          {"q", cert.q},         {"Q", cert.Q},         {"epsilon", cert.epsilon}};
}

json params_json(const SolverParams& p, const std::string& direction) {
  return {{"k", p.k},
          {"kappa", p.kappa},
          {"gamma", p.gamma},
          {"T", p.T},
          {"R", p.R},
          {"N", p.N},
          {"M", p.M},
          {"tol", p.tol},
          {"max_iter", p.max_iter},
          {"direction", direction},
          {"prune_threshold", p.prune_threshold}};
}

json growth_json(const GrowthReport& g) {
  return {{"sup_value", g.sup_value},
          {"rate", g.rate},
          {"attained_at", g.attained_at},
          {"attained_xi", g.attained_xi},
          {"box_radius", g.box_radius}};
}

json real_or_str(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

json witness_json(const LiouvilleWitness& w) {
  return {{"level", w.level},
          {"exact", w.exact_mode},
          {"p", w.p_exact},
          {"q", w.q_exact},
          {"log10_p", real_or_str(w.log10_p)},
          {"log10_q", real_or_str(w.log10_q)},
          {"log10_C", real_or_str(w.log10_C)},
          {"remainder_rel_log10", real_or_str(w.remainder_rel_log10)}};
}

json assumptions_json() {
  return {{"omega_rationally_independent",
           "assumed; not decidable in floating point"},
          {"growth_checked_on", "lattice frequencies within the box only"}};
}

struct SolveArtifacts {
  ModelSpec model;
  CoefficientField u0;
  Certificate cert;
  SolverParams params;
  PicardResult result;
  GrowthReport growth;
  double wall_seconds = 0.0;

  SolveArtifacts(const RunConfig& cfg)
      : model(config_model(cfg)),
        u0(config_initial_data(cfg)),
        cert(certify(model, u0.omega(), cfg.R, cfg.k, cfg.kappa,
                     resolved_epsilon(cfg),
                     CertifyOptions{cfg.gamma_floor, cfg.t_cap})),
        params(config_params(cfg, cert)),
        result(),
        growth(check_growth(model.symbol, u0.omega(), cfg.k, cfg.N)) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    result = picard_solve(u0, model, params, cert);
    wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  }

  json base_manifest(const RunConfig& cfg, const RunOptions& opts) const {
    json m;
    m["config"] = json::parse(resolved_config_json(cfg));
    m["params"] = params_json(params, cfg.direction);
    m["certificate"] = certificate_json(cert);
    m["iterations"] = result.iterations;
    m["final_defect"] = result.final_defect;
    m["defect_history"] = result.defect_history;
    m["contraction_ratios"] = result.contraction_ratios;
    m["growth_check"] = growth_json(growth);
    m["assumptions"] = assumptions_json();
    m["realness"] = {
        {"data_flag", u0.real_flagged()},
        {"final_defect",
         realness_defect(result.trajectory.states.back())}};
    m["serial"] = opts.serial;
    m["threads"] = opts.threads;
    m["wall_clock_seconds"] = opts.serial ? 0.0 : wall_seconds;
    return m;
  }
};

}  // namespace

void run_solve(const RunConfig& cfg, const RunOptions& opts) {
  const auto dir = resolve_output_dir(cfg, opts);
  SolveArtifacts art(cfg);

  const double residual_self =
      residual(art.result.trajectory, art.u0, art.model,
               art.result.trajectory.grid, art.params.N,
               art.params.prune_threshold);

  // Quadrature-order probe: one refined run restricted to the M and 2M grids,
  // so both residuals measure the same underlying trajectory.
  SolverParams fine = art.params;
  fine.M = art.params.M * 4;
  PicardResult refined = picard_solve(art.u0, art.model, fine, art.cert);
  Trajectory at_m = restrict_nodes(refined.trajectory, 4);
  Trajectory at_2m = restrict_nodes(refined.trajectory, 2);
  const double res_m = residual(at_m, art.u0, art.model, at_m.grid,
                                art.params.N, art.params.prune_threshold);
  const double res_2m = residual(at_2m, art.u0, art.model, at_2m.grid,
                                 art.params.N, art.params.prune_threshold);

  json manifest = art.base_manifest(cfg, opts);
  manifest["method"] = "picard";
  manifest["residual_self"] = residual_self;
  manifest["residual_quadrature"] = {
      {"M", art.params.M},
      {"residual_M", res_m},
      {"residual_2M", res_2m},
      {"ratio", res_2m > 0.0 ? res_m / res_2m : 0.0}};

  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "trajectory.csv", trajectory_csv(art.result.trajectory));
}

void run_certify(const RunConfig& cfg, const RunOptions& opts) {
  const auto dir = resolve_output_dir(cfg, opts);
  const ModelSpec model = config_model(cfg);
  const FrequencyVector omega(cfg.omega);
  const Certificate cert =
      certify(model, omega, cfg.R, cfg.k, cfg.kappa, resolved_epsilon(cfg),
              CertifyOptions{cfg.gamma_floor, cfg.t_cap});
  const GrowthReport growth = check_growth(model.symbol, omega, cfg.k, cfg.N);

  json out;
  out["config"] = json::parse(resolved_config_json(cfg));
  out["certificate"] = certificate_json(cert);
  out["growth_check"] = growth_json(growth);
  out["assumptions"] = assumptions_json();
  write_text(dir / "certificate.json", out.dump(2) + "\n");
}

void run_diagnose(const RunConfig& cfg, const RunOptions& opts) {
  const auto dir = resolve_output_dir(cfg, opts);
  TsugawaParams tp;
  tp.sigma = cfg.liouville.sigma;
  tp.kappa = cfg.liouville.kappa;
  const ChainReport rep = verify_divergence_chain(tp);

  json out;
  out["config"] = json::parse(resolved_config_json(cfg));
  out["chain"] = json::parse(chain_report_json(rep));
  out["witnesses"] = json::array();
  for (int level = 1; level <= cfg.liouville.n_levels; ++level)
    out["witnesses"].push_back(witness_json(liouville_witness(level)));
  if (cfg.liouville.tightness_kappa) {
    TsugawaParams tight = tp;
    tight.kappa = *cfg.liouville.tightness_kappa;
    out["tightness"] = {
        {"kappa", tight.kappa},
        {"chain", json::parse(chain_report_json(verify_divergence_chain(tight)))}};
  }
  write_text(dir / "chain_report.json", out.dump(2) + "\n");
}

void run_compare(const RunConfig& cfg, const RunOptions& opts) {
  const auto dir = resolve_output_dir(cfg, opts);
  SolveArtifacts art(cfg);

  OdeParams op;
  op.steps = static_cast<long long>(art.params.M) * cfg.oracle_refine;
  op.dt = art.params.T / static_cast<double>(op.steps);
  op.N = art.params.N;
  const auto start = std::chrono::steady_clock::now();
  const Trajectory oracle =
      exp_rk4_solve(art.u0, art.model, op, art.params.direction);
  const double oracle_wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const Trajectory at_nodes = restrict_nodes(oracle, cfg.oracle_refine);
  const double deviation = max_traj_diff(art.result.trajectory, at_nodes);

  const double residual_self =
      residual(art.result.trajectory, art.u0, art.model,
               art.result.trajectory.grid, art.params.N,
               art.params.prune_threshold);

  json manifest = art.base_manifest(cfg, opts);
  manifest["method"] = "picard+expRK4";
  manifest["residual_self"] = residual_self;
  manifest["oracle"] = {{"method", "expRK4"},
                        {"dt", op.dt},
                        {"steps", op.steps},
                        {"refine", cfg.oracle_refine},
                        {"wall_clock_seconds", opts.serial ? 0.0 : oracle_wall}};
  manifest["max_deviation"] = deviation;

  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "trajectory.csv", trajectory_csv(art.result.trajectory));
  write_text(dir / "oracle.csv", trajectory_csv(oracle));
}

int exit_code_for(errc code) {
  switch (code) {
    case errc::non_convergence:
    case errc::contraction_violation:
    case errc::non_finite:
      return 3;
    case errc::io_failure:
      return 4;
    default:
      return 2;
  }
}

int execute_run(const RunConfig& cfg, const RunOptions& opts) {
  try {
    if (cfg.mode == "solve")
      run_solve(cfg, opts);
    else if (cfg.mode == "certify")
      run_certify(cfg, opts);
    else if (cfg.mode == "diagnose-liouville")
      run_diagnose(cfg, opts);
    else if (cfg.mode == "compare-oracle")
      run_compare(cfg, opts);
    else
      fail(errc::unknown_name, "unknown mode: \"" + cfg.mode + "\"");
    return 0;
  } catch (const error& e) {
    json err = {{"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}};
    std::cerr << err.dump() << std::endl;
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    json err = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << std::endl;
    return 1;
  }
}

}  // namespace qpwave
