#include "qpwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpwave/errors.hpp"

namespace qpwave {

TimeGrid TimeGrid::make(double T, int M, Direction direction) {
  if (!(T > 0.0) || !std::isfinite(T))
    fail(errc::invalid_argument, "time grid needs T > 0");
  if (M < 1) fail(errc::invalid_argument, "time grid needs M >= 1");
  TimeGrid g;
  g.T = T;
  g.M = M;
  g.direction = direction;
  const double h = T / M;
  const int lo = direction == Direction::forward ? 0 : -M;
  const int hi = direction == Direction::backward ? 0 : M;
  for (int j = lo; j <= hi; ++j) g.nodes.push_back(j * h);
  g.zero_index = -lo;
  return g;
}

void SolverParams::validate() const {
  if (!(k > 0.0)) fail(errc::invalid_argument, "params: k must be positive");
  if (!(kappa > 0.0)) fail(errc::invalid_argument, "params: kappa must be positive");
  if (gamma < 0.0) fail(errc::invalid_argument, "params: gamma must be >= 0");
  if (!(T > 0.0)) fail(errc::invalid_argument, "params: T must be positive");
  if (!(k - gamma * T > kappa))
    fail(errc::invalid_argument, "params: need k - gamma*T > kappa");
  if (R < 0.0) fail(errc::invalid_argument, "params: R must be >= 0");
  if (N < 0) fail(errc::invalid_argument, "params: N must be >= 0");
  if (M < 1) fail(errc::invalid_argument, "params: M must be >= 1");
  if (!(tol > 0.0)) fail(errc::invalid_argument, "params: tol must be positive");
  if (max_iter < 1) fail(errc::invalid_argument, "params: max_iter must be >= 1");
}

// ---- linear pieces -----------------------------------------------------------

CoefficientField propagate(const CoefficientField& u, const SymbolSpec& m, double t) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs()) {
    Complex phase = std::exp(-t * m.eval(frequency(u.omega(), n)));
    out.emplace(n, phase * v);
  }
  return CoefficientField(u.omega(), std::move(out),
                          u.real_flagged() && m.claims_symmetry());
}

Trajectory free_evolution(const CoefficientField& u0, const SymbolSpec& m,
                          const TimeGrid& grid) {
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.nodes.size());
  for (double t : grid.nodes) traj.states.push_back(propagate(u0, m, t));
  return traj;
}

double x_norm(const Trajectory& traj, double k, double gamma) {
  if (k < 0.0 || gamma < 0.0)
    fail(errc::invalid_argument, "x_norm needs k >= 0 and gamma >= 0");
  if (k - gamma * traj.grid.T < 0.0)
    fail(errc::invalid_argument, "x_norm needs k - gamma*T >= 0");
  std::map<MultiIndex, double> best;
  for (size_t j = 0; j < traj.states.size(); ++j) {
    const double wt = k - gamma * std::abs(traj.grid.nodes[j]);
    for (const auto& [n, v] : traj.states[j].coeffs()) {
      double val = std::abs(v) * std::exp(wt * static_cast<double>(index_norm(n)));
      auto [it, inserted] = best.emplace(n, val);
      if (!inserted && val > it->second) it->second = val;
    }
  }
  double s = 0.0;
  for (const auto& [n, v] : best) s += v;
  return s;
}

Trajectory duhamel_integral(
    const Trajectory& src, const SymbolSpec& m,
    const std::function<CoefficientField(const CoefficientField&)>& transform) {
  const TimeGrid& g = src.grid;
  if (src.states.size() != g.nodes.size())
    fail(errc::invalid_argument, "trajectory has wrong node count");

  // Factor the propagator out of the integral:
  //   I(t_j) = e^{-t_j L} int_0^{t_j} e^{tau L} transform(src(tau)) dtau,
  // so one prefix pass of composite trapezoid covers every node.
  std::vector<CoefficientField> ge;
  ge.reserve(src.states.size());
  for (size_t i = 0; i < src.states.size(); ++i)
    ge.push_back(propagate(transform(src.states[i]), m, -g.nodes[i]));

  const double h = g.T / g.M;
  const size_t z = static_cast<size_t>(g.zero_index);
  const CoefficientField zero(src.states[z].omega(), {}, true);
  std::vector<CoefficientField> S(src.states.size(), zero);
  for (size_t j = z + 1; j < S.size(); ++j)
    S[j] = add(S[j - 1], scale(add(ge[j - 1], ge[j]), Complex(0.5 * h, 0.0)));
  for (size_t j = z; j-- > 0;)
    S[j] = add(S[j + 1], scale(add(ge[j], ge[j + 1]), Complex(-0.5 * h, 0.0)));

  Trajectory out;
  out.grid = g;
  out.states.reserve(S.size());
  for (size_t j = 0; j < S.size(); ++j)
    out.states.push_back(propagate(S[j], m, g.nodes[j]));
  return out;
}

// ---- the fixed-point map -------------------------------------------------------

Trajectory duhamel_map(const CoefficientField& u0, const Trajectory& traj,
                       const ModelSpec& model, const TimeGrid& grid,
                       std::optional<int> trunc_radius, double prune_threshold) {
  if (traj.grid.nodes != grid.nodes)
    fail(errc::invalid_argument, "duhamel_map: trajectory grid mismatch");
  auto transform = [&](const CoefficientField& s) {
    CoefficientField w = duhamel_source(model, s);
    if (trunc_radius) w = truncate(w, *trunc_radius);
    return prune_threshold > 0.0 ? prune(w, prune_threshold) : w;
  };
  Trajectory integral = duhamel_integral(traj, model.symbol, transform);
  Trajectory out;
  out.grid = grid;
  out.states.reserve(grid.nodes.size());
  for (size_t j = 0; j < grid.nodes.size(); ++j)
    out.states.push_back(
        add(propagate(u0, model.symbol, grid.nodes[j]), integral.states[j]));
  return out;
}

// ---- certification --------------------------------------------------------------

double embedding_constant(double epsilon, int nu) {
  if (!(epsilon > 0.0)) fail(errc::invalid_argument, "embedding needs epsilon > 0");
  if (nu < 1) fail(errc::invalid_argument, "embedding needs nu >= 1");
  return std::pow(1.0 / std::tanh(epsilon / 2.0), nu);
}

double certify_time_horizon(double k, double kappa, double epsilon, double gamma) {
  if (!(gamma > 0.0)) fail(errc::invalid_argument, "horizon needs gamma > 0");
  if (!(k - epsilon - kappa > 0.0))
    fail(errc::infeasible, "horizon needs k - epsilon > kappa");
  return (k - epsilon - kappa) / (2.0 * gamma);
}

Certificate certify(const ModelSpec& model, const FrequencyVector& omega,
                    double R, double k, double kappa, double epsilon,
                    const CertifyOptions& opts) {
  if (R < 0.0) fail(errc::invalid_argument, "certify needs R >= 0");
  if (!(kappa > 0.0)) fail(errc::invalid_argument, "certify needs kappa > 0");
  if (!(epsilon > 0.0)) fail(errc::invalid_argument, "certify needs epsilon > 0");
  if (!(k - epsilon > kappa))
    fail(errc::infeasible, "certify: need k - epsilon > kappa > 0");

  Certificate cert;
  cert.R = R;
  cert.epsilon = epsilon;
  cert.Q = embedding_constant(epsilon, omega.nu());

  const auto kind = model.nonlinearity.kind;
  const bool derivative_kind = kind == Nonlinearity::Kind::power_deriv ||
                               kind == Nonlinearity::Kind::poly_deriv;

  if (!derivative_kind) {
    // nls/bbm: no derivative loss, plain factor T in the estimates.
    cert.gamma = 0.0;
    if (R == 0.0) {
      cert.q = 0.0;
      cert.T = opts.t_cap;
      return cert;
    }
    const double lip = lipschitz_bound(model, 2.0 * R, 2.0 * R);
    const double bound = source_norm_bound(model, 2.0 * R);
    double T = opts.t_cap;
    if (lip > 0.0) T = std::min(T, 0.5 / lip);
    if (bound > 0.0) T = std::min(T, R / bound);
    cert.T = T;
    cert.q = T * lip;
    return cert;
  }

  if (R == 0.0) {
    cert.gamma = opts.gamma_floor;
    cert.q = 0.0;
    cert.T = certify_time_horizon(k, kappa, epsilon, cert.gamma);
    return cert;
  }

  const double w = omega.max_abs();
  const double Q = cert.Q;
  const double r2 = 2.0 * R, r2q = 2.0 * R * Q, r3q = 3.0 * R * Q;

  double cf = 1.0;
  if (kind == Nonlinearity::Kind::poly_deriv)
    cf = lipschitz_bound(model, 0.0, 0.0);  // = C_P

  const double d = static_cast<double>(model.nonlinearity.degree());
  double gamma = 4.0 * w * cf * std::pow(2.0 * std::max(R, Q * R), d - 1.0);
  // Self-map and contraction, k scale (ball 2R, data R) and kappa-eps scale
  // (balls 2RQ and 3RQ, data norm still <= R).
  gamma = std::max(gamma, 2.0 * w * source_norm_bound(model, r2) / R);
  gamma = std::max(gamma, 2.0 * w * lipschitz_bound(model, r2, r2));
  gamma = std::max(gamma, 2.0 * w * lipschitz_bound(model, r3q, r3q));
  gamma = std::max(gamma, w * source_norm_bound(model, r2q) / (r2q - R));
  gamma = std::max(gamma, w * source_norm_bound(model, r3q) / (r3q - R));

  cert.gamma = gamma;
  cert.q = w * lipschitz_bound(model, r2, r2) / gamma;
  cert.T = certify_time_horizon(k, kappa, epsilon, gamma);
  return cert;
}

// ---- driver ----------------------------------------------------------------------

PicardResult picard_solve(const CoefficientField& u0, const ModelSpec& model,
                          const SolverParams& params, const Certificate& cert) {
  params.validate();
  const double data_norm = norm_vk(u0, params.k);
  if (!(data_norm < cert.R))
    fail(errc::data_ball, "initial data norm " + std::to_string(data_norm) +
                              " is not inside the certified ball R = " +
                              std::to_string(cert.R));
  for (const auto& [n, v] : u0.coeffs())
    if (!in_box(n, params.N))
      fail(errc::invalid_argument, "initial data support exceeds the box radius");

  const TimeGrid grid = TimeGrid::make(params.T, params.M, params.direction);
  PicardResult res;
  res.certificate = cert;

  Trajectory traj = free_evolution(u0, model.symbol, grid);
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    Trajectory next =
        duhamel_map(u0, traj, model, grid, params.N, params.prune_threshold);
    const double defect =
        x_norm(sub_trajectories(next, traj), params.k, params.gamma);
    if (!res.defect_history.empty()) {
      const double ratio = defect / res.defect_history.back();
      res.contraction_ratios.push_back(ratio);
      if (ratio > cert.q + 0.1)
        fail(errc::contraction_violation,
             "contraction ratio " + std::to_string(ratio) +
                 " exceeds certified q + 0.1 = " + std::to_string(cert.q + 0.1) +
                 " at iteration " + std::to_string(iter));
    }
    res.defect_history.push_back(defect);
    traj = std::move(next);
    res.iterations = iter;
    res.final_defect = defect;
    if (defect <= params.tol) {
      res.trajectory = std::move(traj);
      return res;
    }
  }
  fail(errc::non_convergence,
       "no convergence after " + std::to_string(params.max_iter) +
           " iterations; last defect " + std::to_string(res.final_defect));
}

double residual(const Trajectory& traj, const CoefficientField& u0,
                const ModelSpec& model, const TimeGrid& grid,
                std::optional<int> trunc_radius, double prune_threshold) {
  Trajectory mapped =
      duhamel_map(u0, traj, model, grid, trunc_radius, prune_threshold);
  return max_traj_diff(traj, mapped);
}

double data_to_solution_lipschitz(const CoefficientField& u0a,
                                  const CoefficientField& u0b,
                                  const ModelSpec& model,
                                  const SolverParams& params,
                                  const Certificate& cert) {
  const double denom = norm_vk(sub(u0a, u0b), params.k);
  if (denom < 1e-15) return 0.0;
  PicardResult ra = picard_solve(u0a, model, params, cert);
  PicardResult rb = picard_solve(u0b, model, params, cert);
  const double num = x_norm(sub_trajectories(ra.trajectory, rb.trajectory),
                            params.k, params.gamma);
  return num / denom;
}

// ---- trajectory helpers -------------------------------------------------------------

Trajectory sub_trajectories(const Trajectory& a, const Trajectory& b) {
  if (a.grid.nodes != b.grid.nodes)
    fail(errc::invalid_argument, "trajectory grids differ");
  Trajectory out;
  out.grid = a.grid;
  out.states.reserve(a.states.size());
  for (size_t j = 0; j < a.states.size(); ++j)
    out.states.push_back(sub(a.states[j], b.states[j]));
  return out;
}

Trajectory restrict_nodes(const Trajectory& traj, int stride) {
  if (stride < 1 || traj.grid.M % stride != 0)
    fail(errc::invalid_argument, "restrict_nodes: stride must divide M");
  Trajectory out;
  out.grid.T = traj.grid.T;
  out.grid.M = traj.grid.M / stride;
  out.grid.direction = traj.grid.direction;
  for (size_t j = 0; j < traj.grid.nodes.size(); ++j) {
    const long long off = static_cast<long long>(j) - traj.grid.zero_index;
    if (off % stride != 0) continue;
    if (off == 0) out.grid.zero_index = static_cast<int>(out.grid.nodes.size());
    out.grid.nodes.push_back(traj.grid.nodes[j]);
    out.states.push_back(traj.states[j]);
  }
  return out;
}

double max_traj_diff(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size())
    fail(errc::invalid_argument, "trajectories have different node counts");
  double d = 0.0;
  for (size_t j = 0; j < a.states.size(); ++j)
    d = std::max(d, max_coeff_diff(a.states[j], b.states[j]));
  return d;
}

}  // namespace qpwave
