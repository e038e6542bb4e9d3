#include "qpwave/oracle.hpp"

#include <cmath>
#include <string>

#include "qpwave/errors.hpp"

namespace qpwave {

void OdeParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(errc::invalid_argument, "ode params: dt must be positive");
  if (steps < 1) fail(errc::invalid_argument, "ode params: steps must be >= 1");
  if (N < 0) fail(errc::invalid_argument, "ode params: N must be >= 0");
}

CoefficientField ode_rhs(const CoefficientField& u, const ModelSpec& model,
                         int box_radius) {
  CoefficientField linear = scale(apply_multiplier(u, model.symbol), Complex(-1.0, 0.0));
  return add(linear, truncate(duhamel_source(model, u), box_radius));
}

namespace {

void check_finite(const CoefficientField& u, long long step) {
  for (const auto& [n, v] : u.coeffs())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(errc::non_finite,
           "integration blew up at step " + std::to_string(step));
}

// One Lawson step u_n -> u_{n+1} with signed step h (h < 0 integrates backward).
CoefficientField lawson_step(const CoefficientField& u, const ModelSpec& model,
                             double h, int N) {
  const SymbolSpec& m = model.symbol;
  auto src = [&](const CoefficientField& s) {
    return truncate(duhamel_source(model, s), N);
  };
  const Complex half(0.5 * h, 0.0);

  CoefficientField a1 = src(u);
  CoefficientField a2 = src(propagate(add(u, scale(a1, half)), m, 0.5 * h));
  CoefficientField a3 = src(add(propagate(u, m, 0.5 * h), scale(a2, half)));
  CoefficientField a4 = src(add(propagate(u, m, h),
                                scale(propagate(a3, m, 0.5 * h), Complex(h, 0.0))));

  CoefficientField acc = add(propagate(a1, m, h),
                             scale(propagate(add(a2, a3), m, 0.5 * h), Complex(2.0, 0.0)));
  acc = add(acc, a4);
  return add(propagate(u, m, h), scale(acc, Complex(h / 6.0, 0.0)));
}

}  // namespace

Trajectory exp_rk4_solve(const CoefficientField& u0, const ModelSpec& model,
                         const OdeParams& params, Direction direction) {
  params.validate();
  for (const auto& [n, v] : u0.coeffs())
    if (!in_box(n, params.N))
      fail(errc::invalid_argument, "initial data support exceeds the box radius");

  const long long steps = params.steps;
  std::vector<CoefficientField> fwd, bwd;
  if (direction != Direction::backward) {
    CoefficientField u = u0;
    for (long long s = 1; s <= steps; ++s) {
      u = lawson_step(u, model, params.dt, params.N);
      check_finite(u, s);
      fwd.push_back(u);
    }
  }
  if (direction != Direction::forward) {
    CoefficientField u = u0;
    for (long long s = 1; s <= steps; ++s) {
      u = lawson_step(u, model, -params.dt, params.N);
      check_finite(u, -s);
      bwd.push_back(u);
    }
  }

  Trajectory traj;
  traj.grid.T = params.dt * static_cast<double>(steps);
  traj.grid.M = static_cast<int>(steps);
  traj.grid.direction = direction;
  const long long lo = direction == Direction::forward ? 0 : -steps;
  const long long hi = direction == Direction::backward ? 0 : steps;
  for (long long j = lo; j <= hi; ++j)
    traj.grid.nodes.push_back(static_cast<double>(j) * params.dt);
  traj.grid.zero_index = static_cast<int>(-lo);

  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) traj.states.push_back(*it);
  traj.states.push_back(u0);
  for (auto& st : fwd) traj.states.push_back(std::move(st));
  return traj;
}

}  // namespace qpwave
