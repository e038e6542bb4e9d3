#pragma once

// Independent cross-check integrator: classical RK4 applied to the
// integrating-factor transform v(t) = e^{tL} u(t), unrolled so that only
// per-step propagator factors e^{-(dt/2)L}, e^{-dt L} ever appear.  Shares no
// quadrature or iteration machinery with the fixed-point solver; agreement
// between the two is evidence, not construction.

#include "qpwave/models.hpp"
#include "qpwave/qpfield.hpp"
#include "qpwave/solver.hpp"

namespace qpwave {

struct OdeParams {
  double dt = 0.0;       // positive step size
  long long steps = 0;   // steps taken in each requested time direction
  int N = 0;             // truncation radius applied to the nonlinear term

  void validate() const;
};

// Right-hand side of the truncated coefficient ODE:
//   d/dt u_hat(n) = -m(<omega,n>) u_hat(n) + (source term)_hat(n),  |n| <= box_radius.
CoefficientField ode_rhs(const CoefficientField& u, const ModelSpec& model,
                         int box_radius);

// Integrate from u0 over [0, dt*steps] (and mirrored for backward/both),
// recording every step.  Node times are j*dt, ascending; states must stay
// finite or the run aborts.
Trajectory exp_rk4_solve(const CoefficientField& u0, const ModelSpec& model,
                         const OdeParams& params, Direction direction);

}  // namespace qpwave
