#pragma once

// Fixed-point solver for the coefficient-space integral equation
//
//   uhat(t,n) = e^{-t m_n} u0hat(n) + int_0^t e^{-(t-tau) m_n}
//               (duhamel_source(u(tau)))^(n) dtau,
//
// iterated on trajectories over a symmetric time grid and measured in the
// time-weighted norm ||u|| = sum_n sup_j |uhat(t_j,n)| e^{(k-gamma|t_j|)|n|}.
// certify() picks (gamma, T, q) so the iteration is a contraction with
// factor q <= 1/2 on the ball of radius 2R.

#include <functional>
#include <optional>
#include <vector>

#include "qpwave/models.hpp"
#include "qpwave/qpfield.hpp"
#include "qpwave/symbols.hpp"

namespace qpwave {

enum class Direction { forward, backward, both };

// Uniform nodes with spacing T/M; t = 0 is always a node.
struct TimeGrid {
  double T = 0.0;
  int M = 0;
  Direction direction = Direction::both;
  std::vector<double> nodes;  // ascending
  int zero_index = 0;

  static TimeGrid make(double T, int M, Direction direction);
};

struct Trajectory {
  TimeGrid grid;
  std::vector<CoefficientField> states;  // one per node
};

struct SolverParams {
  double k = 1.0;
  double kappa = 0.5;
  double gamma = 0.0;
  double T = 0.0;
  double R = 0.0;
  int N = 8;   // truncation radius
  int M = 32;  // time intervals per side
  double tol = 1e-10;
  int max_iter = 25;
  Direction direction = Direction::both;
  double prune_threshold = 0.0;  // drop coefficients below this after products

  void validate() const;  // k - gamma T > kappa > 0, T > 0, ...
};

struct Certificate {
  double R = 0.0;
  double gamma = 0.0;
  double T = 0.0;
  double q = 0.0;  // contraction factor on the 2R ball
  double Q = 0.0;  // embedding constant (coth(eps/2))^nu
  double epsilon = 0.0;
};

struct CertifyOptions {
  double gamma_floor = 1.0;  // used when R = 0 makes every gamma admissible
  double t_cap = 1.0;        // horizon cap for the gamma = 0 paths
};

struct PicardResult {
  Trajectory trajectory;
  int iterations = 0;
  double final_defect = 0.0;
  std::vector<double> defect_history;      // ||u^{j+1} - u^j||
  std::vector<double> contraction_ratios;  // consecutive defect ratios
  Certificate certificate;
};

// ---- linear pieces ---------------------------------------------------------

// e^{-t m(<omega,n>)} uhat(n); an isometry for purely imaginary symbols.
CoefficientField propagate(const CoefficientField& u, const SymbolSpec& m, double t);

Trajectory free_evolution(const CoefficientField& u0, const SymbolSpec& m,
                          const TimeGrid& grid);

// sum_n sup_j |uhat(t_j,n)| e^{(k-gamma|t_j|)|n|}.  Pre: k - gamma T >= 0.
double x_norm(const Trajectory& traj, double k, double gamma);

// I(t_j) = int_0^{t_j} e^{-(t_j-tau)L} transform(src(tau)) dtau by composite
// trapezoid over the grid nodes (signed for t_j < 0).
Trajectory duhamel_integral(
    const Trajectory& src, const SymbolSpec& m,
    const std::function<CoefficientField(const CoefficientField&)>& transform);

// ---- the fixed-point map ---------------------------------------------------

// Gamma(u)(t_j) = e^{-t_j L} u0 + I(t_j) with the model's duhamel source;
// convolution outputs are truncated to |n| <= trunc_radius when given.
Trajectory duhamel_map(const CoefficientField& u0, const Trajectory& traj,
                       const ModelSpec& model, const TimeGrid& grid,
                       std::optional<int> trunc_radius = std::nullopt,
                       double prune_threshold = 0.0);

// ---- certification ----------------------------------------------------------

// Closed-form contraction certificate.  For the derivative kinds gamma is
// chosen so self-map and contraction hold on the 2R ball in the k scale and
// on the 3RQ ball in the kappa-eps scale, then T = (k-eps-kappa)/(2 gamma).
// The nls/bbm kinds run with gamma = 0 and T chosen so T*Lip(2R,2R) <= 1/2.
Certificate certify(const ModelSpec& model, const FrequencyVector& omega,
                    double R, double k, double kappa, double epsilon,
                    const CertifyOptions& opts = {});

// T = (k - eps - kappa)/(2 gamma), exposed for reuse and tests.
double certify_time_horizon(double k, double kappa, double epsilon, double gamma);

// Embedding constant Q = (coth(eps/2))^nu = sum_n e^{-eps|n|}.
double embedding_constant(double epsilon, int nu);

// ---- driver ------------------------------------------------------------------

// Picard iteration from the free evolution.  Stops when the defect
// x_norm(u^{j+1} - u^j) <= tol; measured contraction ratios past the first
// iterate must stay within q + 0.1.
PicardResult picard_solve(const CoefficientField& u0, const ModelSpec& model,
                          const SolverParams& params, const Certificate& cert);

// max over nodes and support of |traj - Gamma(traj)|, same quadrature as
// duhamel_map.
double residual(const Trajectory& traj, const CoefficientField& u0,
                const ModelSpec& model, const TimeGrid& grid,
                std::optional<int> trunc_radius = std::nullopt,
                double prune_threshold = 0.0);

// Solves from both data sets and returns
// x_norm(u_a - u_b) / norm_vk(u0a - u0b, k)   (0 for identical data).
double data_to_solution_lipschitz(const CoefficientField& u0a,
                                  const CoefficientField& u0b,
                                  const ModelSpec& model,
                                  const SolverParams& params,
                                  const Certificate& cert);

// ---- trajectory helpers -------------------------------------------------------

Trajectory sub_trajectories(const Trajectory& a, const Trajectory& b);

// Keep every stride-th node (stride must divide M); zero stays a node.
Trajectory restrict_nodes(const Trajectory& traj, int stride);

// max over shared nodes and union support of the coefficient deviation.
double max_traj_diff(const Trajectory& a, const Trajectory& b);

}  // namespace qpwave
