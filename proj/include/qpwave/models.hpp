#pragma once

// Model = dispersion symbol + nonlinearity.  The evolution is written as
//
//   d/dt uhat(n) = -m(<omega,n>) uhat(n) + (duhamel_source(u))^(n),
//
// i.e. u(t) = e^{-tL} u0 + int_0^t e^{-(t-tau)L} duhamel_source(u(tau)) dtau.
// nonlinear_term() reports each kind in its conventional orientation (the
// derivative kinds as +d/dx(...)); duhamel_source() carries the sign with
// which that term actually enters the integral equation.

#include <string>
#include <vector>

#include "qpwave/qpfield.hpp"
#include "qpwave/symbols.hpp"

namespace qpwave {

struct Monomial {
  int a = 0;  // powers of u
  int b = 0;  // powers of conj(u)
  Complex c;  // coefficient
};

struct Nonlinearity {
  enum class Kind { power_deriv, poly_deriv, nls_power, bbm_power };

  Kind kind = Kind::power_deriv;
  int p = 1;                        // power parameter, >= 1
  int sign = +1;                    // nls only: the +- in the equation
  std::vector<Monomial> monomials;  // poly_deriv only, total degree >= 1

  static Nonlinearity power_deriv(int p);
  static Nonlinearity poly_deriv(std::vector<Monomial> monomials);
  static Nonlinearity nls_power(int p, int sign);
  static Nonlinearity bbm_power(int p);

  int degree() const;  // nonlinearity degree d (d = p+1, deg P, 2p+1, p+1)
};

struct ModelSpec {
  std::string name;
  SymbolSpec symbol;
  Nonlinearity nonlinearity;
  bool real_valued = false;  // requires a symmetric symbol
};

// Presets: gkdv, gbo, dnls, nls, gbbm.  p is ignored by dnls (fixed cubic).
ModelSpec make_model(const std::string& equation, int p = 1, int nls_sign = +1,
                     double epsilon = 0.5);

// The nonlinear term in its conventional orientation:
//   power_deriv -> d/dx(u^{p+1})
//   poly_deriv  -> d/dx(P(u, conj u))
//   nls_power   -> -sign * i * u^p conj(u)^p u
//   bbm_power   -> multiplier(u + u^{p+1}, bbm_rational)
CoefficientField nonlinear_term(const ModelSpec& model, const CoefficientField& u);

// The integrand of the Duhamel integral (see the header comment): the
// derivative kinds enter with a minus sign, nls/bbm as returned.
CoefficientField duhamel_source(const ModelSpec& model, const CoefficientField& u);

// One-sided bound ||source(u) - source(v)|| <= lipschitz_bound(ru, rv) ||u - v||
// for ||u|| <= ru, ||v|| <= rv in any weighted l1 algebra norm:
//   power_deriv: (ru+rv)^p               (the d/dx factor is priced separately)
//   poly_deriv:  C_P (1+ru+rv)^{deg-1},  C_P = sum |c_j| (a_j+b_j)
//   nls_power:   (ru+rv)^{2p}
//   bbm_power:   (1 + (ru+rv)^p) / 2
double lipschitz_bound(const ModelSpec& model, double ru, double rv);

// ||source(u)|| <= source_norm_bound(r) for ||u|| <= r (same pricing).
double source_norm_bound(const ModelSpec& model, double r);

}  // namespace qpwave
