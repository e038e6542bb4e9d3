#include "qpwave/models.hpp"

#include <cmath>

#include "qpwave/errors.hpp"

namespace qpwave {

Nonlinearity Nonlinearity::power_deriv(int p) {
  if (p < 1) fail(errc::invalid_argument, "power_deriv needs p >= 1");
  Nonlinearity nl;
  nl.kind = Kind::power_deriv;
  nl.p = p;
  return nl;
}

Nonlinearity Nonlinearity::poly_deriv(std::vector<Monomial> monomials) {
  if (monomials.empty())
    fail(errc::invalid_argument, "poly_deriv needs at least one monomial");
  for (const auto& m : monomials)
    if (m.a < 0 || m.b < 0 || m.a + m.b < 1)
      fail(errc::invalid_argument, "poly_deriv monomial degree must be >= 1");
  Nonlinearity nl;
  nl.kind = Kind::poly_deriv;
  nl.monomials = std::move(monomials);
  return nl;
}

Nonlinearity Nonlinearity::nls_power(int p, int sign) {
  if (p < 1) fail(errc::invalid_argument, "nls_power needs p >= 1");
  if (sign != 1 && sign != -1)
    fail(errc::invalid_argument, "nls_power sign must be +1 or -1");
  Nonlinearity nl;
  nl.kind = Kind::nls_power;
  nl.p = p;
  nl.sign = sign;
  return nl;
}

Nonlinearity Nonlinearity::bbm_power(int p) {
  if (p < 1) fail(errc::invalid_argument, "bbm_power needs p >= 1");
  Nonlinearity nl;
  nl.kind = Kind::bbm_power;
  nl.p = p;
  return nl;
}

int Nonlinearity::degree() const {
  switch (kind) {
    case Kind::power_deriv: return p + 1;
    case Kind::poly_deriv: {
      int d = 1;
      for (const auto& m : monomials) d = std::max(d, m.a + m.b);
      return d;
    }
    case Kind::nls_power: return 2 * p + 1;
    case Kind::bbm_power: return p + 1;
  }
  return 1;
}

ModelSpec make_model(const std::string& equation, int p, int nls_sign,
                     double epsilon) {
  if (equation == "gkdv")
    return {equation, SymbolSpec::builtin("kdv", epsilon),
            Nonlinearity::power_deriv(p), true};
  if (equation == "gbo")
    return {equation, SymbolSpec::builtin("gbo", epsilon),
            Nonlinearity::power_deriv(p), true};
  if (equation == "dnls")
    return {equation, SymbolSpec::builtin("dnls", epsilon),
            Nonlinearity::poly_deriv({Monomial{2, 1, Complex(1.0, 0.0)}}), false};
  if (equation == "nls")
    return {equation, SymbolSpec::builtin("nls_free", epsilon),
            Nonlinearity::nls_power(p, nls_sign), false};
  if (equation == "gbbm")
    // The whole right-hand side sits in the nonlinearity; the linear part of
    // the solver is the identity.
    return {equation, SymbolSpec::zero(epsilon), Nonlinearity::bbm_power(p), true};
  fail(errc::unknown_name, "unknown equation '" + equation + "'");
}

namespace {

CoefficientField poly_value(const std::vector<Monomial>& monomials,
                            const CoefficientField& u) {
  const CoefficientField uc = conjugate(u);
  CoefficientField acc(u.omega(), {}, true);
  for (const auto& mono : monomials) {
    CoefficientField term(u.omega(), {{MultiIndex(static_cast<size_t>(u.omega().nu()), 0),
                                       Complex(1.0, 0.0)}},
                          true);
    if (mono.a > 0) term = multiply(term, power(u, mono.a));
    if (mono.b > 0) term = multiply(term, power(uc, mono.b));
    acc = add(acc, scale(term, mono.c));
  }
  return acc;
}

}  // namespace

CoefficientField nonlinear_term(const ModelSpec& model, const CoefficientField& u) {
  const Nonlinearity& nl = model.nonlinearity;
  switch (nl.kind) {
    case Nonlinearity::Kind::power_deriv:
      return differentiate(power(u, nl.p + 1));
    case Nonlinearity::Kind::poly_deriv:
      return differentiate(poly_value(nl.monomials, u));
    case Nonlinearity::Kind::nls_power: {
      CoefficientField w = multiply(power(u, nl.p), power(conjugate(u), nl.p));
      w = multiply(w, u);
      return scale(w, Complex(0.0, -static_cast<double>(nl.sign)));
    }
    case Nonlinearity::Kind::bbm_power:
      return apply_multiplier(add(u, power(u, nl.p + 1)),
                              SymbolSpec::builtin("bbm_rational", model.symbol.epsilon()));
  }
  fail(errc::invalid_argument, "unhandled nonlinearity kind");
}

CoefficientField duhamel_source(const ModelSpec& model, const CoefficientField& u) {
  CoefficientField term = nonlinear_term(model, u);
  switch (model.nonlinearity.kind) {
    case Nonlinearity::Kind::power_deriv:
    case Nonlinearity::Kind::poly_deriv:
      // u_t + Lu + d/dx(...) = 0, so the derivative term integrates with -1.
      return scale(term, Complex(-1.0, 0.0));
    case Nonlinearity::Kind::nls_power:
    case Nonlinearity::Kind::bbm_power:
      return term;
  }
  fail(errc::invalid_argument, "unhandled nonlinearity kind");
}

double lipschitz_bound(const ModelSpec& model, double ru, double rv) {
  if (ru < 0.0 || rv < 0.0)
    fail(errc::invalid_argument, "lipschitz_bound needs nonnegative radii");
  const Nonlinearity& nl = model.nonlinearity;
  switch (nl.kind) {
    case Nonlinearity::Kind::power_deriv:
      return std::pow(ru + rv, nl.p);
    case Nonlinearity::Kind::poly_deriv: {
      double cp = 0.0;
      for (const auto& m : nl.monomials)
        cp += std::abs(m.c) * static_cast<double>(m.a + m.b);
      return cp * std::pow(1.0 + ru + rv, nl.degree() - 1);
    }
    case Nonlinearity::Kind::nls_power:
      return std::pow(ru + rv, 2 * nl.p);
    case Nonlinearity::Kind::bbm_power:
      return 0.5 * (1.0 + std::pow(ru + rv, nl.p));
  }
  fail(errc::invalid_argument, "unhandled nonlinearity kind");
}

double source_norm_bound(const ModelSpec& model, double r) {
  if (r < 0.0) fail(errc::invalid_argument, "source_norm_bound needs r >= 0");
  const Nonlinearity& nl = model.nonlinearity;
  switch (nl.kind) {
    case Nonlinearity::Kind::power_deriv:
      return std::pow(r, nl.p + 1);
    case Nonlinearity::Kind::poly_deriv: {
      double s = 0.0;
      for (const auto& m : nl.monomials) s += std::abs(m.c) * std::pow(r, m.a + m.b);
      return s;
    }
    case Nonlinearity::Kind::nls_power:
      return std::pow(r, 2 * nl.p + 1);
    case Nonlinearity::Kind::bbm_power:
      return 0.5 * (r + std::pow(r, nl.p + 1));
  }
  fail(errc::invalid_argument, "unhandled nonlinearity kind");
}

}  // namespace qpwave
