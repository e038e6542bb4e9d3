#include "qpwave/symbols.hpp"

#include <cmath>

#include "qpwave/errors.hpp"

namespace qpwave {

SymbolSpec::SymbolSpec(std::string name, std::function<Complex(double)> eval,
                       double epsilon, bool claims_symmetry)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      epsilon_(epsilon),
      claims_symmetry_(claims_symmetry) {
  if (!(epsilon_ > 0.0))
    fail(errc::invalid_argument, "symbol epsilon must be positive");
  if (!eval_) fail(errc::invalid_argument, "symbol has no evaluator");
}

SymbolSpec SymbolSpec::builtin(const std::string& name, double epsilon) {
  if (name == "kdv")
    return SymbolSpec(name, [](double xi) { return Complex(0.0, -(xi * xi * xi)); },
                      epsilon, true);
  if (name == "gbo")
    return SymbolSpec(name, [](double xi) { return Complex(0.0, -std::abs(xi) * xi); },
                      epsilon, true);
  if (name == "dnls")
    return SymbolSpec(name, [](double xi) { return Complex(0.0, xi * xi); },
                      epsilon, false);
  if (name == "nls_free")
    return SymbolSpec(name, [](double xi) { return Complex(0.0, xi * xi); },
                      epsilon, false);
  if (name == "bbm_rational")
    return SymbolSpec(name, [](double xi) { return Complex(0.0, -xi / (1.0 + xi * xi)); },
                      epsilon, true);
  fail(errc::unknown_name, "unknown builtin symbol '" + name + "'");
}

SymbolSpec SymbolSpec::zero(double epsilon) {
  return SymbolSpec("zero", [](double) { return Complex(0.0, 0.0); }, epsilon, true);
}

SymbolSpec SymbolSpec::custom_polynomial(std::string name, std::vector<double> odd,
                                         std::vector<double> even, double epsilon) {
  bool even_vanishes = true;
  for (double c : even)
    if (c != 0.0) even_vanishes = false;
  auto eval = [odd, even](double xi) {
    double g = 0.0;
    double x2 = xi * xi;
    double p = xi;  // xi^{2j+1}
    for (double c : odd) {
      g += c * p;
      p *= x2;
    }
    double q = 1.0;  // xi^{2j}
    for (double c : even) {
      g += c * q;
      q *= x2;
    }
    return Complex(0.0, g);
  };
  return SymbolSpec(std::move(name), eval, epsilon, even_vanishes);
}

SymbolSpec SymbolSpec::with_epsilon(double epsilon) const {
  return SymbolSpec(name_, eval_, epsilon, claims_symmetry_);
}

Complex SymbolSpec::eval(double xi) const {
  Complex v = eval_(xi);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    fail(errc::symbol_evaluation,
         "symbol '" + name_ + "' is not finite at xi = " + std::to_string(xi));
  return v;
}

GrowthReport check_growth(const SymbolSpec& m, const FrequencyVector& omega,
                          double k, int box_radius) {
  if (!(k > m.epsilon()))
    fail(errc::invalid_argument, "growth check needs k > epsilon");
  GrowthReport rep;
  rep.rate = (k - m.epsilon()) / omega.max_abs();
  rep.box_radius = box_radius;
  rep.attained_at = MultiIndex(static_cast<size_t>(omega.nu()), 0);
  for (const MultiIndex& n : enumerate_box(box_radius, omega.nu())) {
    double xi = frequency(omega, n);
    double v = std::abs(m.eval(xi)) * std::exp(-rep.rate * std::abs(xi));
    if (v > rep.sup_value) {
      rep.sup_value = v;
      rep.attained_at = n;
      rep.attained_xi = xi;
    }
  }
  return rep;
}

bool check_symmetry(const SymbolSpec& m, const std::vector<double>& xis) {
  for (double xi : xis) {
    Complex a = m.eval(-xi);
    Complex b = std::conj(m.eval(xi));
    if (std::abs(a - b) > 1e-14) return false;
  }
  return true;
}

}  // namespace qpwave
