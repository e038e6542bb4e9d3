#pragma once

// Dispersion symbols m(xi) for the multiplier operator L: (Lu)^(n) =
// m(<omega,n>) uhat(n).  All admissible symbols are purely imaginary, so
// e^{-tL} is an isometry of every weighted l1 norm.  Polynomial symbols grow;
// the growth check verifies sup |m(xi)| e^{-((k-eps)/|omega|)|xi|} over the
// lattice frequencies actually used.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qpwave/lattice.hpp"

namespace qpwave {

using Complex = std::complex<double>;

class SymbolSpec {
 public:
  SymbolSpec(std::string name, std::function<Complex(double)> eval,
             double epsilon, bool claims_symmetry);

  // Built-ins: kdv (-i xi^3), gbo (-i |xi| xi), dnls (i xi^2),
  // nls_free (i xi^2), bbm_rational (-i xi / (1 + xi^2)).
  static SymbolSpec builtin(const std::string& name, double epsilon = 0.5);

  // m = 0; propagator is the identity.
  static SymbolSpec zero(double epsilon = 0.5);

  // m(xi) = i (sum_j odd[j] xi^{2j+1} + sum_j even[j] xi^{2j}); the split
  // keeps the purely-imaginary structure exact, and symmetry m(-xi) =
  // conj(m(xi)) holds iff the even part vanishes.
  static SymbolSpec custom_polynomial(std::string name,
                                      std::vector<double> odd,
                                      std::vector<double> even,
                                      double epsilon = 0.5);

  const std::string& name() const { return name_; }
  double epsilon() const { return epsilon_; }
  bool claims_symmetry() const { return claims_symmetry_; }
  SymbolSpec with_epsilon(double epsilon) const;

  // Evaluate m(xi); non-finite results are a structured error.
  Complex eval(double xi) const;

 private:
  std::string name_;
  std::function<Complex(double)> eval_;
  double epsilon_;
  bool claims_symmetry_;
};

struct GrowthReport {
  double sup_value = 0.0;   // max |m(<omega,n>)| e^{-rate |<omega,n>|}
  double rate = 0.0;        // (k - eps) / |omega|
  MultiIndex attained_at;   // lattice index of the maximizer
  double attained_xi = 0.0;
  int box_radius = 0;
};

// Checks the growth bound on the frequencies <omega,n>, |n| <= radius.
// Pre: k > epsilon of the symbol.
GrowthReport check_growth(const SymbolSpec& m, const FrequencyVector& omega,
                          double k, int box_radius);

// True iff m(-xi) = conj(m(xi)) within 1e-14 for every xi in the list.
bool check_symmetry(const SymbolSpec& m, const std::vector<double>& xis);

}  // namespace qpwave
