#pragma once

// Finitely supported Fourier coefficient fields and the weighted l1 algebra
// they live in: ||u||_{omega,k} = sum |uhat(n)| e^{k|n|}.  The norm is
// submultiplicative under convolution, which is what every solver estimate
// in this library leans on.

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qpwave/errors.hpp"
#include "qpwave/lattice.hpp"

namespace qpwave {

using Complex = std::complex<double>;
using CoeffMap = std::map<MultiIndex, Complex>;  // lexicographic key order

class SymbolSpec;  // symbols.hpp

// Immutable value type: frequency vector + finite coefficient support.
// The real flag is advisory bookkeeping for uhat(-n) = conj(uhat(n));
// realness_defect() measures how true it actually is.
class CoefficientField {
 public:
  CoefficientField(FrequencyVector omega, CoeffMap coeffs, bool real_flag = false);

  const FrequencyVector& omega() const { return omega_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool real_flagged() const { return real_flag_; }
  size_t support_size() const { return coeffs_.size(); }

  // 0 for indices outside the support.
  Complex at(const MultiIndex& n) const;

  CoefficientField with_real_flag(bool flag) const;

 private:
  FrequencyVector omega_;
  CoeffMap coeffs_;
  bool real_flag_;
};

// Weight functions lambda(|n|) for the generalized norm.  Admissibility
// (nondecreasing, bounded below by c > 0, submultiplicative) is checked on
// the grid m = 0..64 at construction.
class WeightSpec {
 public:
  enum class Kind { exponential, wiener, custom };

  static WeightSpec exponential(double k);
  static WeightSpec wiener();
  static WeightSpec custom(std::string name, std::function<double(double)> lambda);
  static WeightSpec from_samples(std::string name, std::vector<double> samples);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double m) const;

 private:
  WeightSpec(Kind kind, std::string name, std::function<double(double)> lambda);
  void check_admissible() const;

  Kind kind_;
  std::string name_;
  std::function<double(double)> lambda_;
};

// ---- norms ----------------------------------------------------------------

// sum |uhat(n)| e^{k|n|}, accumulated in enumeration order.  k >= 0.
double norm_vk(const CoefficientField& u, double k);

// sum |uhat(n)| lambda(|n|).
double norm_weighted(const CoefficientField& u, const WeightSpec& w);

// max |uhat(-n) - conj(uhat(n))| over the support.
double realness_defect(const CoefficientField& u);

// ---- algebra --------------------------------------------------------------

// Full convolution (uv)^(n) = sum_{q+r=n} uhat(q) vhat(r); deterministic
// accumulation order.
CoefficientField multiply(const CoefficientField& u, const CoefficientField& v);

// u^m by iterated multiplication, m >= 1 (m = 1 is the identity).
CoefficientField power(const CoefficientField& u, int m);

// d/dx: uhat(n) -> i <omega,n> uhat(n).
CoefficientField differentiate(const CoefficientField& u);

// uhat(n) -> m(<omega,n>) uhat(n) for a Fourier multiplier symbol.
CoefficientField apply_multiplier(const CoefficientField& u, const SymbolSpec& m);

// Pointwise sum / scalar multiple (frequency vectors must agree).
CoefficientField add(const CoefficientField& u, const CoefficientField& v);
CoefficientField scale(const CoefficientField& u, Complex c);
CoefficientField sub(const CoefficientField& u, const CoefficientField& v);

// uhat(n) -> conj(uhat(-n)); realness fixed points satisfy conjugate(u) = u.
CoefficientField conjugate(const CoefficientField& u);

// Phase shift u(. + x0): uhat(n) -> e^{i<omega,n>x0} uhat(n).
CoefficientField translate(const CoefficientField& u, double x0);

// Drop entries with |uhat(n)| <= threshold (threshold 0 keeps everything).
CoefficientField prune(const CoefficientField& u, double threshold);

// Drop entries outside |n| <= radius.
CoefficientField truncate(const CoefficientField& u, int radius);

// u(x) = sum uhat(n) e^{i<omega,n>x} in enumeration order.
Complex evaluate(const CoefficientField& u, double x);

// max |uhat(n) - vhat(n)| over the union of supports.
double max_coeff_diff(const CoefficientField& u, const CoefficientField& v);

// ---- serialization ---------------------------------------------------------

// {"omega": [...], "entries": [{"n": [...], "re": .., "im": ..}, ...]}
// with entries in enumeration order.
std::string to_json(const CoefficientField& u, int indent = -1);
CoefficientField field_from_json(const std::string& text);

}  // namespace qpwave
