#include "qpwave/qpfield.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "qpwave/symbols.hpp"

namespace qpwave {

namespace {

void require_same_omega(const CoefficientField& u, const CoefficientField& v) {
  if (!(u.omega() == v.omega()))
    fail(errc::frequency_mismatch, "fields live over different frequency vectors");
}

MultiIndex negate(const MultiIndex& n) {
  MultiIndex m(n.size());
  for (size_t i = 0; i < n.size(); ++i) m[i] = -n[i];
  return m;
}

}  // namespace

CoefficientField::CoefficientField(FrequencyVector omega, CoeffMap coeffs,
                                   bool real_flag)
    : omega_(std::move(omega)), coeffs_(std::move(coeffs)), real_flag_(real_flag) {
  for (const auto& [n, v] : coeffs_) {
    if (static_cast<int>(n.size()) != omega_.nu())
      fail(errc::dimension_mismatch, "coefficient index dimension mismatch");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(errc::non_finite, "coefficient value is not finite");
  }
}

Complex CoefficientField::at(const MultiIndex& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

CoefficientField CoefficientField::with_real_flag(bool flag) const {
  return CoefficientField(omega_, coeffs_, flag);
}

// ---- WeightSpec -------------------------------------------------------------

WeightSpec::WeightSpec(Kind kind, std::string name,
                       std::function<double(double)> lambda)
    : kind_(kind), name_(std::move(name)), lambda_(std::move(lambda)) {
  check_admissible();
}

WeightSpec WeightSpec::exponential(double k) {
  if (!(k > 0.0)) fail(errc::invalid_argument, "exponential weight needs k > 0");
  return WeightSpec(Kind::exponential, "exponential",
                    [k](double m) { return std::exp(k * m); });
}

WeightSpec WeightSpec::wiener() {
  return WeightSpec(Kind::wiener, "wiener", [](double) { return 1.0; });
}

WeightSpec WeightSpec::custom(std::string name, std::function<double(double)> lambda) {
  return WeightSpec(Kind::custom, std::move(name), std::move(lambda));
}

WeightSpec WeightSpec::from_samples(std::string name, std::vector<double> samples) {
  if (samples.empty()) fail(errc::invalid_argument, "weight samples are empty");
  auto lambda = [samples = std::move(samples)](double m) {
    auto i = static_cast<long long>(std::llround(m));
    if (i < 0 || i >= static_cast<long long>(samples.size()))
      fail(errc::invalid_argument, "weight sample out of range");
    return samples[static_cast<size_t>(i)];
  };
  return WeightSpec(Kind::custom, std::move(name), std::move(lambda));
}

void WeightSpec::check_admissible() const {
  // Test grid m = 0..64; custom sample tables may end sooner.
  int grid_max = 64;
  if (kind_ == Kind::custom) {
    for (int m = 0; m <= 64; ++m) {
      bool ok = true;
      try {
        (void)lambda_(m);
      } catch (const error&) {
        ok = false;
      }
      if (!ok) {
        grid_max = m - 1;
        break;
      }
    }
    if (grid_max < 1)
      fail(errc::invalid_argument, "weight '" + name_ + "' has no usable grid");
  }
  constexpr double slack = 1e-9;
  for (int m = 0; m <= grid_max; ++m) {
    double v = lambda_(m);
    if (!std::isfinite(v) || v <= 0.0)
      fail(errc::invalid_argument,
           "weight '" + name_ + "' is not positive on the test grid");
    if (m > 0 && lambda_(m) < lambda_(m - 1) * (1.0 - slack))
      fail(errc::invalid_argument,
           "weight '" + name_ + "' is decreasing on the test grid");
  }
  for (int q = 0; q <= grid_max; ++q)
    for (int r = q; q + r <= grid_max; ++r)
      if (lambda_(q + r) > lambda_(q) * lambda_(r) * (1.0 + slack))
        fail(errc::invalid_argument,
             "weight '" + name_ + "' is not submultiplicative on the test grid");
}

double WeightSpec::operator()(double m) const { return lambda_(m); }

// ---- norms ------------------------------------------------------------------

double norm_vk(const CoefficientField& u, double k) {
  if (k < 0.0) fail(errc::invalid_argument, "norm_vk needs k >= 0");
  double s = 0.0;
  for (const auto& [n, v] : u.coeffs())
    s += std::abs(v) * std::exp(k * static_cast<double>(index_norm(n)));
  return s;
}

double norm_weighted(const CoefficientField& u, const WeightSpec& w) {
  double s = 0.0;
  for (const auto& [n, v] : u.coeffs())
    s += std::abs(v) * w(static_cast<double>(index_norm(n)));
  return s;
}

double realness_defect(const CoefficientField& u) {
  double d = 0.0;
  for (const auto& [n, v] : u.coeffs())
    d = std::max(d, std::abs(u.at(negate(n)) - std::conj(v)));
  return d;
}

// ---- algebra ----------------------------------------------------------------

CoefficientField multiply(const CoefficientField& u, const CoefficientField& v) {
  require_same_omega(u, v);
  CoeffMap out;
  // Outer/inner iteration in map order fixes the accumulation order per
  // output index, so serial results are reproducible bit for bit.
  for (const auto& [q, a] : u.coeffs()) {
    for (const auto& [r, b] : v.coeffs()) {
      MultiIndex n(q.size());
      for (size_t i = 0; i < q.size(); ++i) n[i] = q[i] + r[i];
      out[n] += a * b;
    }
  }
  return CoefficientField(u.omega(), std::move(out),
                          u.real_flagged() && v.real_flagged());
}

CoefficientField power(const CoefficientField& u, int m) {
  if (m < 1) fail(errc::invalid_argument, "power needs exponent >= 1");
  CoefficientField acc = u;
  for (int i = 1; i < m; ++i) acc = multiply(acc, u);
  return acc;
}

CoefficientField differentiate(const CoefficientField& u) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs())
    out.emplace(n, Complex(0.0, frequency(u.omega(), n)) * v);
  return CoefficientField(u.omega(), std::move(out), u.real_flagged());
}

CoefficientField apply_multiplier(const CoefficientField& u, const SymbolSpec& m) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs())
    out.emplace(n, m.eval(frequency(u.omega(), n)) * v);
  return CoefficientField(u.omega(), std::move(out),
                          u.real_flagged() && m.claims_symmetry());
}

CoefficientField add(const CoefficientField& u, const CoefficientField& v) {
  require_same_omega(u, v);
  CoeffMap out = u.coeffs();
  for (const auto& [n, b] : v.coeffs()) out[n] += b;
  return CoefficientField(u.omega(), std::move(out),
                          u.real_flagged() && v.real_flagged());
}

CoefficientField scale(const CoefficientField& u, Complex c) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs()) out.emplace(n, c * v);
  return CoefficientField(u.omega(), std::move(out),
                          u.real_flagged() && c.imag() == 0.0);
}

CoefficientField sub(const CoefficientField& u, const CoefficientField& v) {
  return add(u, scale(v, Complex(-1.0, 0.0)));
}

CoefficientField conjugate(const CoefficientField& u) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs()) out.emplace(negate(n), std::conj(v));
  return CoefficientField(u.omega(), std::move(out), u.real_flagged());
}

CoefficientField translate(const CoefficientField& u, double x0) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs()) {
    double theta = frequency(u.omega(), n) * x0;
    out.emplace(n, std::exp(Complex(0.0, theta)) * v);
  }
  // The phase is odd in n, so conjugate symmetry survives the shift.
  return CoefficientField(u.omega(), std::move(out), u.real_flagged());
}

CoefficientField prune(const CoefficientField& u, double threshold) {
  if (threshold < 0.0) fail(errc::invalid_argument, "prune threshold must be >= 0");
  if (threshold == 0.0) return u;
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs())
    if (std::abs(v) > threshold) out.emplace(n, v);
  return CoefficientField(u.omega(), std::move(out), u.real_flagged());
}

CoefficientField truncate(const CoefficientField& u, int radius) {
  CoeffMap out;
  for (const auto& [n, v] : u.coeffs())
    if (in_box(n, radius)) out.emplace(n, v);
  return CoefficientField(u.omega(), std::move(out), u.real_flagged());
}

Complex evaluate(const CoefficientField& u, double x) {
  Complex s(0.0, 0.0);
  for (const auto& [n, v] : u.coeffs())
    s += v * std::exp(Complex(0.0, frequency(u.omega(), n) * x));
  return s;
}

double max_coeff_diff(const CoefficientField& u, const CoefficientField& v) {
  double d = 0.0;
  for (const auto& [n, a] : u.coeffs()) d = std::max(d, std::abs(a - v.at(n)));
  for (const auto& [n, b] : v.coeffs()) d = std::max(d, std::abs(u.at(n) - b));
  return d;
}

// ---- serialization ------------------------------------------------------------

std::string to_json(const CoefficientField& u, int indent) {
  nlohmann::json j;
  j["omega"] = u.omega().entries();
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [n, v] : u.coeffs()) {
    nlohmann::json e;
    e["n"] = n;
    e["re"] = v.real();
    e["im"] = v.imag();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j.dump(indent);
}

CoefficientField field_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_argument, std::string("field JSON parse error: ") + e.what());
  }
  try {
    FrequencyVector omega(j.at("omega").get<std::vector<double>>());
    CoeffMap coeffs;
    for (const auto& e : j.at("entries")) {
      MultiIndex n = e.at("n").get<MultiIndex>();
      coeffs[n] = Complex(e.at("re").get<double>(), e.at("im").get<double>());
    }
    return CoefficientField(std::move(omega), std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_argument, std::string("field JSON schema error: ") + e.what());
  }
}

}  // namespace qpwave
