#include <doctest.h>

#include <cmath>
#include <complex>

#include "qpwave/qpfield.hpp"
#include "qpwave/symbols.hpp"
#include "support.hpp"

using namespace qpwave;
using qptest::make_rng;
using qptest::random_field;
using qptest::random_omega;
using qptest::random_real_field;

namespace {

CoefficientField two_mode(double a, double b) {
  FrequencyVector w({1.0});
  CoeffMap c;
  c[{1}] = Complex(a, 0.0);
  c[{-1}] = Complex(b, 0.0);
  return CoefficientField(w, std::move(c));
}

}  // namespace

TEST_CASE("field construction validates") {
  FrequencyVector w({1.0, 2.0});
  CoeffMap bad;
  bad[{1}] = Complex(1.0, 0.0);  // wrong dimension
  CHECK_THROWS_AS(CoefficientField(w, bad), error);
  CoeffMap inf;
  inf[{1, 0}] = Complex(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(CoefficientField(w, inf), error);
}

TEST_CASE("norm_vk by hand") {
  // u = 2 e^{ix} + 3i e^{-2ix}: ||u||_0 = 5, ||u||_1 = 2e + 3e^2.
  FrequencyVector w({1.0});
  CoeffMap c;
  c[{1}] = Complex(2.0, 0.0);
  c[{-2}] = Complex(0.0, 3.0);
  CoefficientField u(w, std::move(c));
  CHECK(norm_vk(u, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm_vk(u, 1.0) ==
        doctest::Approx(2.0 * std::exp(1.0) + 3.0 * std::exp(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(norm_vk(u, -0.5), error);
}

TEST_CASE("weighted norm agrees with norm_vk for the exponential weight") {
  auto rng = make_rng(11);
  auto w = random_omega(rng, 2);
  auto u = random_field(rng, w, 3);
  auto ws = WeightSpec::exponential(0.7);
  CHECK(qptest::rel_diff(norm_weighted(u, ws), norm_vk(u, 0.7)) <= 1e-14);
  CHECK(norm_weighted(u, WeightSpec::wiener()) ==
        doctest::Approx(norm_vk(u, 0.0)).epsilon(1e-15));
}

TEST_CASE("weight admissibility screens bad tables") {
  CHECK_THROWS_AS(WeightSpec::exponential(0.0), error);
  // Decreasing.
  CHECK_THROWS_AS(
      WeightSpec::custom("dec", [](double m) { return 1.0 / (1.0 + m); }), error);
  // Not submultiplicative: e^{m^2} has lambda(2) = e^4 > lambda(1)^2 = e^2.
  CHECK_THROWS_AS(
      WeightSpec::custom("gauss", [](double m) { return std::exp(m * m); }), error);
  // Polynomial weights (1+m)^s are fine.
  CHECK_NOTHROW(WeightSpec::custom("poly", [](double m) { return std::pow(1.0 + m, 2.0); }));
  CHECK_NOTHROW(WeightSpec::from_samples("tab", {1.0, 2.0, 4.0}));
  CHECK_THROWS_AS(WeightSpec::from_samples("neg", {1.0, -1.0}), error);
}

TEST_CASE("multiply matches the schoolbook convolution") {
  auto rng = make_rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int nu = 1 + static_cast<int>(trial % 2);
    auto w = random_omega(rng, nu);
    auto u = random_field(rng, w, 3);
    auto v = random_field(rng, w, 2);
    auto fast = multiply(u, v);
    auto ref = qptest::convolve_reference(u, v);
    CHECK(qptest::max_field_diff(fast, ref) <= 1e-15);
  }
}

TEST_CASE("norm is an algebra norm") {
  auto rng = make_rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_omega(rng, 2);
    auto u = random_field(rng, w, 2);
    auto v = random_field(rng, w, 2);
    for (double k : {0.0, 0.5, 1.0}) {
      CHECK(norm_vk(multiply(u, v), k) <= norm_vk(u, k) * norm_vk(v, k) + 1e-12);
    }
  }
}

TEST_CASE("power is iterated multiplication") {
  auto rng = make_rng(23);
  auto w = random_omega(rng, 1);
  auto u = random_field(rng, w, 3);
  auto cubed = power(u, 3);
  auto ref = qptest::power_reference(u, 3);
  double scale = norm_vk(ref, 0.0);
  CHECK(qptest::max_field_diff(cubed, ref) <= 1e-13 * std::max(scale, 1.0));
  CHECK(qptest::max_field_diff(power(u, 1), u) == 0.0);
  CHECK_THROWS_AS(power(u, 0), error);
}

TEST_CASE("convolution support for two pure modes") {
  // (a e^{ix} + b e^{-ix})^2 = a^2 e^{2ix} + 2ab + b^2 e^{-2ix}.
  auto u = two_mode(2.0, 3.0);
  auto sq = power(u, 2);
  CHECK(sq.at({2}) == Complex(4.0, 0.0));
  CHECK(sq.at({0}) == Complex(12.0, 0.0));
  CHECK(sq.at({-2}) == Complex(9.0, 0.0));
  CHECK(sq.support_size() == 3);
}

TEST_CASE("differentiate multiplies by i<omega,n>") {
  FrequencyVector w({2.0, -1.0});
  CoeffMap c;
  c[{1, 1}] = Complex(3.0, 0.0);
  CoefficientField u(w, std::move(c));
  auto du = differentiate(u);
  CHECK(du.at({1, 1}) == Complex(0.0, 3.0));  // <omega,n> = 1
}

TEST_CASE("apply_multiplier uses the symbol at the lattice frequency") {
  FrequencyVector w({1.0});
  CoeffMap c;
  c[{2}] = Complex(1.0, 0.0);
  CoefficientField u(w, std::move(c));
  auto m = SymbolSpec::builtin("kdv");
  auto lu = apply_multiplier(u, m);
  CHECK(lu.at({2}) == Complex(0.0, -8.0));  // -i xi^3 at xi = 2
}

TEST_CASE("add/sub/scale keep the frequency vector honest") {
  FrequencyVector w1({1.0});
  FrequencyVector w2({2.0});
  CoeffMap c;
  c[{0}] = Complex(1.0, 0.0);
  CoefficientField a(w1, c), b(w2, c);
  CHECK_THROWS_AS(add(a, b), error);
  auto s = scale(a, Complex(0.0, 2.0));
  CHECK(s.at({0}) == Complex(0.0, 2.0));
  auto z = sub(a, a);
  CHECK(norm_vk(z, 0.0) == 0.0);
}

TEST_CASE("conjugate flips index and value; real fields are fixed points") {
  auto rng = make_rng(31);
  auto w = random_omega(rng, 2);
  auto u = random_real_field(rng, w, 3);
  CHECK(realness_defect(u) <= 1e-15);
  CHECK(qptest::max_field_diff(conjugate(u), u) <= 1e-15);

  auto v = random_field(rng, w, 2);
  auto cc = conjugate(conjugate(v));
  CHECK(qptest::max_field_diff(cc, v) == 0.0);
}

TEST_CASE("translate is a phase shift and preserves evaluation") {
  auto rng = make_rng(32);
  auto w = random_omega(rng, 2);
  auto u = random_field(rng, w, 2);
  double x0 = 0.37;
  auto shifted = translate(u, x0);
  for (double x : {-1.0, 0.0, 0.5}) {
    Complex lhs = evaluate(shifted, x);
    Complex rhs = evaluate(u, x + x0);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
  // Norms are invariant under the phase.
  CHECK(qptest::rel_diff(norm_vk(shifted, 1.0), norm_vk(u, 1.0)) <= 1e-14);
}

TEST_CASE("translate keeps the realness flag and the symmetry it tracks") {
  auto rng = make_rng(33);
  auto w = random_omega(rng, 1);
  auto u = random_real_field(rng, w, 3);
  auto shifted = translate(u, 1.7);
  CHECK(shifted.real_flagged());
  CHECK(realness_defect(shifted) <= 1e-14);
}

TEST_CASE("prune and truncate") {
  FrequencyVector w({1.0});
  CoeffMap c;
  c[{0}] = Complex(1.0, 0.0);
  c[{1}] = Complex(1e-14, 0.0);
  c[{5}] = Complex(0.5, 0.0);
  CoefficientField u(w, std::move(c));
  auto pr = prune(u, 1e-12);
  CHECK(pr.support_size() == 2);
  CHECK(pr.at({1}) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(prune(u, -1.0), error);
  auto tr = truncate(u, 2);
  CHECK(tr.support_size() == 2);
  CHECK(tr.at({5}) == Complex(0.0, 0.0));
}

TEST_CASE("realness flag propagation through the algebra") {
  auto rng = make_rng(34);
  auto w = random_omega(rng, 1);
  auto u = random_real_field(rng, w, 2);
  auto v = random_real_field(rng, w, 2);
  CHECK(multiply(u, v).real_flagged());
  CHECK(add(u, v).real_flagged());
  CHECK(scale(u, Complex(2.0, 0.0)).real_flagged());
  CHECK_FALSE(scale(u, Complex(0.0, 1.0)).real_flagged());
  CHECK(differentiate(u).real_flagged());
  CHECK(realness_defect(multiply(u, v)) <= 1e-14);
  CHECK(realness_defect(differentiate(u)) <= 1e-14);
  // A symmetric symbol keeps the flag; an asymmetric one drops it.
  CHECK(apply_multiplier(u, SymbolSpec::builtin("kdv")).real_flagged());
  CHECK_FALSE(apply_multiplier(u, SymbolSpec::builtin("dnls")).real_flagged());
}

TEST_CASE("evaluate sums the series") {
  auto u = two_mode(1.0, 1.0);  // 2 cos x
  CHECK(std::abs(evaluate(u, 0.0) - Complex(2.0, 0.0)) <= 1e-15);
  CHECK(std::abs(evaluate(u, M_PI / 2) - Complex(0.0, 0.0)) <= 1e-15);
}

TEST_CASE("JSON round trip preserves coefficients exactly") {
  auto rng = make_rng(35);
  auto w = random_omega(rng, 2);
  auto u = random_field(rng, w, 3);
  auto text = to_json(u, 2);
  auto back = field_from_json(text);
  CHECK(back.omega() == u.omega());
  CHECK(back.support_size() == u.support_size());
  CHECK(qptest::max_field_diff(back, u) == 0.0);
}

TEST_CASE("field JSON rejects malformed input") {
  CHECK_THROWS_AS(field_from_json("not json"), error);
  CHECK_THROWS_AS(field_from_json("{\"omega\": [1.0]}"), error);
  CHECK_THROWS_AS(
      field_from_json("{\"omega\": [1.0], \"entries\": [{\"n\": [0]}]}"), error);
}

TEST_CASE("max_coeff_diff sees both supports") {
  FrequencyVector w({1.0});
  CoeffMap a, b;
  a[{0}] = Complex(1.0, 0.0);
  b[{3}] = Complex(0.25, 0.0);
  CoefficientField u(w, a), v(w, b);
  CHECK(max_coeff_diff(u, v) == 1.0);
  CHECK(max_coeff_diff(v, u) == 1.0);
}
