#include "qpwave/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace qpwave {

FrequencyVector::FrequencyVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    fail(errc::invalid_argument, "frequency vector must have nu >= 1");
  for (double w : entries_) {
    if (!std::isfinite(w))
      fail(errc::non_finite, "frequency vector entry is not finite");
    if (w == 0.0)
      fail(errc::invalid_argument, "frequency vector entry is zero");
  }
}

double FrequencyVector::max_abs() const {
  double m = 0.0;
  for (double w : entries_) m = std::max(m, std::abs(w));
  return m;
}

double frequency(const FrequencyVector& omega, const MultiIndex& n) {
  if (static_cast<int>(n.size()) != omega.nu())
    fail(errc::dimension_mismatch,
         "index dimension " + std::to_string(n.size()) +
             " does not match nu = " + std::to_string(omega.nu()));
  double acc = 0.0;
  for (int i = 0; i < omega.nu(); ++i)
    acc += omega[i] * static_cast<double>(n[static_cast<size_t>(i)]);
  return acc;
}

long long index_norm(const MultiIndex& n) {
  long long s = 0;
  for (int v : n) s += std::llabs(static_cast<long long>(v));
  return s;
}

namespace {

void enumerate_rec(int radius, int nu, int dim, MultiIndex& cur,
                   std::vector<MultiIndex>& out) {
  if (dim == nu - 1) {
    for (int v = -radius; v <= radius; ++v) {
      cur[static_cast<size_t>(dim)] = v;
      out.push_back(cur);
    }
    return;
  }
  for (int v = -radius; v <= radius; ++v) {
    cur[static_cast<size_t>(dim)] = v;
    enumerate_rec(radius - std::abs(v), nu, dim + 1, cur, out);
  }
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<MultiIndex> enumerate_box(int radius, int nu) {
  if (radius < 0) fail(errc::invalid_argument, "box radius must be >= 0");
  if (nu < 1) fail(errc::invalid_argument, "nu must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<size_t>(box_cardinality(radius, nu)));
  MultiIndex cur(static_cast<size_t>(nu), 0);
  enumerate_rec(radius, nu, 0, cur, out);
  return out;
}

long long box_cardinality(int radius, int nu) {
  if (radius < 0) fail(errc::invalid_argument, "box radius must be >= 0");
  if (nu < 1) fail(errc::invalid_argument, "nu must be >= 1");
  long long total = 0;
  for (int i = 0; i <= std::min(nu, radius); ++i)
    total += (1LL << i) * binom(nu, i) * binom(radius, i);
  return total;
}

bool in_box(const MultiIndex& n, int radius) {
  return index_norm(n) <= radius;
}

namespace {

using i128 = __int128;

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long checked_narrow(i128 v) {
  constexpr i128 maxv = 0x7fffffffffffffffLL;
  if (v > maxv || v < -maxv)
    fail(errc::invalid_argument, "rational arithmetic overflow");
  return static_cast<long long>(v);
}

Rational make_reduced(i128 n, i128 d) {
  if (d == 0) fail(errc::invalid_argument, "rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  i128 g = gcd128(n, d);
  if (g == 0) g = 1;
  return Rational(checked_narrow(n / g), checked_narrow(d / g));
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) fail(errc::invalid_argument, "rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  long long g = std::gcd(static_cast<unsigned long long>(std::llabs(n)),
                         static_cast<unsigned long long>(d));
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

Rational Rational::operator+(const Rational& o) const {
  return make_reduced(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num, o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return make_reduced(i128(num) * o.num, i128(den) * o.den);
}

Rational frequency_exact(std::span<const Rational> omega, const MultiIndex& n) {
  if (n.size() != omega.size())
    fail(errc::dimension_mismatch, "index dimension does not match omega");
  Rational acc = Rational::integer(0);
  for (size_t i = 0; i < n.size(); ++i)
    acc = acc + omega[i] * Rational::integer(n[i]);
  return acc;
}

}  // namespace qpwave
