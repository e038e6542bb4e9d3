#pragma once

// Frequency vectors and the integer lattice underneath quasi-periodic
// Fourier series u(x) = sum over n in Z^nu of uhat(n) exp(i<omega,n>x).
//
// Conventions used throughout the library:
//   |n|     is the l1 norm on Z^nu,
//   |omega| is the l-infinity norm on R^nu,
// so |<omega,n>| <= |omega| |n| holds with no dimensional constant.

#include <cstdint>
#include <span>
#include <vector>

#include "qpwave/errors.hpp"

namespace qpwave {

using MultiIndex = std::vector<int>;  // operator< is lexicographic

// Frequency vector omega in R^nu.  Entries must be finite and nonzero;
// rational independence is assumed, not verified (runs record the
// assumption in their manifest).
class FrequencyVector {
 public:
  explicit FrequencyVector(std::vector<double> entries);

  int nu() const { return static_cast<int>(entries_.size()); }
  const std::vector<double>& entries() const { return entries_; }
  double operator[](int i) const { return entries_[static_cast<size_t>(i)]; }

  // |omega| in the l-infinity norm.
  double max_abs() const;

  bool operator==(const FrequencyVector& o) const { return entries_ == o.entries_; }

 private:
  std::vector<double> entries_;
};

// <omega, n>, accumulated in index order so results are reproducible.
double frequency(const FrequencyVector& omega, const MultiIndex& n);

// |n| in l1.
long long index_norm(const MultiIndex& n);

// All n with |n| <= radius in lexicographic order.
std::vector<MultiIndex> enumerate_box(int radius, int nu);

// Closed-form cardinality of the l1 ball (2N^2+2N+1 for nu = 2).
long long box_cardinality(int radius, int nu);

bool in_box(const MultiIndex& n, int radius);

// Exact rational scalar for cancellation-free frequency arithmetic.
// Doubles lose the Liouville example <(1, 1/10 + 10^-10), (-1, 10)> = 10^-9
// to catastrophic cancellation; this path keeps it exact.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  static Rational integer(long long n) { return Rational(n, 1); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational frequency_exact(std::span<const Rational> omega, const MultiIndex& n);

}  // namespace qpwave
