#pragma once

// Frequency-pathology diagnostics for the base frequency omega = (1, alpha),
// where alpha = sum_m 1/(10^^m) and 10^^m is the m-fold power tower.  The
// convergents p_n/q_n with q_n = 10^^n make <omega, (-p_n, q_n)> collapse to
// the series tail C(n), an explicit Liouville-type small divisor.  Everything
// here works in log10 space; levels n <= 2 additionally carry p_n, q_n as
// exact 64-bit integers.

#include <string>
#include <vector>

#include "qpwave/lattice.hpp"
#include "qpwave/qpfield.hpp"

namespace qpwave {

struct LiouvilleWitness {
  int level = 0;
  bool exact_mode = false;  // p, q held exactly (level <= 2)
  long long q_exact = 0;    // q_n = 10^^n
  long long p_exact = 0;    // p_n = sum_{m<=n} (10^^n)/(10^^m)
  double log10_q = 0.0;     // = 10^^(n-1); +inf once past double range
  double log10_p = 0.0;
  double log10_C = 0.0;     // log10 of the small divisor; -inf once past range
  double remainder_rel_log10 = 0.0;  // log10 bound on (C - dominant)/dominant

  // The lattice index (-p_n, q_n) realizing the small divisor.  Only level 1
  // fits in 32-bit lattice coordinates.
  MultiIndex witness_index() const;
};

// level >= 1; levels above 2 degrade to pure log-space data (exact_mode off).
LiouvilleWitness liouville_witness(int level);

struct TsugawaParams {
  std::vector<double> sigma;  // per-component bracket weights, all >= 0
  double kappa = 0.0;         // coefficient decay rate, > 0

  void validate() const;
  bool kappa_admissible() const;  // kappa <= ln(9)/4, the chain's threshold
};

// log10 of one penalized-norm term  |<omega,n>|^{-1/2} * prod_i <n_i>^{sigma_i} * |u_hat(n)|
// for the probe function u_hat(n) = e^{-kappa|n|}, with the small divisor
// |<omega,n>| supplied in log10 space.  <x> = sqrt(1 + x^2).
double tsugawa_term(const MultiIndex& n_index, const TsugawaParams& params,
                    double small_divisor_log10);

// Long-window average (1/2W) int_{-W}^{W} u(x) e^{-i<omega,n>x} dx in closed
// form: sum_m u_hat(m) sinc(<omega, m-n> W).  Converges to u_hat(n) as W grows,
// with off-target contamination <= |u_hat(m)| / (gap * W).
Complex recover_coefficient(const CoefficientField& u, const MultiIndex& n,
                            double window);

struct ChainLink {
  std::string name;
  double lhs_log10 = 0.0;
  double rhs_log10 = 0.0;
  double margin_log10 = 0.0;  // rhs - lhs, computed in cancellation-safe form
  bool pass = false;          // margin >= 0
  bool asserted = true;       // informational links are excluded from verdicts
  std::string note;
};

struct LevelReport {
  LiouvilleWitness witness;
  double term_log10 = 0.0;
  std::vector<ChainLink> links;
  bool asserted_pass = true;  // every asserted link passes
};

// Check, per level n in {1, 2}, the divergence chain
//   C(n) <= q^{1-n},  C(n) <= 2q/10^q  (<~ 9^{-q})  <= e^{-4 kappa q}
//        <= e^{-2 kappa |(-p,q)|},  and  term >= 1,
// plus the end-to-end bound C(n) <= e^{-2 kappa |n|}.  The base-nine step is
// an up-to-constant comparison at level 1 (constant ~ 7) and is asserted
// strictly only from level 2 on.  Failures are report entries, never errors.
struct ChainReport {
  TsugawaParams params;
  bool kappa_admissible = true;
  std::vector<LevelReport> levels;
  bool all_pass = true;
};

ChainReport verify_divergence_chain(const TsugawaParams& params);

std::string chain_report_json(const ChainReport& rep, int indent = -1);

}  // namespace qpwave
