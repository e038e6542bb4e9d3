#include "qpwave/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "qpwave/errors.hpp"

namespace qpwave {

namespace {
constexpr long long kQ1 = 10;
constexpr long long kP1 = 1;
constexpr long long kQ2 = 10000000000LL;   // 10^10
constexpr long long kP2 = 1000000001LL;    // 10^9 + 1
}  // namespace

MultiIndex LiouvilleWitness::witness_index() const {
  constexpr long long imax = std::numeric_limits<int>::max();
  if (!exact_mode || p_exact > imax || q_exact > imax)
    fail(errc::invalid_argument,
         "witness index does not fit 32-bit lattice coordinates at this level");
  return MultiIndex{static_cast<int>(-p_exact), static_cast<int>(q_exact)};
}

LiouvilleWitness liouville_witness(int level) {
  if (level < 1) fail(errc::invalid_argument, "witness level must be >= 1");
  LiouvilleWitness w;
  w.level = level;

  // Power towers in doubles; overflow saturates to +inf, which only the
  // degraded (level >= 3) branch can reach.
  double t = 1.0;  // 10^^0
  for (int m = 1; m < level; ++m) t = std::pow(10.0, t);
  const double q_d = std::pow(10.0, t);  // 10^^level
  w.log10_q = t;

  if (level <= 2) {
    w.exact_mode = true;
    w.q_exact = level == 1 ? kQ1 : kQ2;
    w.p_exact = level == 1 ? kP1 : kP2;
    w.log10_p = std::log10(static_cast<double>(w.p_exact));
    w.log10_C = w.log10_q - static_cast<double>(w.q_exact);
  } else {
    // p_n ~ q_n/10 and C(n) falls below the double exponent range.
    w.log10_p = w.log10_q - 1.0;
    w.log10_C = w.log10_q - q_d;  // -inf
  }

  // C(n) = (dominant term q_n/10^^(n+1)) * (1 + rel); rel <= 2*10^^(n+1)/10^^(n+2),
  // i.e. log10(rel bound) = log10(2) + q_n - 10^{q_n}.
  const double p10 = std::pow(10.0, q_d);
  w.remainder_rel_log10 = std::isfinite(p10)
                              ? std::log10(2.0) + q_d - p10
                              : -std::numeric_limits<double>::infinity();
  return w;
}

void TsugawaParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    fail(errc::invalid_argument, "penalty params: kappa must be positive");
  for (double s : sigma)
    if (s < 0.0 || !std::isfinite(s))
      fail(errc::invalid_argument, "penalty params: sigma entries must be >= 0");
}

bool TsugawaParams::kappa_admissible() const {
  return kappa <= std::log(9.0) / 4.0;
}

double tsugawa_term(const MultiIndex& n_index, const TsugawaParams& params,
                    double small_divisor_log10) {
  params.validate();
  if (params.sigma.size() != n_index.size())
    fail(errc::dimension_mismatch, "sigma size must match the index dimension");
  if (!std::isfinite(small_divisor_log10))
    fail(errc::invalid_argument, "small divisor log10 must be finite");
  const double ln10 = std::log(10.0);
  double term = -0.5 * small_divisor_log10;
  for (size_t i = 0; i < n_index.size(); ++i) {
    const double x = static_cast<double>(n_index[i]);
    term += params.sigma[i] * 0.5 * std::log10(1.0 + x * x);
  }
  term -= params.kappa * static_cast<double>(index_norm(n_index)) / ln10;
  return term;
}

Complex recover_coefficient(const CoefficientField& u, const MultiIndex& n,
                            double window) {
  if (!(window > 0.0) || !std::isfinite(window))
    fail(errc::invalid_argument, "recovery window must be positive");
  if (n.size() != static_cast<size_t>(u.omega().nu()))
    fail(errc::dimension_mismatch, "target index dimension mismatch");
  Complex acc(0.0, 0.0);
  for (const auto& [m, v] : u.coeffs()) {
    MultiIndex d(m.size());
    for (size_t i = 0; i < m.size(); ++i) d[i] = m[i] - n[i];
    const double z = frequency(u.omega(), d) * window;
    const double sinc = std::abs(z) < 1e-8 ? 1.0 : std::sin(z) / z;
    acc += v * sinc;
  }
  return acc;
}

namespace {

// Penalized-norm term for a witness held as (p, q) doubles; matches
// tsugawa_term on indices small enough to be lattice points.
double term_from_pq(double p, double q, const TsugawaParams& params,
                    double sd_log10) {
  const double ln10 = std::log(10.0);
  double term = -0.5 * sd_log10;
  term += params.sigma[0] * 0.5 * std::log10(1.0 + p * p);
  term += params.sigma[1] * 0.5 * std::log10(1.0 + q * q);
  term -= params.kappa * (p + q) / ln10;
  return term;
}

ChainLink make_link(std::string name, double lhs, double rhs, double margin,
                    bool asserted, std::string note = "") {
  ChainLink link;
  link.name = std::move(name);
  link.lhs_log10 = lhs;
  link.rhs_log10 = rhs;
  link.margin_log10 = margin;
  link.pass = margin >= 0.0;
  link.asserted = asserted;
  link.note = std::move(note);
  return link;
}

LevelReport chain_level(int level, const TsugawaParams& params) {
  LevelReport rep;
  rep.witness = liouville_witness(level);
  const LiouvilleWitness& w = rep.witness;
  const double p = static_cast<double>(w.p_exact);
  const double q = static_cast<double>(w.q_exact);
  const double ln10 = std::log(10.0);
  const double ln9 = std::log(9.0);
  const double l10_2q = std::log10(2.0 * q);
  const double kappa = params.kappa;

  rep.term_log10 = term_from_pq(p, q, params, w.log10_C);

  // Margins are assembled from exactly-known pieces (log10_q, q, p are exact
  // doubles at these levels) so the huge common terms cancel symbolically.
  rep.links.push_back(make_link(
      "witness_bound", w.log10_C, (1.0 - level) * w.log10_q,
      (1.0 - level) * w.log10_q - w.log10_C, true));

  rep.links.push_back(make_link(
      "series_tail", w.log10_C, l10_2q - q, (l10_2q - q) - w.log10_C, true));

  const double base9_margin = q * (1.0 - std::log10(9.0)) - l10_2q;
  rep.links.push_back(make_link(
      "base_nine", l10_2q - q, -q * std::log10(9.0), base9_margin, level >= 2,
      level >= 2 ? "" : "up-to-constant step: 2q(9/10)^q ~ 6.97 at q = 10"));

  rep.links.push_back(make_link(
      "rate_threshold", -(ln9 * q) / ln10, -((4.0 * kappa) * q) / ln10,
      ((ln9 - 4.0 * kappa) * q) / ln10, true,
      "equality when kappa = ln(9)/4"));

  rep.links.push_back(make_link(
      "tower_to_norm", -((4.0 * kappa) * q) / ln10,
      -((2.0 * kappa) * (p + q)) / ln10, ((2.0 * kappa) * (q - p)) / ln10,
      true));

  rep.links.push_back(
      make_link("term_at_least_one", 0.0, rep.term_log10, rep.term_log10, true));

  rep.links.push_back(make_link(
      "end_to_end", w.log10_C, -((2.0 * kappa) * (p + q)) / ln10,
      (q - w.log10_q) - ((2.0 * kappa) * (p + q)) / ln10, true));

  rep.asserted_pass = true;
  for (const ChainLink& link : rep.links)
    if (link.asserted && !link.pass) rep.asserted_pass = false;
  return rep;
}

nlohmann::json json_real(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

ChainReport verify_divergence_chain(const TsugawaParams& params) {
  params.validate();
  if (params.sigma.size() != 2)
    fail(errc::dimension_mismatch,
         "divergence chain runs on the 2-dimensional witness lattice; "
         "sigma must have 2 entries");
  ChainReport rep;
  rep.params = params;
  rep.kappa_admissible = params.kappa_admissible();
  rep.all_pass = true;
  for (int level = 1; level <= 2; ++level) {
    rep.levels.push_back(chain_level(level, params));
    if (!rep.levels.back().asserted_pass) rep.all_pass = false;
  }
  return rep;
}

std::string chain_report_json(const ChainReport& rep, int indent) {
  nlohmann::json j;
  j["kappa"] = rep.params.kappa;
  j["kappa_admissible"] = rep.kappa_admissible;
  j["sigma"] = rep.params.sigma;
  j["all_pass"] = rep.all_pass;
  j["levels"] = nlohmann::json::array();
  for (const LevelReport& lev : rep.levels) {
    nlohmann::json jl;
    jl["level"] = lev.witness.level;
    jl["witness"] = {
        {"exact", lev.witness.exact_mode},
        {"p", lev.witness.p_exact},
        {"q", lev.witness.q_exact},
        {"log10_p", json_real(lev.witness.log10_p)},
        {"log10_q", json_real(lev.witness.log10_q)},
        {"log10_C", json_real(lev.witness.log10_C)},
        {"remainder_rel_log10", json_real(lev.witness.remainder_rel_log10)},
    };
    jl["term_log10"] = json_real(lev.term_log10);
    jl["asserted_pass"] = lev.asserted_pass;
    jl["links"] = nlohmann::json::array();
    for (const ChainLink& link : lev.links) {
      nlohmann::json jk;
      jk["name"] = link.name;
      jk["lhs_log10"] = json_real(link.lhs_log10);
      jk["rhs_log10"] = json_real(link.rhs_log10);
      jk["margin_log10"] = json_real(link.margin_log10);
      jk["pass"] = link.pass;
      jk["asserted"] = link.asserted;
      if (!link.note.empty()) jk["note"] = link.note;
      jl["links"].push_back(jk);
    }
    j["levels"].push_back(jl);
  }
  return j.dump(indent);
}

}  // namespace qpwave
