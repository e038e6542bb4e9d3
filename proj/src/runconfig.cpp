#include "qpwave/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qpwave/errors.hpp"

namespace qpwave {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      fail(errc::invalid_argument,
           "config: unknown key \"" + item.key() + "\" in " + where);
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number())
    fail(errc::invalid_argument, "config: " + where + " must be a number");
  return v.get<double>();
}

long long as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer())
    fail(errc::invalid_argument, "config: " + where + " must be an integer");
  return v.get<long long>();
}

int as_int32(const json& v, const std::string& where) {
  const long long x = as_int(v, where);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    fail(errc::invalid_argument, "config: " + where + " out of range");
  return static_cast<int>(x);
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean())
    fail(errc::invalid_argument, "config: " + where + " must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string())
    fail(errc::invalid_argument, "config: " + where + " must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_array(const json& v, const std::string& where) {
  if (!v.is_array())
    fail(errc::invalid_argument, "config: " + where + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_double(e, where + " entry"));
  return out;
}

InitialDataConfig parse_initial_data(const json& v) {
  if (!v.is_object())
    fail(errc::invalid_argument, "config: initial_data must be an object");
  InitialDataConfig data;
  if (find(v, "preset")) {
    require_keys(v, {"preset", "amplitude", "rate", "box"}, "initial_data");
    if (as_string(*find(v, "preset"), "initial_data.preset") != "exp_decay")
      fail(errc::unknown_name, "config: unknown initial data preset");
    data.use_preset = true;
    const json* a = find(v, "amplitude");
    const json* r = find(v, "rate");
    const json* b = find(v, "box");
    if (!a || !r || !b)
      fail(errc::invalid_argument,
           "config: preset initial data needs amplitude, rate, box");
    data.amplitude = as_double(*a, "initial_data.amplitude");
    data.rate = as_double(*r, "initial_data.rate");
    data.box = as_int32(*b, "initial_data.box");
    if (!(data.rate >= 0.0) || data.box < 0)
      fail(errc::invalid_argument, "config: preset needs rate >= 0 and box >= 0");
    return data;
  }
  require_keys(v, {"entries"}, "initial_data");
  const json* entries = find(v, "entries");
  if (!entries || !entries->is_array())
    fail(errc::invalid_argument, "config: initial_data.entries must be an array");
  for (const auto& e : *entries) {
    if (!e.is_object())
      fail(errc::invalid_argument, "config: data entry must be an object");
    require_keys(e, {"n", "re", "im"}, "initial_data entry");
    const json* n = find(e, "n");
    if (!n || !n->is_array())
      fail(errc::invalid_argument, "config: data entry needs an index array n");
    DataEntry de;
    for (const auto& c : *n) de.n.push_back(as_int32(c, "data index component"));
    if (const json* re = find(e, "re")) de.re = as_double(*re, "data entry re");
    if (const json* im = find(e, "im")) de.im = as_double(*im, "data entry im");
    data.entries.push_back(std::move(de));
  }
  return data;
}

CustomSymbolConfig parse_custom_symbol(const json& v) {
  if (!v.is_object())
    fail(errc::invalid_argument, "config: custom_symbol must be an object");
  require_keys(v, {"name", "odd", "even", "epsilon"}, "custom_symbol");
  CustomSymbolConfig cs;
  const json* name = find(v, "name");
  if (!name) fail(errc::invalid_argument, "config: custom_symbol needs a name");
  cs.name = as_string(*name, "custom_symbol.name");
  if (const json* odd = find(v, "odd"))
    cs.odd = as_double_array(*odd, "custom_symbol.odd");
  if (const json* even = find(v, "even"))
    cs.even = as_double_array(*even, "custom_symbol.even");
  if (const json* eps = find(v, "epsilon")) {
    const double e = as_double(*eps, "custom_symbol.epsilon");
    if (!(e > 0.0))
      fail(errc::invalid_argument, "config: custom_symbol.epsilon must be > 0");
    cs.epsilon = e;
  }
  return cs;
}

LiouvilleConfig parse_liouville(const json& v) {
  if (!v.is_object())
    fail(errc::invalid_argument, "config: liouville must be an object");
  require_keys(v, {"n_levels", "kappa", "sigma", "tightness_kappa"}, "liouville");
  LiouvilleConfig lc;
  lc.kappa = std::log(9.0) / 4.0;
  if (const json* n = find(v, "n_levels")) {
    lc.n_levels = as_int32(*n, "liouville.n_levels");
    if (lc.n_levels < 1)
      fail(errc::invalid_argument, "config: liouville.n_levels must be >= 1");
  }
  if (const json* kp = find(v, "kappa")) {
    lc.kappa = as_double(*kp, "liouville.kappa");
    if (!(lc.kappa > 0.0))
      fail(errc::invalid_argument, "config: liouville.kappa must be > 0");
  }
  if (const json* s = find(v, "sigma")) {
    lc.sigma = as_double_array(*s, "liouville.sigma");
    for (double x : lc.sigma)
      if (x < 0.0)
        fail(errc::invalid_argument, "config: liouville.sigma must be >= 0");
  }
  if (const json* t = find(v, "tightness_kappa")) {
    const double x = as_double(*t, "liouville.tightness_kappa");
    if (!(x > 0.0))
      fail(errc::invalid_argument, "config: liouville.tightness_kappa must be > 0");
    lc.tightness_kappa = x;
  }
  return lc;
}

void check_mode_complete(const RunConfig& cfg) {
  const std::string& m = cfg.mode;
  if (m.empty()) return;
  if (m != "solve" && m != "certify" && m != "diagnose-liouville" &&
      m != "compare-oracle")
    fail(errc::unknown_name, "config: unknown mode \"" + m + "\"");
  if (m == "diagnose-liouville") return;

  if (cfg.equation.empty())
    fail(errc::invalid_argument, "config: mode " + m + " needs an equation");
  if (cfg.omega.empty())
    fail(errc::invalid_argument, "config: mode " + m + " needs omega");
  if (!(cfg.k > 0.0) || !(cfg.kappa > 0.0))
    fail(errc::invalid_argument, "config: mode " + m + " needs k > 0, kappa > 0");
  if (!(cfg.R > 0.0))
    fail(errc::invalid_argument, "config: mode " + m + " needs R > 0");
  if (m == "solve" || m == "compare-oracle") {
    if (!cfg.initial_data)
      fail(errc::invalid_argument, "config: mode " + m + " needs initial_data");
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& mode) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object())
    fail(errc::invalid_argument, "config: top level must be a JSON object");
  require_keys(j,
               {"mode", "equation", "p", "nls_sign", "omega", "initial_data",
                "k", "kappa", "epsilon", "R", "N", "M", "T", "tol", "max_iter",
                "direction", "real_data", "custom_symbol", "oracle_refine",
                "prune_threshold", "gamma_floor", "t_cap", "output", "liouville"},
               "top level");

  RunConfig cfg;
  cfg.liouville.kappa = std::log(9.0) / 4.0;

  if (const json* v = find(j, "mode")) cfg.mode = as_string(*v, "mode");
  if (!mode.empty()) {
    if (!cfg.mode.empty() && cfg.mode != mode)
      fail(errc::invalid_argument, "config: mode \"" + cfg.mode +
                                       "\" conflicts with subcommand " + mode);
    cfg.mode = mode;
  }

  if (const json* v = find(j, "equation")) cfg.equation = as_string(*v, "equation");
  if (const json* v = find(j, "p")) {
    cfg.p = as_int32(*v, "p");
    if (cfg.p < 1) fail(errc::invalid_argument, "config: p must be >= 1");
  }
  if (const json* v = find(j, "nls_sign")) {
    cfg.nls_sign = as_int32(*v, "nls_sign");
    if (cfg.nls_sign != 1 && cfg.nls_sign != -1)
      fail(errc::invalid_argument, "config: nls_sign must be +1 or -1");
  }
  if (const json* v = find(j, "omega")) cfg.omega = as_double_array(*v, "omega");
  if (const json* v = find(j, "initial_data"))
    cfg.initial_data = parse_initial_data(*v);
  if (const json* v = find(j, "k")) {
    cfg.k = as_double(*v, "k");
    if (!(cfg.k > 0.0)) fail(errc::invalid_argument, "config: k must be > 0");
  }
  if (const json* v = find(j, "kappa")) {
    cfg.kappa = as_double(*v, "kappa");
    if (!(cfg.kappa > 0.0))
      fail(errc::invalid_argument, "config: kappa must be > 0");
  }
  if (const json* v = find(j, "epsilon")) {
    const double e = as_double(*v, "epsilon");
    if (!(e > 0.0)) fail(errc::invalid_argument, "config: epsilon must be > 0");
    cfg.epsilon = e;
  }
  if (const json* v = find(j, "R")) {
    cfg.R = as_double(*v, "R");
    if (cfg.R < 0.0) fail(errc::invalid_argument, "config: R must be >= 0");
  }
  if (const json* v = find(j, "N")) {
    cfg.N = as_int32(*v, "N");
    if (cfg.N < 0) fail(errc::invalid_argument, "config: N must be >= 0");
  }
  if (const json* v = find(j, "M")) {
    cfg.M = as_int32(*v, "M");
    if (cfg.M < 1) fail(errc::invalid_argument, "config: M must be >= 1");
  }
  if (const json* v = find(j, "T")) {
    const double t = as_double(*v, "T");
    if (!(t > 0.0)) fail(errc::invalid_argument, "config: T must be > 0");
    cfg.T_override = t;
  }
  if (const json* v = find(j, "tol")) {
    cfg.tol = as_double(*v, "tol");
    if (!(cfg.tol > 0.0)) fail(errc::invalid_argument, "config: tol must be > 0");
  }
  if (const json* v = find(j, "max_iter")) {
    cfg.max_iter = as_int32(*v, "max_iter");
    if (cfg.max_iter < 1)
      fail(errc::invalid_argument, "config: max_iter must be >= 1");
  }
  if (const json* v = find(j, "direction")) {
    cfg.direction = as_string(*v, "direction");
    direction_from_string(cfg.direction);  // validates
  }
  if (const json* v = find(j, "real_data")) cfg.real_data = as_bool(*v, "real_data");
  if (const json* v = find(j, "custom_symbol"))
    cfg.custom_symbol = parse_custom_symbol(*v);
  if (const json* v = find(j, "oracle_refine")) {
    cfg.oracle_refine = as_int32(*v, "oracle_refine");
    if (cfg.oracle_refine < 1)
      fail(errc::invalid_argument, "config: oracle_refine must be >= 1");
  }
  if (const json* v = find(j, "prune_threshold")) {
    cfg.prune_threshold = as_double(*v, "prune_threshold");
    if (cfg.prune_threshold < 0.0)
      fail(errc::invalid_argument, "config: prune_threshold must be >= 0");
  }
  if (const json* v = find(j, "gamma_floor")) {
    cfg.gamma_floor = as_double(*v, "gamma_floor");
    if (!(cfg.gamma_floor > 0.0))
      fail(errc::invalid_argument, "config: gamma_floor must be > 0");
  }
  if (const json* v = find(j, "t_cap")) {
    cfg.t_cap = as_double(*v, "t_cap");
    if (!(cfg.t_cap > 0.0))
      fail(errc::invalid_argument, "config: t_cap must be > 0");
  }
  if (const json* v = find(j, "output")) cfg.output = as_string(*v, "output");
  if (const json* v = find(j, "liouville")) cfg.liouville = parse_liouville(*v);

  check_mode_complete(cfg);
  return cfg;
}

RunConfig load_config_file(const std::string& path, const std::string& mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_failure, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(errc::io_failure, "cannot read config file: " + path);
  return parse_config(buf.str(), mode);
}

std::string resolved_config_json(const RunConfig& cfg, int indent) {
  json j;
  j["mode"] = cfg.mode;
  j["equation"] = cfg.equation;
  j["p"] = cfg.p;
  j["nls_sign"] = cfg.nls_sign;
  j["omega"] = cfg.omega;
  if (cfg.initial_data) {
    json d;
    if (cfg.initial_data->use_preset) {
      d["preset"] = "exp_decay";
      d["amplitude"] = cfg.initial_data->amplitude;
      d["rate"] = cfg.initial_data->rate;
      d["box"] = cfg.initial_data->box;
    } else {
      d["entries"] = json::array();
      for (const DataEntry& e : cfg.initial_data->entries)
        d["entries"].push_back({{"n", e.n}, {"re", e.re}, {"im", e.im}});
    }
    j["initial_data"] = d;
  } else {
    j["initial_data"] = nullptr;
  }
  j["k"] = cfg.k;
  j["kappa"] = cfg.kappa;
  j["epsilon"] = resolved_epsilon(cfg);
  j["R"] = cfg.R;
  j["N"] = cfg.N;
  j["M"] = cfg.M;
  if (cfg.T_override)
    j["T"] = *cfg.T_override;
  else
    j["T"] = nullptr;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["direction"] = cfg.direction;
  if (cfg.real_data)
    j["real_data"] = *cfg.real_data;
  else
    j["real_data"] = nullptr;
  if (cfg.custom_symbol) {
    json cs;
    cs["name"] = cfg.custom_symbol->name;
    cs["odd"] = cfg.custom_symbol->odd;
    cs["even"] = cfg.custom_symbol->even;
    if (cfg.custom_symbol->epsilon)
      cs["epsilon"] = *cfg.custom_symbol->epsilon;
    j["custom_symbol"] = cs;
  } else {
    j["custom_symbol"] = nullptr;
  }
  j["oracle_refine"] = cfg.oracle_refine;
  j["prune_threshold"] = cfg.prune_threshold;
  j["gamma_floor"] = cfg.gamma_floor;
  j["t_cap"] = cfg.t_cap;
  j["output"] = cfg.output;
  j["liouville"] = {{"n_levels", cfg.liouville.n_levels},
                    {"kappa", cfg.liouville.kappa},
                    {"sigma", cfg.liouville.sigma}};
  if (cfg.liouville.tightness_kappa)
    j["liouville"]["tightness_kappa"] = *cfg.liouville.tightness_kappa;
  return j.dump(indent);
}

Direction direction_from_string(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  if (s == "both") return Direction::both;
  fail(errc::unknown_name, "config: direction must be forward, backward, or both");
}

double resolved_epsilon(const RunConfig& cfg) {
  return cfg.epsilon ? *cfg.epsilon : 0.5 * cfg.k;
}

ModelSpec config_model(const RunConfig& cfg) {
  const double eps = resolved_epsilon(cfg);
  ModelSpec model = make_model(cfg.equation, cfg.p, cfg.nls_sign, eps);
  if (cfg.custom_symbol) {
    const CustomSymbolConfig& cs = *cfg.custom_symbol;
    model.symbol = SymbolSpec::custom_polynomial(
        cs.name, cs.odd, cs.even, cs.epsilon ? *cs.epsilon : eps);
  }
  return model;
}

CoefficientField config_initial_data(const RunConfig& cfg) {
  if (!cfg.initial_data)
    fail(errc::invalid_argument, "config: initial_data is required here");
  FrequencyVector omega(cfg.omega);
  CoeffMap coeffs;
  const InitialDataConfig& d = *cfg.initial_data;
  if (d.use_preset) {
    for (const MultiIndex& n : enumerate_box(d.box, omega.nu())) {
      const double v =
          d.amplitude *
          std::exp(-d.rate * static_cast<double>(index_norm(n)));
      coeffs.emplace(n, Complex(v, 0.0));
    }
  } else {
    for (const DataEntry& e : d.entries) {
      if (e.n.size() != static_cast<size_t>(omega.nu()))
        fail(errc::dimension_mismatch,
             "config: data index dimension does not match omega");
      if (!coeffs.emplace(e.n, Complex(e.re, e.im)).second)
        fail(errc::invalid_argument, "config: duplicate data index");
    }
  }
  CoefficientField u(omega, std::move(coeffs), false);
  const bool symmetric = realness_defect(u) <= 1e-12;
  bool flag = symmetric;
  if (cfg.real_data) {
    if (*cfg.real_data && !symmetric)
      fail(errc::invalid_argument,
           "config: real_data = true but the coefficients are not "
           "conjugate-symmetric");
    flag = *cfg.real_data;
  }
  return u.with_real_flag(flag);
}

SolverParams config_params(const RunConfig& cfg, const Certificate& cert) {
  SolverParams params;
  params.k = cfg.k;
  params.kappa = cfg.kappa;
  params.gamma = cert.gamma;
  params.T = cfg.T_override ? *cfg.T_override : cert.T;
  params.R = cert.R;
  params.N = cfg.N;
  params.M = cfg.M;
  params.tol = cfg.tol;
  params.max_iter = cfg.max_iter;
  params.direction = direction_from_string(cfg.direction);
  params.prune_threshold = cfg.prune_threshold;
  return params;
}

}  // namespace qpwave
