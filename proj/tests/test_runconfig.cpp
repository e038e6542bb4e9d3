#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "qpwave/run.hpp"
#include "qpwave/runconfig.hpp"
#include "support.hpp"

using namespace qpwave;
namespace fs = std::filesystem;

namespace {

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  throw std::logic_error("expected a structured error");
}

const char* kSolveConfig = R"({
  "mode": "solve",
  "equation": "gkdv",
  "p": 1,
  "omega": [1.0],
  "initial_data": {"entries": [
    {"n": [1], "re": 0.1, "im": 0.0},
    {"n": [-1], "re": 0.1, "im": 0.0}
  ]},
  "k": 1.0,
  "kappa": 0.5,
  "epsilon": 0.25,
  "R": 0.6,
  "N": 8,
  "M": 8,
  "tol": 1e-10,
  "max_iter": 25
})";

// Scratch directory per test run; contents are left for postmortems.
fs::path scratch_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() /
           ("qpwave-tests-" + std::to_string(::getpid())) / tag;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

// Runs the installed CLI binary (path in QPWAVE_CLI) and returns its exit code.
int run_cli(const std::string& args) {
  const char* cli = std::getenv("QPWAVE_CLI");
  REQUIRE(cli != nullptr);
  std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults are filled in") {
  auto cfg = parse_config("{}");
  CHECK(cfg.p == 1);
  CHECK(cfg.nls_sign == 1);
  CHECK(cfg.N == 8);
  CHECK(cfg.M == 32);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.max_iter == 25);
  CHECK(cfg.direction == "both");
  CHECK(cfg.oracle_refine == 8);
  CHECK(cfg.prune_threshold == 0.0);
  CHECK(cfg.gamma_floor == 1.0);
  CHECK(cfg.t_cap == 1.0);
  CHECK_FALSE(cfg.epsilon.has_value());
  CHECK_FALSE(cfg.T_override.has_value());
  CHECK(cfg.liouville.n_levels == 2);
  CHECK(cfg.liouville.kappa == std::log(9.0) / 4.0);
  CHECK(cfg.liouville.sigma == std::vector<double>{0.0, 0.0});
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), error);
  CHECK_THROWS_AS(parse_config(R"({"initial_data": {"entries": [], "oops": 1}})"),
                  error);
  CHECK_THROWS_AS(
      parse_config(R"({"initial_data": {"entries": [{"n": [0], "typo": 1}]}})"),
      error);
  CHECK_THROWS_AS(
      parse_config(R"({"custom_symbol": {"name": "m", "odd": [1], "deg": 3}})"),
      error);
  CHECK_THROWS_AS(parse_config(R"({"liouville": {"levels": 2}})"), error);
}

TEST_CASE("typed and range validation") {
  CHECK_THROWS_AS(parse_config(R"({"k": "one"})"), error);
  CHECK_THROWS_AS(parse_config(R"({"p": 0})"), error);
  CHECK_THROWS_AS(parse_config(R"({"nls_sign": 2})"), error);
  CHECK_THROWS_AS(parse_config(R"({"M": 0})"), error);
  CHECK_THROWS_AS(parse_config(R"({"direction": "sideways"})"), error);
  CHECK_THROWS_AS(parse_config(R"({"prune_threshold": -1e-9})"), error);
  CHECK_THROWS_AS(parse_config(R"({"T": 0})"), error);
  CHECK_THROWS_AS(parse_config(R"({"N": 2.5})"), error);
  CHECK_THROWS_AS(parse_config("[1, 2]"), error);
  CHECK_THROWS_AS(parse_config("not json at all"), error);
}

TEST_CASE("per-mode completeness") {
  // Solve requires equation, omega, data, and the analytic parameters.
  CHECK_THROWS_AS(parse_config(R"({"mode": "solve"})"), error);
  CHECK_THROWS_AS(
      parse_config(R"({"mode": "solve", "equation": "gkdv", "omega": [1.0],
                       "k": 1.0, "kappa": 0.5, "R": 0.6})"),
      error);  // initial_data missing
  CHECK_NOTHROW(parse_config(kSolveConfig));
  // Certify does not need data.
  CHECK_NOTHROW(
      parse_config(R"({"mode": "certify", "equation": "gkdv", "omega": [1.0],
                       "k": 1.0, "kappa": 0.5, "R": 0.6})"));
  // Diagnose needs nothing beyond its own block.
  CHECK_NOTHROW(parse_config(R"({"mode": "diagnose-liouville"})"));
  CHECK_THROWS_AS(parse_config(R"({"mode": "simulate"})"), error);
}

TEST_CASE("mode conflicts between config and subcommand") {
  CHECK_THROWS_AS(parse_config(R"({"mode": "solve"})", "certify"), error);
  // Subcommand fills in an absent mode.
  auto cfg = parse_config("{}", "diagnose-liouville");
  CHECK(cfg.mode == "diagnose-liouville");
}

TEST_CASE("preset initial data") {
  auto cfg = parse_config(R"({
    "omega": [1.0, 0.5],
    "initial_data": {"preset": "exp_decay", "amplitude": 0.1, "rate": 0.75, "box": 2}
  })");
  auto u = config_initial_data(cfg);
  CHECK(u.support_size() == 13);  // l1 ball of radius 2 in Z^2
  CHECK(u.at({0, 0}) == Complex(0.1, 0.0));
  CHECK(u.at({1, 1}).real() == doctest::Approx(0.1 * std::exp(-1.5)).epsilon(1e-15));
  CHECK(u.real_flagged());  // symmetric by construction, auto-detected

  CHECK_THROWS_AS(parse_config(R"({"initial_data": {"preset": "gaussian",
    "amplitude": 0.1, "rate": 1.0, "box": 1}})"),
                  error);
}

TEST_CASE("explicit initial data entries") {
  auto cfg = parse_config(R"({
    "omega": [1.0],
    "initial_data": {"entries": [{"n": [1], "re": 0.0, "im": 0.5}]}
  })");
  auto u = config_initial_data(cfg);
  CHECK(u.at({1}) == Complex(0.0, 0.5));
  CHECK_FALSE(u.real_flagged());  // not conjugate-symmetric

  // Duplicate indices are rejected.
  auto dup = parse_config(R"({
    "omega": [1.0],
    "initial_data": {"entries": [{"n": [1], "re": 1.0}, {"n": [1], "re": 2.0}]}
  })");
  CHECK(code_of([&] { config_initial_data(dup); }) == errc::invalid_argument);

  // Index dimension must match omega.
  auto wrong = parse_config(R"({
    "omega": [1.0, 2.0],
    "initial_data": {"entries": [{"n": [1], "re": 1.0}]}
  })");
  CHECK(code_of([&] { config_initial_data(wrong); }) == errc::dimension_mismatch);
}

TEST_CASE("realness override") {
  auto asym = parse_config(R"({
    "omega": [1.0],
    "initial_data": {"entries": [{"n": [1], "re": 0.0, "im": 0.5}]},
    "real_data": true
  })");
  CHECK_THROWS_AS(config_initial_data(asym), error);

  auto forced_off = parse_config(R"({
    "omega": [1.0],
    "initial_data": {"entries": [{"n": [1], "re": 0.5}, {"n": [-1], "re": 0.5}]},
    "real_data": false
  })");
  CHECK_FALSE(config_initial_data(forced_off).real_flagged());
}

TEST_CASE("model and epsilon resolution") {
  auto cfg = parse_config(R"({"equation": "gkdv", "k": 1.0})");
  auto model = config_model(cfg);
  CHECK(model.symbol.name() == "kdv");
  CHECK(model.symbol.epsilon() == 0.5);  // defaults to k/2
  CHECK(resolved_epsilon(cfg) == 0.5);

  auto custom = parse_config(R"({
    "equation": "gkdv", "k": 1.0,
    "custom_symbol": {"name": "cubic-ish", "odd": [0.5, -0.25]}
  })");
  auto m2 = config_model(custom);
  CHECK(m2.symbol.name() == "cubic-ish");
  CHECK(m2.symbol.claims_symmetry());
  CHECK(m2.symbol.eval(2.0) == Complex(0.0, 0.5 * 2.0 - 0.25 * 8.0));
  // Nonlinearity still comes from the equation.
  CHECK(m2.nonlinearity.kind == Nonlinearity::Kind::power_deriv);
}

TEST_CASE("params resolution honors the horizon override") {
  auto cfg = parse_config(kSolveConfig);
  Certificate cert;
  cert.gamma = 10.0;
  cert.T = 0.025;
  cert.R = 0.6;
  auto params = config_params(cfg, cert);
  CHECK(params.T == 0.025);
  CHECK(params.gamma == 10.0);
  CHECK(params.M == 8);
  CHECK(params.direction == Direction::both);

  auto over = parse_config(R"({"T": 0.004})");
  auto p2 = config_params(over, cert);
  CHECK(p2.T == 0.004);
}

TEST_CASE("resolved config echo is complete") {
  auto cfg = parse_config(kSolveConfig);
  auto j = nlohmann::json::parse(resolved_config_json(cfg, 2));
  CHECK(j["mode"] == "solve");
  CHECK(j["equation"] == "gkdv");
  CHECK(j["epsilon"] == 0.25);
  CHECK(j["M"] == 8);
  CHECK(j["T"].is_null());
  CHECK(j["direction"] == "both");
  CHECK(j["liouville"]["n_levels"] == 2);
  CHECK(j["initial_data"]["entries"].size() == 2);
}

TEST_CASE("missing config file is an io failure") {
  CHECK(code_of([] { load_config_file("/nonexistent/config.json"); }) ==
        errc::io_failure);
}

TEST_CASE("solve runs byte-reproducibly in serial mode") {
  auto cfg = parse_config(kSolveConfig);
  auto dir_a = scratch_dir("serial-a");
  auto dir_b = scratch_dir("serial-b");
  RunOptions opts;
  opts.serial = true;
  opts.output_dir = dir_a.string();
  run_solve(cfg, opts);
  opts.output_dir = dir_b.string();
  run_solve(cfg, opts);
  CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));
  CHECK(slurp(dir_a / "trajectory.csv") == slurp(dir_b / "trajectory.csv"));

  auto manifest = nlohmann::json::parse(slurp(dir_a / "manifest.json"));
  CHECK(manifest["wall_clock_seconds"] == 0.0);
  CHECK(manifest["final_defect"].get<double>() <= 1e-10);
  CHECK(manifest["realness"]["data_flag"] == true);
  CHECK(manifest["certificate"]["q"].get<double>() <= 0.5);

  // CSV header matches the one-frequency layout.
  auto csv = slurp(dir_a / "trajectory.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "t,n1,re,im");
}

TEST_CASE("cli end to end: certify, solve, diagnose, compare") {
  auto dir = scratch_dir("cli");
  spit(dir / "config.json", kSolveConfig);

  // certify (mode comes from the subcommand; config carries mode=solve, so
  // write a mode-free variant).
  auto base = nlohmann::json::parse(std::string(kSolveConfig));
  base.erase("mode");
  spit(dir / "certify.json", base.dump(2));
  CHECK(run_cli("certify --config " + (dir / "certify.json").string() +
                " --output " + (dir / "cert").string()) == 0);
  auto cert = nlohmann::json::parse(slurp(dir / "cert" / "certificate.json"));
  CHECK(cert["certificate"]["q"].get<double>() <= 0.5);
  CHECK(cert["certificate"]["gamma"].get<double>() > 0.0);
  CHECK(cert["growth_check"]["sup_value"].get<double>() > 0.0);

  // solve
  CHECK(run_cli("solve --config " + (dir / "config.json").string() +
                " --output " + (dir / "solve").string() + " --serial") == 0);
  auto manifest = nlohmann::json::parse(slurp(dir / "solve" / "manifest.json"));
  CHECK(manifest["serial"] == true);
  CHECK(manifest["wall_clock_seconds"] == 0.0);
  CHECK(manifest["residual_self"].get<double>() <= 1e-10);
  CHECK(fs::exists(dir / "solve" / "trajectory.csv"));

  // diagnose-liouville
  spit(dir / "diag.json", R"({"liouville": {"n_levels": 2}})");
  CHECK(run_cli("diagnose-liouville --config " + (dir / "diag.json").string() +
                " --output " + (dir / "diag").string()) == 0);
  auto chain = nlohmann::json::parse(slurp(dir / "diag" / "chain_report.json"));
  CHECK(chain["chain"]["all_pass"] == true);
  CHECK(chain["witnesses"].size() == 2);

  // compare-oracle
  auto cmp = nlohmann::json::parse(std::string(kSolveConfig));
  cmp["mode"] = "compare-oracle";
  cmp["oracle_refine"] = 4;
  spit(dir / "compare.json", cmp.dump(2));
  CHECK(run_cli("compare-oracle --config " + (dir / "compare.json").string() +
                " --output " + (dir / "cmp").string() + " --serial") == 0);
  auto cm = nlohmann::json::parse(slurp(dir / "cmp" / "manifest.json"));
  CHECK(cm["max_deviation"].get<double>() <= 1e-6);
  CHECK(cm["oracle"]["method"] == "expRK4");
  CHECK(fs::exists(dir / "cmp" / "oracle.csv"));
}

TEST_CASE("cli exit codes") {
  auto dir = scratch_dir("cli-codes");

  // 2: validation failure (unknown key).
  spit(dir / "bad.json", R"({"definitely_not_a_key": 1})");
  CHECK(run_cli("solve --config " + (dir / "bad.json").string()) == 2);

  // 2: mode conflict between config and subcommand.
  spit(dir / "conflict.json", kSolveConfig);
  CHECK(run_cli("certify --config " + (dir / "conflict.json").string()) == 2);

  // 3: non-convergence when the iteration budget is too small.
  auto few = nlohmann::json::parse(std::string(kSolveConfig));
  few["max_iter"] = 1;
  spit(dir / "few.json", few.dump(2));
  CHECK(run_cli("solve --config " + (dir / "few.json").string() + " --output " +
                (dir / "few-out").string()) == 3);

  // 4: missing config file.
  CHECK(run_cli("solve --config " + (dir / "no-such-file.json").string()) == 4);
}
