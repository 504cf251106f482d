#include "spine/cli/commands.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace spine;
using namespace spine::cli;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_number(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || std::memcmp(&a, &b, sizeof a) == 0;
}

bool same_rows(const Table& a, const Table& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (!same_number(x.param, y.param) || !same_number(x.u_mc, y.u_mc) ||
        !same_number(x.u_mc_stderr, y.u_mc_stderr) || !same_number(x.u_asym, y.u_asym) ||
        !same_number(x.rel_err, y.rel_err) || x.valid != y.valid || !same_number(x.dt, y.dt) ||
        x.note != y.note) {
      return false;
    }
  }
  return true;
}

RunConfig small_run() {
  RunConfig cfg;
  cfg.eps = 0.3;
  cfg.neck_len = 0.6;
  cfg.walk.particles = 40;
  cfg.walk.control = montecarlo::StepControl::adaptive;
  cfg.walk.seed = 4242;
  return cfg;
}

}  // namespace

TEST_CASE("config: sections, comments and values") {
  const RunConfig cfg = parse_config(R"(
# spine run
[geometry]
head = ellipsoid
a = 1.5
b = 1.0
c = 0.8
eps = 0.07
neck_length = 2

[walk]
particles = 1e4
seed = 7
step_control = adaptive
; trailing comment line
[run]
start = -0.5,0,0
format = json
)");
  CHECK(std::holds_alternative<Ellipsoid>(cfg.head));
  CHECK(std::get<Ellipsoid>(cfg.head).a == 1.5);
  CHECK(cfg.eps == 0.07);
  CHECK(cfg.neck_len == 2.0);
  CHECK(cfg.walk.particles == 10000);
  CHECK(cfg.walk.seed == 7);
  CHECK(cfg.walk.control == montecarlo::StepControl::adaptive);
  CHECK(std::get<Vec3>(cfg.start) == Vec3(-0.5, 0.0, 0.0));
  CHECK(cfg.output_format == OutputFormat::json);
}

TEST_CASE("config: unknown keys, sections and bad numbers are rejected") {
  CHECK_THROWS_AS(parse_config("[geometry]\nradius_typo = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\nD = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[geometry]\neps = 0.1x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[walk]\nparticles = -5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("eps = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_start("1,2"), ConfigError);
}

TEST_CASE("config: canonical text round trips and the hash tracks settings") {
  RunConfig cfg = small_run();
  cfg.head = Ellipsoid{1.1, 0.9, 0.7};
  const RunConfig back = parse_config(canonical_text(cfg));
  CHECK(canonical_text(back) == canonical_text(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  cfg.walk.seed += 1;
  CHECK(config_hash(back) != config_hash(cfg));
}

TEST_CASE("vary: ranges and lists") {
  const auto down = parse_vary("eps=0.1:0.01:-0.01");
  CHECK(down.axis == montecarlo::SweepAxis::eps);
  REQUIRE(down.values.size() == 10);
  CHECK(down.values.front() == 0.1);
  CHECK(down.values.back() == 0.01);
  CHECK(down.values[5] == 0.05);

  const auto up = parse_vary("L=1:10:1");
  CHECK(up.axis == montecarlo::SweepAxis::neck_len);
  CHECK(up.values.size() == 10);

  const auto list = parse_vary("eps=0.1,0.08,0.05");
  CHECK(list.values == std::vector<double>{0.1, 0.08, 0.05});
  CHECK(parse_vary("eps=0.05").values.size() == 1);

  CHECK_THROWS_AS(parse_vary("eps="), ConfigError);
  CHECK_THROWS_AS(parse_vary("eps=0.1:0.2:-0.01"), ConfigError);
  CHECK_THROWS_AS(parse_vary("eps=0.1:0.01:0"), ConfigError);
  CHECK_THROWS_AS(parse_vary("radius=1,2"), ConfigError);
}

TEST_CASE("fit: exact expansion values recover the coefficients") {
  // a fixed evaluation point keeps the far-field term independent of eps
  RunConfig cfg;
  cfg.start = Vec3(-1.0, 0.0, 0.0);
  const Table t = cmd_table(cfg, parse_vary("eps=0.1:0.01:-0.01"), false);
  const FitResult f = cmd_fit(t, FitColumn::u_asym);
  CHECK(std::abs(f.a2 - 4.0 / 3.0) < 1e-6);
  CHECK(std::abs(f.a1 - 32.0 / (9.0 * kPi)) < 1e-6);
  CHECK(f.residual_norm < 1e-6);
}

TEST_CASE("fit: reference finite element column") {
  const std::vector<double> eps{0.10, 0.09, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03, 0.02, 0.01};
  const std::vector<double> u{145.01, 177.53, 222.81,  288.57,  389.47,
                              556.12, 861.64, 1518.90, 3389.10, 13443.00};
  const FitResult f = fit_inverse_quadratic(eps, u);
  CHECK(std::abs(f.a2 / (4.0 / 3.0) - 1.0) < 0.02);
  CHECK(std::abs(f.a1 / (32.0 / (9.0 * kPi)) - 1.0) < 0.15);
}

TEST_CASE("fit: degenerate inputs") {
  // constant data has a zero quadratic and linear part
  const FitResult c = fit_inverse_quadratic({0.1, 0.05, 0.02, 0.01}, {3.0, 3.0, 3.0, 3.0});
  CHECK(std::abs(c.a2) < 1e-12);
  CHECK(std::abs(c.a1) < 1e-9);
  CHECK(c.a0 == doctest::Approx(3.0));
  CHECK_THROWS_AS(fit_inverse_quadratic({0.1, 0.1, 0.05}, {1.0, 2.0, 3.0}), ConfigError);
  CHECK_THROWS_AS(fit_inverse_quadratic({0.1, 0.05}, {1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(fit_inverse_quadratic({0.1, 0.05, 0.02}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("table: expansion column for both sweeps") {
  RunConfig cfg;
  const Table eps_table = cmd_table(cfg, parse_vary("eps=0.1:0.01:-0.01"), false);
  const std::vector<double> eps_expected{144.48, 177.01, 222.31, 288.11, 389.07,
                                         555.80, 861.46, 1519.04, 3389.75, 13446.34};
  REQUIRE(eps_table.rows.size() == eps_expected.size());
  for (std::size_t i = 0; i < eps_expected.size(); ++i) {
    CHECK(std::round(eps_table.rows[i].u_asym * 100.0) / 100.0 ==
          doctest::Approx(eps_expected[i]).epsilon(1e-12));
  }
  cfg.eps = 0.05;
  const Table len_table = cmd_table(cfg, parse_vary("L=1:10:1"), false);
  REQUIRE(len_table.rows.size() == 10);
  CHECK(std::round(len_table.rows[1].u_asym * 100.0) / 100.0 == doctest::Approx(1090.63));
  CHECK(std::round(len_table.rows[9].u_asym * 100.0) / 100.0 == doctest::Approx(5405.30));
}

TEST_CASE("table: csv and json round trips keep every field") {
  const RunConfig cfg = small_run();
  const Table t = cmd_table(cfg, parse_vary("eps=0.3,0.25"), true);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].valid);

  const Table from_csv = parse_csv(to_csv(t));
  CHECK(same_rows(t, from_csv));
  CHECK(from_csv.provenance == t.provenance);

  const Table from_json = parse_json(to_json(t));
  CHECK(same_rows(t, from_json));
  CHECK(from_json.provenance == t.provenance);

  // asymptotic-only tables carry NaN, written as nan / null
  const Table asym = cmd_table(cfg, parse_vary("eps=0.3"), false);
  CHECK(same_rows(asym, parse_csv(to_csv(asym))));
  CHECK(same_rows(asym, parse_json(to_json(asym))));
}

TEST_CASE("table: provenance header reproduces the run bit for bit") {
  const RunConfig cfg = small_run();
  const VarySpec vary = parse_vary("eps=0.3,0.25");
  const Table first = parse_csv(to_csv(cmd_table(cfg, vary, true)));
  const std::string text = to_csv(first);
  CHECK(text.find("# seed=4242") != std::string::npos);
  CHECK(text.find("# dt=") != std::string::npos);
  CHECK(text.find("# particles=40") != std::string::npos);
  CHECK(text.find("# config_hash=" + config_hash(cfg)) != std::string::npos);

  const RunConfig rebuilt = config_from_provenance(first.provenance);
  CHECK(config_hash(rebuilt) == first.provenance.config_hash);
  const Table second = cmd_table(rebuilt, vary, true);
  CHECK(same_rows(first, second));
}

TEST_CASE("fit input accepts a plain eps,u table") {
  const Table t = parse_csv("eps,u\n0.1,145.01\n0.05,556.12\n0.02,3389.10\n0.01,13443.00\n");
  REQUIRE(t.rows.size() == 4);
  const FitResult f = cmd_fit(t, FitColumn::u_mc);
  CHECK(f.a2 == doctest::Approx(4.0 / 3.0).epsilon(0.02));
}

TEST_CASE("constants report") {
  const auto j = cmd_constants({128, 101});
  CHECK(j.at("M_abs_error").get<double>() < 3e-3);
  CHECK(j.at("disk_integral_total_abs_error").get<double>() < 1e-12);
  CHECK(j.at("single_layer_bound").at("within_bound").get<bool>());
}

TEST_CASE("asymptotic report") {
  RunConfig cfg;
  const auto j = cmd_asymptotic(cfg, std::nullopt, asymptotics::CenterDistance::unit);
  CHECK(std::round(j.at("u_eps").get<double>() * 100.0) / 100.0 == doctest::Approx(144.48));
  CHECK(j.contains("warning") == false);
  cfg.eps = 0.2;
  CHECK(cmd_asymptotic(cfg, std::nullopt, asymptotics::CenterDistance::unit).contains("warning"));
  CHECK_THROWS_AS(cmd_asymptotic(cfg, Vec3::Zero(), asymptotics::CenterDistance::unit),
                  asymptotics::SingularityError);
}
