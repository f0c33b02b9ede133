#include <doctest.h>

#include <cmath>
#include <sstream>

#include "twinbeam/config.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/sweep.hpp"

using namespace twinbeam;

namespace {

const char* kSample = R"(# sample configuration
[crystal]
poling_period_um = 27.91
length_mm = 2.0
temperature_k = 400.0

[pump]
center_wavelength_um = 1.026
tau_fwhm_fs = 260
gdd_fs2 = 1.5e4

[grid]
n_points = 128
span_lobes = 2.5

[sweep]
variable = gdd
lo = -20000
hi = 20000
points = 5

[run]
gain = 8
seed = 42
)";

RunConfig sample() {
  std::istringstream is(kSample);
  return parse_config(is, "<test>");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses sections, keys and values") {
  const RunConfig cfg = sample();
  CHECK(cfg.crystal.temperature_k == 400.0);
  CHECK(cfg.pump.gdd_fs2 == 15000.0);
  CHECK(cfg.grid.n_points == 128);
  CHECK(cfg.grid.span_lobes == 2.5);
  CHECK(cfg.sweep.points == 5);
  CHECK(cfg.gain == 8.0);
  CHECK(cfg.seed == 42);
}

TEST_CASE("defaults survive a sparse file") {
  std::istringstream is("[pump]\ngdd_fs2 = 100\n");
  const RunConfig cfg = parse_config(is, "<test>");
  CHECK(cfg.crystal.poling_period_um == 27.91);
  CHECK(cfg.pump.tau_fwhm_fs == 260.0);
  CHECK(cfg.pump.gdd_fs2 == 100.0);
  CHECK(cfg.crystal.sellmeier.a1 == 5.756);
}

TEST_CASE("unknown keys and sections are config errors") {
  std::istringstream bad_key("[pump]\nwavelength = 1.0\n");
  CHECK_THROWS_AS(parse_config(bad_key, "<test>"), ConfigError);
  std::istringstream bad_section("[laser]\npower = 1\n");
  CHECK_THROWS_AS(parse_config(bad_section, "<test>"), ConfigError);
  std::istringstream bad_value("[pump]\ntau_fwhm_fs = fast\n");
  CHECK_THROWS_AS(parse_config(bad_value, "<test>"), ConfigError);
  std::istringstream orphan("tau_fwhm_fs = 100\n");
  CHECK_THROWS_AS(parse_config(orphan, "<test>"), ConfigError);
}

TEST_CASE("validation rejects inconsistent configs") {
  std::istringstream is("[sweep]\nlo = 10\nhi = -10\n");
  CHECK_THROWS_AS(parse_config(is, "<test>"), ConfigError);
  std::istringstream bad_grid("[grid]\nn_points = 16\n");
  CHECK_THROWS_AS(parse_config(bad_grid, "<test>"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  const RunConfig a = sample();
  const RunConfig b = sample();
  CHECK(config_hash(a) == config_hash(b));
  RunConfig c = a;
  c.pump.gdd_fs2 += 1.0;
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("gdd sweep rows are bit-identical across worker counts") {
  RunConfig cfg = sample();
  cfg.sweep.points = 7;
  const auto rows1 = run_gdd_sweep(cfg, 1);
  const auto rows4 = run_gdd_sweep(cfg, 4);
  std::ostringstream os1, os4;
  write_gdd_sweep_csv(rows1, cfg, os1);
  write_gdd_sweep_csv(rows4, cfg, os4);
  CHECK(os1.str() == os4.str());
  CHECK(rows1.size() == 7);
}

TEST_CASE("gdd sweep records per-point failures and continues") {
  RunConfig cfg = sample();
  cfg.gain = 0.0;  // populations are undefined at zero gain
  const auto rows = run_gdd_sweep(cfg, 2);
  CHECK(rows.size() == 5);
  for (const auto& row : rows) {
    CHECK(!row.error.empty());
    CHECK(std::isnan(row.k_hg));
    CHECK(!std::isnan(row.gdd_fs2));
    // K_LG is computed before the failing step; tau as well
    CHECK(row.tau_pump_fs > 0.0);
  }
}

TEST_CASE("gdd sweep columns carry the stretched duration and entropies") {
  RunConfig cfg = sample();
  cfg.sweep.lo = 0.0;
  cfg.sweep.hi = 40000.0;
  cfg.sweep.points = 3;
  const auto rows = run_gdd_sweep(cfg, 2);
  CHECK(rows[0].tau_pump_fs == doctest::Approx(260.0));
  CHECK(rows[0].k_lg > 1.0);
  CHECK(rows[0].k_hg >= 1.0);
  CHECK(rows[0].s_mod >= 0.0);
  CHECK(rows[0].s_occ > 0.0);
  CHECK(rows[0].s_total ==
        doctest::Approx(rows[0].s_occ + rows[0].s_mod).epsilon(1e-12));
  CHECK(rows[2].k_lg > rows[0].k_lg);  // chirp adds modes
}

TEST_CASE("power sweep follows sinh^2(a sqrt(N_P))") {
  RunConfig cfg = sample();
  cfg.sweep.variable = SweepSpec::Variable::PumpPower;
  cfg.sweep.lo = 0.0;
  cfg.sweep.hi = 4e12;
  cfg.sweep.points = 3;
  cfg.brightness_a = 3.8e-6;
  const auto rows = run_power_sweep(cfg);
  CHECK(rows[0].n_signal == 0.0);
  CHECK(rows[2].gain == doctest::Approx(7.6).epsilon(1e-12));
  const double sh = std::sinh(7.6);
  CHECK(rows[2].n_signal == doctest::Approx(sh * sh).epsilon(1e-12));
  // ~1e6 signal photons at G = 7.6
  CHECK(rows[2].n_signal / 1e6 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("entropy offset fit recovers a synthetic shift") {
  std::vector<double> gdd, smod;
  for (int i = 0; i <= 40; ++i) {
    const double g = -40000.0 + 2000.0 * i;
    gdd.push_back(g);
    smod.push_back(0.3 * (1.0 - std::exp(-g * g / 2e8)));
  }
  std::vector<double> data_g(gdd.begin() + 5, gdd.end() - 5);
  std::vector<double> data_s;
  for (const double g : data_g)
    data_s.push_back(0.3 * (1.0 - std::exp(-g * g / 2e8)) + 0.03);

  const double offset = fit_min_entropy_offset(gdd, smod, data_g, data_s);
  CHECK(offset == doctest::Approx(0.03).epsilon(1e-5));

  // identical data: zero offset
  const double zero = fit_min_entropy_offset(gdd, smod, gdd, smod);
  CHECK(std::abs(zero) < 1e-6);
}

TEST_CASE("entropy offset is clamped to keep the curve in [0, 1]") {
  std::vector<double> gdd{0.0, 1.0, 2.0};
  std::vector<double> smod{0.1, 0.2, 0.3};
  std::vector<double> data_s{1.5, 1.6, 1.7};  // would push far above 1
  const double offset = fit_min_entropy_offset(gdd, smod, gdd, data_s);
  CHECK(offset == doctest::Approx(0.7).epsilon(1e-9));  // 1 - max(model)
}

TEST_CASE("entropy offset with no overlap is an error") {
  std::vector<double> gdd{0.0, 1.0};
  std::vector<double> smod{0.1, 0.2};
  std::vector<double> data_g{5.0, 6.0};
  std::vector<double> data_s{0.3, 0.4};
  CHECK_THROWS_AS(fit_min_entropy_offset(gdd, smod, data_g, data_s),
                  NumericalError);
}

}  // TEST_SUITE
