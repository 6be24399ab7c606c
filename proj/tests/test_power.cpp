#include <doctest.h>

#include <cmath>

#include "itsa/errors.hpp"
#include "itsa/power.hpp"

using itsa::ErrorModel;
using itsa::PowerGrid;
using itsa::RngSpec;
using itsa::SimConfig;

namespace {

SimConfig small_config() {
  SimConfig config;
  config.replications = 100;
  config.bootstrap_B = 100;
  config.effect_sizes = {0.0, 0.6};
  config.seed = 2718;
  return config;
}

}  // namespace

TEST_CASE("simulate_series: deterministic part is the exact line 4 + 4t") {
  SimConfig config = small_config();
  const auto base = itsa::simulate_series(config, 0.0, RngSpec{5, 1});
  const auto shifted = itsa::simulate_series(config, 2.0, RngSpec{5, 1});
  REQUIRE(base.size() == 16);

  // Replay the same stream to strip the noise off the generated values.
  itsa::RandomStream replay(RngSpec{5, 1});
  for (int i = 0; i < 16; ++i) {
    const double t = i + 1;
    const double eps = replay.normal();
    CHECK(base.values[i] - eps == doctest::Approx(4.0 + 4.0 * t).epsilon(1e-12));
    const double jump = t >= 9.0 ? 2.0 * (t - 8.0) : 0.0;
    // Identical stream, identical noise: the difference is the effect term.
    CHECK(shifted.values[i] - base.values[i] == doctest::Approx(jump).epsilon(1e-12));
    CHECK(base.times[i] == t);
  }
}

TEST_CASE("simulate_series: slope jumps by the effect at t = 9 with no level jump") {
  // With the centered interaction the deterministic part is continuous in
  // t at the intervention: 4 + 4t + effect*(t - 8) equals 4 + 4t at t = 8.
  SimConfig config = small_config();
  const auto a = itsa::simulate_series(config, 3.0, RngSpec{9, 2});
  const auto b = itsa::simulate_series(config, 0.0, RngSpec{9, 2});
  CHECK(a.values[8] - b.values[8] == doctest::Approx(3.0).epsilon(1e-12));   // t = 9
  CHECK(a.values[15] - b.values[15] == doctest::Approx(24.0).epsilon(1e-12));  // t = 16
  CHECK(a.values[7] == b.values[7]);  // pre period untouched
}

TEST_CASE("simulate_series: exponential errors have mean 1/rate") {
  SimConfig config = small_config();
  config.error = ErrorModel::exponential(0.1);
  double sum = 0.0;
  long count = 0;
  for (int r = 0; r < 6250; ++r) {  // 6250 * 16 = 1e5 draws
    const auto series = itsa::simulate_series(config, 0.0, RngSpec{1234, static_cast<std::uint64_t>(r)});
    for (int i = 0; i < 16; ++i) {
      const double t = i + 1;
      sum += series.values[i] - 4.0 - 4.0 * t;
      ++count;
    }
  }
  CHECK(std::fabs(sum / count - 10.0) < 0.3);
}

TEST_CASE("estimate_power: deterministic and worker-count independent") {
  const SimConfig config = small_config();
  const PowerGrid serial = itsa::estimate_power(config, 1);
  const PowerGrid repeat = itsa::estimate_power(config, 1);
  const PowerGrid threaded = itsa::estimate_power(config, 4);

  REQUIRE(serial.rows.size() == 2);
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].power_t == repeat.rows[i].power_t);
    CHECK(serial.rows[i].power_robust == repeat.rows[i].power_robust);
    CHECK(serial.rows[i].power_t == threaded.rows[i].power_t);
    CHECK(serial.rows[i].power_robust == threaded.rows[i].power_robust);
  }
  CHECK(itsa::power_grid_csv(serial) == itsa::power_grid_csv(threaded));
  CHECK(itsa::power_grid_json(serial) == itsa::power_grid_json(threaded));
}

TEST_CASE("estimate_power: power rises with the effect") {
  // Tiny smoke run; the full grids live in the acceptance suite.
  const PowerGrid grid = itsa::estimate_power(small_config(), 2);
  CHECK(grid.rows[0].power_t < 0.25);       // near the nominal 5% level
  CHECK(grid.rows[1].power_t > grid.rows[0].power_t + 0.2);
  CHECK(grid.rows[1].power_robust > grid.rows[0].power_robust + 0.2);
}

TEST_CASE("estimate_power: configuration validation") {
  SimConfig config = small_config();
  config.replications = 50;
  CHECK_THROWS_AS(itsa::estimate_power(config, 1), itsa::Error);
  config = small_config();
  config.bootstrap_B = 10;
  CHECK_THROWS_AS(itsa::estimate_power(config, 1), itsa::Error);
  config = small_config();
  config.effect_sizes.clear();
  CHECK_THROWS_AS(itsa::estimate_power(config, 1), itsa::Error);
}

TEST_CASE("SimConfig defaults: 8+8 points, beta (4,4,0,0), alpha 0.05, R 1000") {
  const SimConfig config;
  CHECK(config.n_pre == 8);
  CHECK(config.n_post == 8);
  CHECK(config.beta == Eigen::Vector4d{4.0, 4.0, 0.0, 0.0});
  CHECK(config.alpha == 0.05);
  CHECK(config.replications == 1000);
  CHECK(config.bootstrap_B == 1000);
}

TEST_CASE("default effect grids match the two error models") {
  const auto exp_grid = itsa::default_effect_grid(ErrorModel::exponential(0.1));
  REQUIRE(exp_grid.size() == 11);
  CHECK(exp_grid.front() == 0.0);
  CHECK(exp_grid.back() == 10.0);
  const auto normal_grid = itsa::default_effect_grid(ErrorModel::standard_normal());
  REQUIRE(normal_grid.size() == 11);
  CHECK(normal_grid.front() == 0.0);
  CHECK(normal_grid.back() == 1.0);
  CHECK(normal_grid[5] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("power grid serializers") {
  PowerGrid grid;
  grid.config = small_config();
  grid.rows = {{0.0, 0.05, 0.06}, {1.0, 0.5, 0.52}};
  const std::string csv = itsa::power_grid_csv(grid);
  CHECK(csv == "effect,power_t,power_robust\n0,0.05,0.06\n1,0.5,0.52\n");
  const std::string json = itsa::power_grid_json(grid);
  CHECK(json.find("\"power_robust\": 0.52") != std::string::npos);
}
