#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "windtap/flow_model.hpp"

using namespace windtap;

namespace {

ChordStation mems_at(double x) { return ChordStation{x, SensorKind::mems, "m"}; }

}  // namespace

TEST_CASE("dynamic_pressure arithmetic") {
  CHECK(dynamic_pressure(1.225, 40.0) == doctest::Approx(980.0).epsilon(1e-12));
  CHECK(dynamic_pressure(1.2, 0.0) == 0.0);
  CHECK(dynamic_pressure(1.2, 10.0) == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("dynamic_pressure rejects bad inputs") {
  CHECK_THROWS_AS(dynamic_pressure(0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(dynamic_pressure(-1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(dynamic_pressure(1.2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(dynamic_pressure(std::nan(""), 10.0), std::invalid_argument);
  CHECK_THROWS_AS(dynamic_pressure(1.2, std::nan("")), std::invalid_argument);
}

TEST_CASE("FlowConditions derived quantities are consistent") {
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  CHECK(fc.dynamic_pressure == doctest::Approx(980.0).epsilon(1e-12));
  CHECK(fc.free_stream_pressure == doctest::Approx(101325.0 - 980.0).epsilon(1e-12));
  // Reference setup: chord 1.25 m, U = 40 m/s -> Mach ~0.12.
  CHECK(fc.mach == doctest::Approx(40.0 / 340.3).epsilon(1e-12));
  CHECK(fc.reynolds == doctest::Approx(40.0 * 1.25 / 1.46e-5).epsilon(1e-9));
}

TEST_CASE("Bernoulli identity holds to machine precision for beta = 1") {
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> speed(0.0, 120.0);
  std::uniform_real_distribution<double> rho(0.3, 2.5);
  std::uniform_real_distribution<double> patm(5.0e4, 1.2e5);
  for (int i = 0; i < 1000; ++i) {
    const auto fc = FlowConditions::make(speed(eng), rho(eng), patm(eng), 1.0);
    const double residual =
        fc.atmospheric_pressure - fc.free_stream_pressure - fc.dynamic_pressure;
    CHECK(std::abs(residual) <= 1e-9 * fc.atmospheric_pressure);
  }
}

TEST_CASE("beta scales the stagnation deficit") {
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0, 0.9);
  CHECK(fc.atmospheric_pressure - fc.free_stream_pressure ==
        doctest::Approx(0.9 * 980.0).epsilon(1e-12));
}

TEST_CASE("separation_front landmarks and monotonicity") {
  const FlowModelParams p;
  CHECK(separation_front(10.0, p) == 1.0);
  CHECK(separation_front(26.0, p) == 0.0);
  CHECK(separation_front(18.0, p) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(separation_front(-10.0, p) == 1.0);
  CHECK(separation_front(40.0, p) == 0.0);
  double prev = 2.0;
  for (double a = -12.0; a <= 32.0; a += 0.25) {
    const double x = separation_front(a, p);
    CHECK(x <= prev + 1e-12);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    prev = x;
  }
}

TEST_CASE("mean_pressure reference values") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  // Attached, far from the front: just the intercept at aoa = 0.
  CHECK(mean_pressure(mems_at(0.5), 0.0, fc, p) == doctest::Approx(-100.0).epsilon(1e-4));
  // m(0.28) = -110.8 -> 10 * (-110.8) - 100 = -1208.
  CHECK(mean_pressure(mems_at(0.28), 10.0, fc, p) ==
        doctest::Approx(-1208.0).epsilon(1e-6));
  // Mid-blend at aoa 18 (front at 0.5): w = logistic(0.05/0.03).
  const double w = 1.0 / (1.0 + std::exp(-(0.55 - 0.5) / 0.03));
  const double attached = -(150.0 - 140.0 * 0.55) * 18.0 - 100.0;
  const double expected = w * -500.0 + (1.0 - w) * attached;
  CHECK(expected == doctest::Approx(-645.3).epsilon(2e-4));  // spec landmark
  CHECK(mean_pressure(mems_at(0.55), 18.0, fc, p) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mean_pressure is affine in aoa on the attached window") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  for (double x : {0.28, 0.40, 0.55}) {
    const double m = -(p.slope_s0 - p.slope_s1 * x);
    for (double a = p.linear_aoa_min; a <= p.linear_aoa_max; a += 2.0) {
      // The logistic tail contributes < 1e-3 Pa this far below the front.
      CHECK(std::abs(mean_pressure(mems_at(x), a, fc, p) -
                     (m * a + p.offset_pressure)) < 1e-3);
    }
  }
}

TEST_CASE("suction is non-decreasing in aoa ahead of the front") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  for (double x : {0.1, 0.3, 0.5, 0.7}) {
    double prev_suction = -1e300;
    for (double a = -10.0; a <= 10.0; a += 0.5) {
      if (x >= separation_front(a, p) - 3.0 * p.blend_width) continue;
      const double suction = -mean_pressure(mems_at(x), a, fc, p);
      CHECK(suction >= prev_suction - 1e-9);
      prev_suction = suction;
    }
  }
}

TEST_CASE("separated stations sit on the plateau") {
  // The logistic tail decays slowly against the large attached magnitudes at
  // high aoa; 6 blend widths past the front the 5% plateau band always holds.
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  for (double a = 12.0; a <= 28.0; a += 2.0) {
    const double x_sep = separation_front(a, p);
    for (double x = 0.0; x <= 1.0; x += 0.01) {
      if (x <= x_sep + 6.0 * p.blend_width) continue;
      CHECK(std::abs(mean_pressure(mems_at(x), a, fc, p) - p.plateau_pressure) <
            0.05 * std::abs(p.plateau_pressure));
    }
  }
}

TEST_CASE("fluctuation_std regimes") {
  const FlowModelParams p;
  CHECK(fluctuation_std(mems_at(0.3), 0.0, p) == 15.0);
  // At the front itself the bump peaks: sigma0 + sigma_pk.
  CHECK(fluctuation_std(mems_at(0.5), 18.0, p) == doctest::Approx(135.0).epsilon(1e-12));
  // Post-stall: sigma0 + sigma_stall everywhere.
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(fluctuation_std(mems_at(x), 28.0, p) == doctest::Approx(75.0).epsilon(1e-12));
  }
}

TEST_CASE("FlowModelParams validation") {
  FlowModelParams p;
  p.te_separation_aoa = 30.0;  // above full_separation_aoa
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowModelParams{};
  p.blend_width = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowModelParams{};
  p.plateau_pressure = 10.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowModelParams{};
  p.base_std = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("ground_truth_series: noise-free degenerate case") {
  FlowModelParams p;
  p.base_std = p.peak_std = p.stall_std = 0.0;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  const auto ts = ground_truth_series(mems_at(0.4), 4.0, fc, p, 2.0, 200.0, 7);
  REQUIRE(ts.size() == 400);
  CHECK(ts.sample_rate == 200.0);
  const double mean = mean_pressure(mems_at(0.4), 4.0, fc, p);
  for (double v : ts.values) CHECK(v == mean);
}

TEST_CASE("ground_truth_series: determinism") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  const auto a = ground_truth_series(mems_at(0.31), 6.0, fc, p, 3.0, 200.0, 99);
  const auto b = ground_truth_series(mems_at(0.31), 6.0, fc, p, 3.0, 200.0, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.values[k] == b.values[k]);
  const auto c = ground_truth_series(mems_at(0.31), 6.0, fc, p, 3.0, 200.0, 100);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) differs |= a.values[k] != c.values[k];
  CHECK(differs);
}

TEST_CASE("ground_truth_series: 120 s sample variance tracks sigma^2") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  const ChordStation st = mems_at(0.34);
  const double aoa = 0.0;
  const double sigma = fluctuation_std(st, aoa, p);
  const double mean = mean_pressure(st, aoa, fc, p);
  double var_acc = 0.0;
  const int n_seeds = 10;
  for (int s = 0; s < n_seeds; ++s) {
    const auto ts =
        ground_truth_series(st, aoa, fc, p, 120.0, 200.0, 1000 + static_cast<unsigned>(s));
    double ss = 0.0;
    for (double v : ts.values) ss += (v - mean) * (v - mean);
    var_acc += ss / static_cast<double>(ts.size());
  }
  const double var = var_acc / n_seeds;
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("ground_truth_series input validation") {
  const FlowModelParams p;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  CHECK_THROWS_AS(ground_truth_series(mems_at(0.4), 0.0, fc, p, -1.0, 200.0, 1),
                  std::invalid_argument);
  // Rate below twice the fluctuation cutoff.
  CHECK_THROWS_AS(ground_truth_series(mems_at(0.4), 0.0, fc, p, 1.0, 30.0, 1),
                  std::invalid_argument);
  // Sample budget overflow.
  CHECK_THROWS_AS(ground_truth_series(mems_at(0.4), 0.0, fc, p, 1e8, 1e4, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(mean_pressure(mems_at(1.5), 0.0, fc, p), std::invalid_argument);
}
