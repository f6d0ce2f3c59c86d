#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "windtap/analysis.hpp"
#include "windtap/flow_model.hpp"

using namespace windtap;

namespace {

StationAggregate agg(double x, double aoa, double mean, double std_pa,
                     SensorKind kind = SensorKind::mems) {
  StationAggregate a;
  a.station = ChordStation{x, kind, "s"};
  a.aoa = aoa;
  a.mean = mean;
  a.std = std_pa;
  a.n_samples = 1000;
  return a;
}

/// Noise-free sweep summary straight from the closed-form model.
SweepSummary model_sweep(const FlowModelParams& p, const std::vector<double>& stations,
                         const std::vector<double>& aoas) {
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  SweepSummary s;
  for (double x : stations) {
    const ChordStation st{x, SensorKind::mems, "m"};
    for (double a : aoas) {
      s.entries.push_back(agg(x, a, mean_pressure(st, a, fc, p), fluctuation_std(st, a, p)));
    }
  }
  return s;
}

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("SweepSummary accessors") {
  SweepSummary s;
  s.entries = {agg(0.55, 0.0, -100.0, 15.0), agg(0.28, 0.0, -100.0, 15.0),
               agg(0.28, 2.0, -300.0, 15.0)};
  const auto xs = s.stations();
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == 0.28);
  CHECK(xs[1] == 0.55);
  const auto grid = s.aoa_grid();
  REQUIRE(grid.size() == 2);
  CHECK(grid[0] == 0.0);
  const auto curve = s.curve(0.28);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].aoa == 0.0);
  CHECK(curve[1].aoa == 2.0);
  const auto profile = s.profile(0.0);
  REQUIRE(profile.size() == 2);
  CHECK(profile[0].station.x_c == 0.28);
}

TEST_CASE("detect_separation_aoa: hand-traced rule") {
  std::vector<StationAggregate> curve;
  for (double a = -10.0; a <= 10.0; a += 2.0) curve.push_back(agg(0.4, a, 0.0, 15.0));
  curve.push_back(agg(0.4, 12.0, 0.0, 135.0));
  curve.push_back(agg(0.4, 14.0, 0.0, 140.0));
  const auto onset = detect_separation_aoa(curve, 3.0, 8.0);
  REQUIRE(onset.has_value());
  CHECK(*onset == 12.0);
}

TEST_CASE("detect_separation_aoa: flat curve reports no separation") {
  std::vector<StationAggregate> curve;
  for (double a = -10.0; a <= 20.0; a += 2.0) curve.push_back(agg(0.4, a, 0.0, 15.0));
  CHECK(!detect_separation_aoa(curve, 3.0, 8.0).has_value());
}

TEST_CASE("detect_separation_aoa: needs four attached points") {
  std::vector<StationAggregate> curve{agg(0.4, 0.0, 0.0, 15.0), agg(0.4, 2.0, 0.0, 15.0),
                                      agg(0.4, 4.0, 0.0, 15.0), agg(0.4, 12.0, 0.0, 99.0)};
  CHECK_THROWS_AS(detect_separation_aoa(curve, 3.0, 8.0), std::invalid_argument);
}

TEST_CASE("separation_point_estimate") {
  std::vector<StationAggregate> profile{
      agg(0.38, 18.0, 0.0, 40.0), agg(0.44, 18.0, 0.0, 90.0), agg(0.50, 18.0, 0.0, 60.0)};
  CHECK(separation_point_estimate(profile) == 0.44);
  // Tie breaks toward the trailing edge.
  std::vector<StationAggregate> tie{
      agg(0.34, 18.0, 0.0, 50.0), agg(0.40, 18.0, 0.0, 90.0), agg(0.46, 18.0, 0.0, 90.0)};
  CHECK(separation_point_estimate(tie) == 0.46);
  std::vector<StationAggregate> degenerate{agg(0.4, 18.0, 0.0, 50.0),
                                           agg(0.5, 18.0, 0.0, 50.0)};
  CHECK_THROWS_AS(separation_point_estimate(degenerate), std::invalid_argument);
}

TEST_CASE("separation point on the model: within one station spacing of the front") {
  const FlowModelParams p;
  const auto sweep = model_sweep(p, arange(0.35, 0.65, 0.03), {18.0});
  const double estimate = separation_point_estimate(sweep.profile(18.0));
  CHECK(std::abs(estimate - separation_front(18.0, p)) <= 0.03 + 1e-9);
}

TEST_CASE("front monotonicity recovered across AoA") {
  const FlowModelParams p;
  const auto stations = arange(0.05, 0.95, 0.03);
  const auto sweep = model_sweep(p, stations, arange(12.0, 24.0, 2.0));
  double prev = 2.0;
  for (double a : sweep.aoa_grid()) {
    const double x = separation_point_estimate(sweep.profile(a));
    CHECK(x <= prev + 0.03 + 1e-9);
    prev = x;
  }
}

TEST_CASE("fit_linear_models recovers exact affine data") {
  SweepSummary s;
  for (double a = -10.0; a <= 8.0; a += 2.0) {
    s.entries.push_back(agg(0.3, a, -110.0 * a - 100.0, 15.0));
    s.entries.push_back(agg(0.5, a, -80.0 * a - 100.0, 15.0));
  }
  const auto fits = fit_linear_models(s, -10.0, 8.0);
  REQUIRE(fits.size() == 2);
  CHECK(fits[0].slope == doctest::Approx(-110.0).epsilon(1e-9));
  CHECK(fits[0].intercept == doctest::Approx(-100.0).epsilon(1e-9));
  CHECK(fits[0].residual_rms < 1e-9);
  CHECK(fits[1].slope == doctest::Approx(-80.0).epsilon(1e-9));
}

TEST_CASE("fit_linear_models on the simulator: slope -110.8 at x/c = 0.28") {
  const FlowModelParams p;
  const auto sweep = model_sweep(p, {0.28}, arange(-10.0, 8.0, 2.0));
  const auto fits = fit_linear_models(sweep, -10.0, 8.0);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].slope == doctest::Approx(-110.8).epsilon(0.01));
  CHECK(fits[0].residual_rms < 1e-6);
}

TEST_CASE("fit_linear_models rejects degenerate windows") {
  SweepSummary s;
  s.entries = {agg(0.3, 4.0, -100.0, 15.0), agg(0.3, 6.0, -200.0, 15.0)};
  CHECK_THROWS_AS(fit_linear_models(s, -10.0, 8.0), std::invalid_argument);
}

TEST_CASE("infer_aoa: exact inputs recover the angle exactly") {
  const FlowModelParams p;
  const auto stations = arange(0.28, 0.55, 0.03);
  const auto sweep = model_sweep(p, stations, arange(-10.0, 8.0, 2.0));
  const auto fits = fit_linear_models(sweep, -10.0, 8.0);
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  std::vector<std::pair<double, double>> snapshot;
  for (double x : stations) {
    snapshot.emplace_back(x, mean_pressure(ChordStation{x, SensorKind::mems, "m"}, 5.0, fc, p));
  }
  const auto est = infer_aoa(snapshot, fits);
  CHECK(est.aoa == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(est.residual_rms < 1e-6);
}

TEST_CASE("infer_aoa: separated snapshot flags a regime violation") {
  const FlowModelParams p;
  const auto stations = arange(0.28, 0.55, 0.03);
  const auto sweep = model_sweep(p, stations, arange(-10.0, 8.0, 2.0));
  const auto fits = fit_linear_models(sweep, -10.0, 8.0);
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  auto snapshot_at = [&](double aoa) {
    std::vector<std::pair<double, double>> snap;
    for (double x : stations) {
      snap.emplace_back(x, mean_pressure(ChordStation{x, SensorKind::mems, "m"}, aoa, fc, p));
    }
    return snap;
  };
  const double attached_res = infer_aoa(snapshot_at(5.0), fits).residual_rms;
  const double separated_res = infer_aoa(snapshot_at(12.0), fits).residual_rms;
  CHECK(separated_res > 5.0 * std::max(attached_res, 1e-6));
}

TEST_CASE("infer_aoa preconditions") {
  const std::vector<LinearFit> no_models;
  CHECK_THROWS_AS(infer_aoa({{0.3, -100.0}, {0.4, -100.0}}, no_models),
                  std::invalid_argument);
  CHECK_THROWS_AS(infer_aoa({{0.3, -100.0}}, no_models), std::invalid_argument);
}

TEST_CASE("compare_systems: hand-computed error percentage") {
  SweepSummary scanner, mems;
  scanner.entries = {agg(0.28, 0.0, -100.0, 10.0, SensorKind::tap),
                     agg(0.28, 2.0, -200.0, 30.0, SensorKind::tap)};
  mems.entries = {agg(0.28, 0.0, -110.0, 10.0), agg(0.28, 2.0, -210.0, 30.0)};
  const auto report = compare_systems(mems, scanner, {{0.28, 0.28}});
  REQUIRE(report.per_station.size() == 1);
  CHECK(report.per_station[0].mean_error_pct == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(report.per_station[0].std_error_pct == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("compare_systems: identical summaries give zero error") {
  SweepSummary scanner;
  for (double a = 0.0; a <= 8.0; a += 2.0) {
    scanner.entries.push_back(agg(0.28, a, -100.0 * a, 10.0 + a, SensorKind::tap));
  }
  SweepSummary mems = scanner;
  const auto report = compare_systems(mems, scanner, {{0.28, 0.28}});
  CHECK(report.per_station[0].mean_error_pct == 0.0);
  CHECK(report.per_station[0].std_error_pct == 0.0);
}

TEST_CASE("compare_systems: offset ordering (0.28 worse than 0.55)") {
  // Same scanner sweep shape at both stations; MEMS carries a 110-210 Pa ramp
  // at x/c = 0.28 and a 35-70 Pa ramp at x/c = 0.55.
  SweepSummary scanner, mems;
  const auto aoas = arange(-10.0, 8.0, 2.0);
  for (std::size_t i = 0; i < aoas.size(); ++i) {
    const double a = aoas[i];
    const double frac = static_cast<double>(i) / static_cast<double>(aoas.size() - 1);
    scanner.entries.push_back(agg(0.28, a, -110.8 * a - 100.0, 15.0 + a, SensorKind::tap));
    scanner.entries.push_back(agg(0.55, a, -73.0 * a - 100.0, 15.0 + a, SensorKind::tap));
    mems.entries.push_back(
        agg(0.28, a, -110.8 * a - 100.0 + 110.0 + 100.0 * frac, 15.0 + a));
    mems.entries.push_back(agg(0.55, a, -73.0 * a - 100.0 + 35.0 + 35.0 * frac, 15.0 + a));
  }
  const auto report = compare_systems(mems, scanner, {{0.28, 0.28}, {0.55, 0.55}});
  REQUIRE(report.per_station.size() == 2);
  CHECK(report.per_station[0].mean_error_pct > report.per_station[1].mean_error_pct);
}

TEST_CASE("compare_systems: invariance and scaling of the metric") {
  SweepSummary scanner, mems;
  const auto aoas = arange(0.0, 8.0, 2.0);
  for (double a : aoas) {
    scanner.entries.push_back(agg(0.4, a, -90.0 * a, 10.0 + a, SensorKind::tap));
    mems.entries.push_back(agg(0.4, a, -90.0 * a + 50.0, 10.0 + a));
  }
  const auto base = compare_systems(mems, scanner, {{0.4, 0.4}});
  // Shared constant shift leaves the metric unchanged.
  SweepSummary scanner2 = scanner, mems2 = mems;
  for (auto& e : scanner2.entries) e.mean += 1234.5;
  for (auto& e : mems2.entries) e.mean += 1234.5;
  const auto shifted = compare_systems(mems2, scanner2, {{0.4, 0.4}});
  CHECK(shifted.per_station[0].mean_error_pct ==
        doctest::Approx(base.per_station[0].mean_error_pct).epsilon(1e-9));
  // Doubling the one-sided offset doubles the error percentage.
  SweepSummary mems3 = scanner;
  for (auto& e : mems3.entries) e.mean += 100.0;
  const auto doubled = compare_systems(mems3, scanner, {{0.4, 0.4}});
  CHECK(doubled.per_station[0].mean_error_pct ==
        doctest::Approx(2.0 * base.per_station[0].mean_error_pct).epsilon(1e-9));
}

TEST_CASE("compare_systems rejects degenerate ranges") {
  SweepSummary scanner, mems;
  for (double a : {0.0, 2.0, 4.0}) {
    scanner.entries.push_back(agg(0.4, a, -100.0, 10.0, SensorKind::tap));
    mems.entries.push_back(agg(0.4, a, -100.0, 10.0));
  }
  CHECK_THROWS_AS(compare_systems(mems, scanner, {{0.4, 0.4}}), std::invalid_argument);
}

TEST_CASE("impact_shift: constructed onsets") {
  auto sweep_with_onset = [](double onset_aoa, double peak) {
    SweepSummary s;
    for (double a = -10.0; a <= 14.0; a += 1.0) {
      const double std_pa = a >= onset_aoa ? peak : 15.0;
      s.entries.push_back(agg(0.44, a, -100.0, std_pa));
    }
    return s;
  };
  const auto clean = sweep_with_onset(12.0, 135.0);
  const auto instrumented = sweep_with_onset(11.0, 135.0);
  const auto report = impact_shift(clean, instrumented);
  REQUIRE(report.per_station.size() == 1);
  REQUIRE(report.per_station[0].onset_shift_deg.has_value());
  CHECK(*report.per_station[0].onset_shift_deg == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.per_station[0].peak_std_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("impact_shift: identical sweeps are a null result") {
  SweepSummary s;
  for (double x : {0.28, 0.40}) {
    for (double a = -10.0; a <= 16.0; a += 2.0) {
      s.entries.push_back(agg(x, a, -100.0, a >= 12.0 ? 120.0 : 15.0));
    }
  }
  const auto report = impact_shift(s, s);
  REQUIRE(report.per_station.size() == 2);
  for (const auto& e : report.per_station) {
    REQUIRE(e.onset_shift_deg.has_value());
    CHECK(*e.onset_shift_deg == 0.0);
    CHECK(e.peak_std_ratio == 1.0);
  }
}

TEST_CASE("nearest_tap_pairing") {
  const auto pairing = nearest_tap_pairing({0.28, 0.31, 0.55}, {0.28, 0.55}, 0.05);
  REQUIRE(pairing.size() == 3);
  CHECK(pairing[0] == std::pair<double, double>{0.28, 0.28});
  CHECK(pairing[1] == std::pair<double, double>{0.31, 0.28});
  CHECK(pairing[2] == std::pair<double, double>{0.55, 0.55});
  CHECK(nearest_tap_pairing({0.31}, {0.55}, 0.05).empty());
}
