#include "windtap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windtap {

namespace {

constexpr double kPosTol = 1e-9;

double percentile_sorted(const std::vector<double>& sorted, double p) {
  // Linear-interpolated percentile, p in [0, 1].
  if (sorted.empty()) throw std::invalid_argument("percentile of empty set");
  const double idx = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = idx - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string to_string(BladeState state) {
  return state == BladeState::clean ? "clean" : "instrumented";
}

BladeState blade_state_from_string(const std::string& s) {
  if (s == "clean") return BladeState::clean;
  if (s == "instrumented") return BladeState::instrumented;
  throw std::invalid_argument("unknown blade state '" + s + "'");
}

std::vector<double> SweepSummary::stations() const {
  std::vector<double> xs;
  for (const auto& e : entries) xs.push_back(e.station.x_c);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < kPosTol; }),
           xs.end());
  return xs;
}

std::vector<double> SweepSummary::aoa_grid() const {
  std::vector<double> as;
  for (const auto& e : entries) as.push_back(e.aoa);
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end(),
                       [](double a, double b) { return std::abs(a - b) < kPosTol; }),
           as.end());
  return as;
}

std::vector<StationAggregate> SweepSummary::curve(double x_c) const {
  std::vector<StationAggregate> out;
  for (const auto& e : entries) {
    if (std::abs(e.station.x_c - x_c) < kPosTol) out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.aoa < b.aoa; });
  return out;
}

std::vector<StationAggregate> SweepSummary::profile(double aoa) const {
  std::vector<StationAggregate> out;
  for (const auto& e : entries) {
    if (std::abs(e.aoa - aoa) < kPosTol) out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.station.x_c < b.station.x_c; });
  return out;
}

std::optional<double> detect_separation_aoa(const std::vector<StationAggregate>& curve,
                                            double k, double attached_max_aoa) {
  std::vector<StationAggregate> pts = curve;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.aoa < b.aoa; });
  std::vector<double> attached;
  for (const auto& p : pts) {
    if (p.aoa <= attached_max_aoa + kPosTol) attached.push_back(p.std);
  }
  if (attached.size() < 4) {
    throw std::invalid_argument(
        "detect_separation_aoa: fewer than 4 attached-window points");
  }
  std::sort(attached.begin(), attached.end());
  const double med = percentile_sorted(attached, 0.5);
  const double iqr = percentile_sorted(attached, 0.75) - percentile_sorted(attached, 0.25);
  const double threshold = med + k * iqr;
  for (const auto& p : pts) {
    if (p.std > threshold) return p.aoa;
  }
  return std::nullopt;
}

double separation_point_estimate(const std::vector<StationAggregate>& profile) {
  if (profile.size() < 3) {
    throw std::invalid_argument("separation_point_estimate: need >= 3 stations");
  }
  std::vector<StationAggregate> pts = profile;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.station.x_c < b.station.x_c; });
  double best_x = pts.front().station.x_c;
  double best_std = pts.front().std;
  for (const auto& p : pts) {
    if (p.std >= best_std) {  // >= breaks ties toward the trailing edge
      best_std = p.std;
      best_x = p.station.x_c;
    }
  }
  return best_x;
}

std::vector<LinearFit> fit_linear_models(const SweepSummary& sweep,
                                         double window_min, double window_max) {
  std::vector<LinearFit> fits;
  for (double x : sweep.stations()) {
    const auto pts = sweep.curve(x);
    std::vector<std::pair<double, double>> sel;  // (aoa, mean)
    for (const auto& p : pts) {
      if (p.aoa >= window_min - kPosTol && p.aoa <= window_max + kPosTol) {
        sel.emplace_back(p.aoa, p.mean);
      }
    }
    if (sel.size() < 3) {
      throw std::invalid_argument("fit_linear_models: fewer than 3 AoA points at x/c = " +
                                  std::to_string(x));
    }
    double sa = 0, sp = 0, saa = 0, sap = 0;
    const auto n = static_cast<double>(sel.size());
    for (const auto& [a, p] : sel) {
      sa += a;
      sp += p;
      saa += a * a;
      sap += a * p;
    }
    const double det = n * saa - sa * sa;
    if (std::abs(det) < 1e-12) {
      throw std::invalid_argument("fit_linear_models: degenerate AoA window");
    }
    LinearFit fit;
    fit.station = pts.front().station;
    fit.slope = (n * sap - sa * sp) / det;
    fit.intercept = (sp - fit.slope * sa) / n;
    double ss = 0.0;
    for (const auto& [a, p] : sel) {
      const double r = p - (fit.slope * a + fit.intercept);
      ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fits.push_back(fit);
  }
  return fits;
}

AoaEstimate infer_aoa(const std::vector<std::pair<double, double>>& snapshot,
                      const std::vector<LinearFit>& models) {
  if (snapshot.size() < 2) throw std::invalid_argument("infer_aoa: need >= 2 stations");

  struct Term {
    double slope, intercept, pressure, residual, weight;
  };
  std::vector<Term> terms;
  double max_res = 0.0;
  for (const auto& [x, p] : snapshot) {
    for (const auto& m : models) {
      if (std::abs(m.station.x_c - x) < kPosTol) {
        terms.push_back({m.slope, m.intercept, p, m.residual_rms, 1.0});
        max_res = std::max(max_res, m.residual_rms);
        break;
      }
    }
  }
  if (terms.size() < 2) {
    throw std::invalid_argument("infer_aoa: fewer than 2 stations with fitted models");
  }
  // Uniform weights when the fits are (numerically) exact.
  if (max_res > 1e-12) {
    for (auto& t : terms) {
      const double res = std::max(t.residual, 1e-6);
      t.weight = 1.0 / (res * res);
    }
  }

  double num = 0.0, den = 0.0;
  for (const auto& t : terms) {
    num += t.weight * t.slope * (t.pressure - t.intercept);
    den += t.weight * t.slope * t.slope;
  }
  if (std::abs(den) < 1e-15) throw std::invalid_argument("infer_aoa: all-zero slopes");
  const double aoa = num / den;
  double ss = 0.0;
  for (const auto& t : terms) {
    const double r = t.pressure - (t.slope * aoa + t.intercept);
    ss += r * r;
  }
  return AoaEstimate{aoa, std::sqrt(ss / static_cast<double>(terms.size()))};
}

ComparisonReport compare_systems(const SweepSummary& mems,
                                 const SweepSummary& scanner,
                                 const std::vector<std::pair<double, double>>& station_pairing) {
  if (station_pairing.empty()) {
    throw std::invalid_argument("compare_systems: empty station pairing");
  }
  ComparisonReport report;
  for (const auto& [mx, sx] : station_pairing) {
    const auto mc = mems.curve(mx);
    const auto sc = scanner.curve(sx);
    double mean_range_lo = 1e300, mean_range_hi = -1e300;
    double std_range_lo = 1e300, std_range_hi = -1e300;
    double mean_err = 0.0, std_err = 0.0;
    std::size_t count = 0;
    for (const auto& m : mc) {
      for (const auto& s : sc) {
        if (std::abs(m.aoa - s.aoa) > kPosTol) continue;
        mean_range_lo = std::min(mean_range_lo, s.mean);
        mean_range_hi = std::max(mean_range_hi, s.mean);
        std_range_lo = std::min(std_range_lo, s.std);
        std_range_hi = std::max(std_range_hi, s.std);
        mean_err += std::abs(m.mean - s.mean);
        std_err += std::abs(m.std - s.std);
        ++count;
      }
    }
    if (count == 0) {
      throw std::invalid_argument("compare_systems: paired stations share no AoA grid");
    }
    const double mean_range = mean_range_hi - mean_range_lo;
    const double std_range = std_range_hi - std_range_lo;
    if (!(mean_range > 0.0) || !(std_range > 0.0)) {
      throw std::invalid_argument("compare_systems: degenerate sweep (zero scanner range)");
    }
    StationError err;
    err.x_c = mx;
    err.mean_error_pct = 100.0 * (mean_err / static_cast<double>(count)) / mean_range;
    err.std_error_pct = 100.0 * (std_err / static_cast<double>(count)) / std_range;
    report.per_station.push_back(err);
  }
  return report;
}

ImpactReport impact_shift(const SweepSummary& clean,
                          const SweepSummary& instrumented,
                          const SeparationMethod& method) {
  ImpactReport report;
  for (double x : clean.stations()) {
    const auto cc = clean.curve(x);
    const auto ic = instrumented.curve(x);
    if (ic.empty()) continue;
    StationShift shift;
    shift.x_c = x;
    const auto onset_clean =
        detect_separation_aoa(cc, method.k_threshold, method.attached_max_aoa);
    const auto onset_instr =
        detect_separation_aoa(ic, method.k_threshold, method.attached_max_aoa);
    if (onset_clean && onset_instr) {
      shift.onset_shift_deg = *onset_clean - *onset_instr;
    }
    double peak_clean = 0.0, peak_instr = 0.0;
    for (const auto& p : cc) peak_clean = std::max(peak_clean, p.std);
    for (const auto& p : ic) peak_instr = std::max(peak_instr, p.std);
    shift.peak_std_ratio = peak_clean > 0.0 ? peak_instr / peak_clean : 1.0;
    report.per_station.push_back(shift);
  }
  return report;
}

std::vector<std::pair<double, double>> nearest_tap_pairing(
    const std::vector<double>& mems_stations,
    const std::vector<double>& tap_stations, double max_distance) {
  std::vector<std::pair<double, double>> pairing;
  for (double mx : mems_stations) {
    double best = 1e300, best_tap = 0.0;
    for (double tx : tap_stations) {
      const double d = std::abs(tx - mx);
      if (d < best) {
        best = d;
        best_tap = tx;
      }
    }
    if (best <= max_distance) pairing.emplace_back(mx, best_tap);
  }
  return pairing;
}

}  // namespace windtap
