#include "hfopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hfopt {

namespace {

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

/// Indices of the final 75% of the series entries above the decay floor:
/// long enough to expose algebraic (non-geometric) decay through a poor
/// log-linear fit, while still skipping the initial transient.
std::vector<std::size_t> usable_window(const std::vector<double>& series) {
  constexpr double floor = 10.0 * std::numeric_limits<double>::epsilon();
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i] > floor) usable.push_back(i);
  const std::size_t skip = usable.size() / 4;
  return {usable.begin() + skip, usable.end()};
}

}  // namespace

std::vector<double> tail_error_series(const std::vector<DensityMatrix>& iterates,
                                      int stride) {
  if (stride < 1) throw std::invalid_argument("tail_error_series: stride must be >= 1");
  if (iterates.empty())
    throw std::invalid_argument("tail_error_series: stored iterates absent");
  const std::size_t n = iterates.size();
  if (n < static_cast<std::size_t>(stride) + 1)
    throw std::invalid_argument("tail_error_series: need at least stride + 1 iterates");
  std::vector<double> diffs(n - stride);
  for (std::size_t l = 0; l + stride < n; ++l)
    diffs[l] = (iterates[l + stride].mat() - iterates[l].mat()).norm();
  std::vector<double> tail(diffs.size());
  double acc = 0.0;
  for (std::size_t k = diffs.size(); k-- > 0;) {
    acc += diffs[k];
    tail[k] = acc;
  }
  return tail;
}

RateFit fit_geometric_rate(const std::vector<double>& series) {
  const std::vector<std::size_t> win = usable_window(series);
  if (win.size() < 8)
    throw std::invalid_argument("fit_geometric_rate: insufficient decay data");
  std::vector<double> x, y;
  x.reserve(win.size());
  y.reserve(win.size());
  for (const std::size_t i : win) {
    x.push_back(static_cast<double>(i));
    y.push_back(std::log(series[i]));
  }
  const LinFit f = least_squares(x, y);
  RateFit out;
  out.slope = f.slope;
  out.nu = 1.0 - std::exp(f.slope);
  out.r2 = f.r2;
  out.points_used = static_cast<int>(win.size());
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& series) {
  const std::vector<std::size_t> win = usable_window(series);
  if (win.size() < 8)
    throw std::invalid_argument("fit_power_law: insufficient decay data");
  std::vector<double> x, y;
  for (const std::size_t i : win) {
    if (i == 0) continue;
    x.push_back(std::log(static_cast<double>(i)));
    y.push_back(std::log(series[i]));
  }
  const LinFit f = least_squares(x, y);
  return {f.slope, f.r2};
}

LojaFit lojasiewicz_probe(const IterationTrace& trace, std::optional<double> e_inf) {
  if (trace.empty()) throw std::invalid_argument("lojasiewicz_probe: empty trace");
  double ref;
  if (e_inf) {
    ref = *e_inf;
  } else {
    ref = std::numeric_limits<double>::infinity();
    for (const IterationRecord& r : trace) ref = std::min(ref, r.energy);
  }
  constexpr double lo = 100.0 * std::numeric_limits<double>::epsilon();
  constexpr double hi = 1e-2;
  std::vector<double> x, y;
  for (const IterationRecord& r : trace) {
    const double de = r.energy - ref;
    if (de > lo && de < hi && r.grad_norm > 0.0 && std::isfinite(r.grad_norm)) {
      x.push_back(std::log(de));
      y.push_back(std::log(r.grad_norm));
    }
  }
  if (x.size() < 8)
    throw std::invalid_argument(
        "lojasiewicz_probe: insufficient points in the fitting band");
  const LinFit f = least_squares(x, y);
  LojaFit out;
  out.slope = f.slope;
  out.theta = 1.0 - f.slope;
  out.kappa = std::exp(-f.intercept);
  out.clamped = !(out.theta > 0.0 && out.theta <= 0.5);
  out.points_used = static_cast<int>(x.size());
  return out;
}

ConvergenceReport analyze_run(const RunResult& result, int stride) {
  ConvergenceReport rep;
  std::vector<double> grads;
  grads.reserve(result.trace.size());
  for (const IterationRecord& r : result.trace) grads.push_back(r.grad_norm);
  const RateFit geo = fit_geometric_rate(grads);
  rep.nu = geo.nu;
  rep.nu_r2 = geo.r2;
  rep.degenerate_flag = geo.r2 < 0.99;
  try {
    const LojaFit lf = lojasiewicz_probe(result.trace);
    rep.theta = lf.theta;
    rep.kappa = lf.kappa;
  } catch (const std::invalid_argument&) {
    rep.theta = rep.kappa = kNaN;
  }
  if (!result.stored_iterates.empty())
    rep.tail = tail_error_series(result.stored_iterates, stride);
  return rep;
}

ShiftScalingResult shift_scaling_study(const ElectronicSystem& sys,
                                       const DensityMatrix& d0,
                                       const std::vector<double>& b_grid,
                                       const SolverConfig& config) {
  if (b_grid.size() < 5)
    throw std::invalid_argument("shift_scaling_study: need >= 5 grid points");
  const auto [mn, mx] = std::minmax_element(b_grid.begin(), b_grid.end());
  if (*mn <= 0 || std::log10(*mx / *mn) < 1.5)
    throw std::invalid_argument(
        "shift_scaling_study: grid must span >= 1.5 decades of positive b");

  ShiftScalingResult out;
  for (const double b : b_grid) {
    SolverConfig c = config;
    c.algorithm = Algorithm::LevelShifting;
    c.shift_b = b;
    const RunResult r = run_level_shifting(sys, d0, c);
    if (r.status != RunStatus::Converged) {
      std::ostringstream msg;
      msg << "shift_scaling_study: run with b = " << b << " ended "
          << status_name(r.status);
      throw std::runtime_error(msg.str());
    }
    std::vector<double> grads;
    grads.reserve(r.trace.size());
    for (const IterationRecord& rec : r.trace) grads.push_back(rec.grad_norm);
    out.nu_per_b.emplace_back(b, fit_geometric_rate(grads).nu);
  }

  std::vector<std::pair<double, double>> sorted = out.nu_per_b;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  std::vector<double> x, y;
  for (std::size_t i = half; i < sorted.size(); ++i) {
    x.push_back(std::log(sorted[i].first));
    y.push_back(std::log(sorted[i].second));
  }
  out.loglog_slope = least_squares(x, y).slope;
  return out;
}

std::vector<ComparisonRow> compare_algorithms(
    const ElectronicSystem& sys, const DensityMatrix& d0,
    const std::vector<std::pair<std::string, SolverConfig>>& configs) {
  std::vector<ComparisonRow> rows;
  for (const auto& [name, cfg] : configs) {
    ComparisonRow row;
    row.name = name;
    try {
      const RunResult r = run(sys, d0, cfg);
      row.status = r.status;
      row.final_energy = r.trace.back().energy;
      for (const IterationRecord& rec : r.trace)
        if (rec.grad_norm <= 1e-8) {
          row.iterations_to_tol = rec.k;
          break;
        }
      std::vector<double> grads;
      for (const IterationRecord& rec : r.trace) grads.push_back(rec.grad_norm);
      try {
        const RateFit f = fit_geometric_rate(grads);
        row.nu = f.nu;
        row.nu_r2 = f.r2;
      } catch (const std::invalid_argument&) {
      }
    } catch (const std::exception&) {
      row.status = RunStatus::WellPosednessFailure;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<std::uint64_t> find_oscillating_seed(
    std::uint64_t seed_begin, std::uint64_t seed_end, int n_basis,
    int n_electrons, Convention convention, double interaction_scale,
    const SolverConfig& config) {
  for (std::uint64_t seed = seed_begin; seed < seed_end; ++seed) {
    const ElectronicSystem sys =
        random_system(seed, n_basis, n_electrons, convention, interaction_scale);
    try {
      const RunResult r = run_roothaan(sys, default_guess(sys), config);
      if (r.status == RunStatus::Oscillating) return seed;
    } catch (const std::exception&) {
      // degenerate guess or ill-posed system; skip the seed
    }
  }
  return std::nullopt;
}

}  // namespace hfopt
