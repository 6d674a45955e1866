#pragma once

// Post-hoc convergence analytics: tail error sums, geometric rate fits,
// Lojasiewicz exponent probing, shift-parameter scaling, and algorithm
// comparison tables.

#include "hfopt/solvers.hpp"

#include <optional>
#include <string>

namespace hfopt {

struct RateFit {
  double nu = 0.0;       // fitted geometric rate, e_k ~ c (1 - nu)^k
  double r2 = 0.0;       // coefficient of determination of the log-linear fit
  double slope = 0.0;    // raw regression slope of log e_k vs k
  int points_used = 0;
};

struct PowerLawFit {
  double exponent = 0.0;  // slope of log e_k vs log k
  double r2 = 0.0;
};

struct LojaFit {
  double theta = 0.0;   // raw slope-derived exponent estimate
  double kappa = 0.0;   // |E - E_inf|^{1-theta} = kappa ||grad|| on the fit line
  double slope = 0.0;   // regression slope of log ||grad|| vs log (E - E_inf)
  bool clamped = false; // theta outside (0, 1/2]
  int points_used = 0;
};

struct ConvergenceReport {
  double nu = 0.0;
  double nu_r2 = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  bool degenerate_flag = false;
  std::vector<double> tail;
};

/// e_k = sum_{l >= k} ||D_{l+stride} - D_l||, truncated at the last realized
/// iterate (a lower bound on the infinite sum). Stride 1 for gradient runs,
/// 2 for Roothaan / Level-Shifting.
std::vector<double> tail_error_series(const std::vector<DensityMatrix>& iterates,
                                      int stride);

/// Least squares of log e_k vs k over the final 75% of points above
/// 10 * machine epsilon; nu = 1 - exp(slope). Throws "insufficient decay
/// data" with fewer than 8 usable points.
RateFit fit_geometric_rate(const std::vector<double>& series);

/// Least squares of log e_k vs log k over the same usable window; recovers
/// the exponent of algebraically decaying (degenerate-case) series.
PowerLawFit fit_power_law(const std::vector<double>& series);

/// Regress log grad_norm against log (E_k - E_inf) over records with
/// E_k - E_inf in (100 eps, 1e-2); slope s gives theta = 1 - s and
/// kappa = exp(-intercept). E_inf defaults to the trace minimum.
LojaFit lojasiewicz_probe(const IterationTrace& trace,
                          std::optional<double> e_inf = std::nullopt);

/// Full report for one run: geometric fit on the grad_norm series (flagging
/// the degenerate branch when its log-linear fit is poor), Lojasiewicz
/// probe, and the tail sums when iterates were recorded.
ConvergenceReport analyze_run(const RunResult& result, int stride);

struct ShiftScalingResult {
  std::vector<std::pair<double, double>> nu_per_b;
  double loglog_slope = 0.0;  // fitted on the largest-b half of the grid
};

/// Runs Level-Shifting for each b, fits the per-b geometric rate on the
/// grad_norm series, and returns the log-log slope of nu vs b. Any
/// non-converged b is an error naming the b. Requires >= 5 grid points
/// spanning >= 1.5 decades.
ShiftScalingResult shift_scaling_study(const ElectronicSystem& sys,
                                       const DensityMatrix& d0,
                                       const std::vector<double>& b_grid,
                                       const SolverConfig& config);

struct ComparisonRow {
  std::string name;
  RunStatus status;
  long iterations_to_tol = -1;  // first k with grad_norm <= 1e-8, -1 if never
  double final_energy = kNaN;
  double nu = kNaN;
  double nu_r2 = kNaN;
};

std::vector<ComparisonRow> compare_algorithms(
    const ElectronicSystem& sys, const DensityMatrix& d0,
    const std::vector<std::pair<std::string, SolverConfig>>& configs);

/// Scans seeds of random_system for one whose Roothaan iteration oscillates
/// from the core-Hamiltonian guess.
std::optional<std::uint64_t> find_oscillating_seed(
    std::uint64_t seed_begin, std::uint64_t seed_end, int n_basis,
    int n_electrons, Convention convention, double interaction_scale,
    const SolverConfig& config);

}  // namespace hfopt
