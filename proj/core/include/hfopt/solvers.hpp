#pragma once

// The three iterations under study: manifold gradient descent with
// exponential retraction, the Roothaan fixed point, and Level-Shifting,
// with stopping, tracing, step-size policy, oscillation detection and
// automatic shift selection.

#include "hfopt/hamiltonian.hpp"

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

namespace hfopt {

struct FixedStep {
  double t;
};
struct AlphaFormula {};  // t = 1/alpha, alpha estimated at the start
struct Backtracking {
  double t_init = 1.0;   // replaced by 1/alpha when alpha is available
  double shrink = 0.5;
  double armijo = 0.5;
};
using StepPolicy = std::variant<FixedStep, AlphaFormula, Backtracking>;

enum class Algorithm { GradientDescent, Roothaan, LevelShifting };

struct SolverConfig {
  Algorithm algorithm = Algorithm::Roothaan;
  StepPolicy step = Backtracking{};
  double shift_b = 0.0;                 // Level-Shifting only
  double tol_grad = 1e-8;               // stop when ||[D, grad op]|| <= tol_grad
  double tol_dd = 1e-10;
  long max_iter = 100000;
  int oscillation_window = 20;
  double oscillation_ratio = 1e6;
  bool record_matrices = false;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct IterationRecord {
  long k = 0;
  double energy = kNaN;
  double grad_norm = kNaN;  // ||[D_k, f F_k]||, the constrained gradient norm
  double dd1 = kNaN;        // ||D_k - D_{k-1}||
  double dd2 = kNaN;        // ||D_k - D_{k-2}||
  double gap = kNaN;        // frontier gap of the iteration matrix (SCF only)
  double lyapunov = kNaN;   // (shifted) bilinear value E(D_k, D_{k+1}) (SCF only)
  double step = kNaN;       // accepted step size (gradient only)
};
using IterationTrace = std::vector<IterationRecord>;

enum class RunStatus { Converged, Oscillating, MaxIterations, WellPosednessFailure };

const char* status_name(RunStatus s);

struct RunResult {
  RunStatus status;
  DensityMatrix final;
  IterationTrace trace;
  std::vector<DensityMatrix> stored_iterates;  // empty unless record_matrices
  /// ||aufbau(F(final)) - final|| when the final gap exceeds 1e-6, else NaN.
  /// Asserted for SCF algorithms, reported only for gradient descent.
  double aufbau_residual = kNaN;
};

/// Curvature bound alpha of the energy along geodesics. Formula path
/// alpha = ||-Delta||_op + 4(6N+Z) sqrt(||-Delta||_op) when kinetic and Z
/// metadata are present (||-Delta||_op = 2 lambda_max(kinetic)); otherwise an
/// empirical bound: 2 * max over probe curves and sampled t of
/// |eps''(t)| / ||C_0||^2 via finite differences. Probe directions are built
/// covariantly from powers of F(D0), so the estimate is invariant under
/// orthogonal conjugation of the system.
double estimate_alpha(const ElectronicSystem& sys, const DensityMatrix& d0,
                      int n_probes = 8);

RunResult run_gradient(const ElectronicSystem& sys, const DensityMatrix& d0,
                       const SolverConfig& config);
RunResult run_roothaan(const ElectronicSystem& sys, const DensityMatrix& d0,
                       const SolverConfig& config);
RunResult run_level_shifting(const ElectronicSystem& sys, const DensityMatrix& d0,
                             const SolverConfig& config);

/// Dispatch on config.algorithm.
RunResult run(const ElectronicSystem& sys, const DensityMatrix& d0,
              const SolverConfig& config);

/// Fires when over the trailing `window` records max dd2 <= tol_dd while
/// min dd1 >= ratio * tol_dd: each parity subsequence settled, but to
/// different limits. Insufficient data never fires.
bool detect_oscillation(const IterationTrace& trace, int window, double ratio,
                        double tol_dd);

/// Tries b = 0, then b = 1, 2, 4, ... up to 2^16, returning the first
/// (b, result) with Converged status. Throws when the cap is exceeded,
/// reporting every attempted b and its status.
std::pair<double, RunResult> auto_shift(const ElectronicSystem& sys,
                                        const DensityMatrix& d0,
                                        const SolverConfig& config);

/// Core-Hamiltonian guess aufbau(h).
DensityMatrix default_guess(const ElectronicSystem& sys);

/// aufbau(h) followed by a seeded random tangent kick and retraction.
DensityMatrix random_guess(const ElectronicSystem& sys, std::uint64_t seed,
                           double kick_norm = 1.0);

}  // namespace hfopt
