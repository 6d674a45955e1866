#include "hfopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace hfopt {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Oscillating: return "oscillating";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::WellPosednessFailure: return "well_posedness_failure";
  }
  return "unknown";
}

namespace {

double grad_norm_of(const ElectronicSystem& sys, const DensityMatrix& d,
                    const SymMatrix& f) {
  const double fac = occupation_factor(sys.convention);
  return fac * commutator(d.mat(), f.mat()).norm();
}

/// ||aufbau(F(d)) - d|| when the frontier gap exceeds 1e-6, NaN otherwise.
double aufbau_residual_of(const ElectronicSystem& sys, const DensityMatrix& d) {
  const SymMatrix f = fock(sys, d.matrix());
  if (d.n_occ() >= sys.n_basis) return kNaN;
  if (gap(f, d.n_occ()) <= 1e-6) return kNaN;
  return (aufbau(f, d.n_occ()).mat() - d.mat()).norm();
}

double curve_energy(const ElectronicSystem& sys, const DensityMatrix& d,
                    const SymMatrix& gen, double t) {
  return energy(sys, geodesic_step(d, gen, t));
}

}  // namespace

double estimate_alpha(const ElectronicSystem& sys, const DensityMatrix& d0,
                      int n_probes) {
  if (sys.kinetic && sys.nuclear_charge) {
    const Spectrum sp = sym_eig(*sys.kinetic);
    const double lap_op = 2.0 * sp.eigenvalues[sp.eigenvalues.size() - 1];
    const double root = std::sqrt(std::max(lap_op, 0.0));
    return lap_op + 4.0 * (6.0 * sys.n_electrons + *sys.nuclear_charge) * root;
  }

  const SymMatrix g0 = gradient_operator(sys, d0.matrix());
  if (commutator(d0.mat(), g0.mat()).norm() < 1e-14)
    throw std::invalid_argument(
        "estimate_alpha: zero gradient at d0, probe from a different point");

  // Covariant probe directions: random combinations of normalized powers of
  // the gradient operator, tangent-projected at d0. Conjugating the system by
  // an orthogonal matrix conjugates every probe, leaving the estimate
  // invariant.
  std::vector<Matrix> basis;
  Matrix p = Matrix::Identity(sys.n_basis, sys.n_basis);
  for (int m = 1; m <= 4; ++m) {
    p = p * g0.mat();
    const double nrm = p.norm();
    if (nrm > 1e-300) basis.push_back(p / nrm);
  }

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<DensityMatrix> probes;
  probes.push_back(d0);
  for (int j = 1; j < n_probes; ++j) {
    Matrix m = Matrix::Zero(sys.n_basis, sys.n_basis);
    for (const Matrix& b : basis) m += gauss(rng) * b;
    const TangentVector t = tangent_project(d0, SymMatrix(m));
    if (t.norm() < 1e-12) continue;
    const TangentVector kick(SymMatrix(0.2 * t.mat() / t.norm()), d0);
    probes.push_back(retraction(d0, kick));
  }

  double worst = 0.0;
  bool seen = false;
  for (const DensityMatrix& dp : probes) {
    const SymMatrix gen = gradient_operator(sys, dp.matrix());
    const double cn = commutator(dp.mat(), gen.mat()).norm();
    if (cn < 1e-12) continue;
    const double tau = std::min(0.5 / cn, 10.0);
    const double delta = 1e-3 * tau;
    for (const double frac : {0.0, 0.25, 0.5, 1.0}) {
      const double t = frac * tau;
      const double e_m = curve_energy(sys, dp, gen, t - delta);
      const double e_0 = curve_energy(sys, dp, gen, t);
      const double e_p = curve_energy(sys, dp, gen, t + delta);
      const double second = (e_p - 2.0 * e_0 + e_m) / (delta * delta);
      worst = std::max(worst, std::abs(second) / (cn * cn));
      seen = true;
    }
  }
  if (!seen)
    throw std::runtime_error("estimate_alpha: all probes had zero gradient");
  return 2.0 * worst;
}

RunResult run_gradient(const ElectronicSystem& sys, const DensityMatrix& d0,
                       const SolverConfig& config) {
  DensityMatrix d = d0;
  DensityMatrix d_prev = d0;
  DensityMatrix d_prev2 = d0;

  IterationTrace trace;
  std::vector<DensityMatrix> stored;
  if (config.record_matrices) stored.push_back(d);

  // alpha is computed lazily: a run converged at k = 0 never needs it
  bool have_alpha = false;
  double alpha = 0.0;
  auto alpha_value = [&]() {
    if (!have_alpha) {
      alpha = estimate_alpha(sys, d);
      have_alpha = true;
    }
    return alpha;
  };

  for (long k = 0; k <= config.max_iter; ++k) {
    const SymMatrix gen = gradient_operator(sys, d.matrix());
    const double gn = commutator(d.mat(), gen.mat()).norm();
    const double e0 = energy(sys, d);
    if (!std::isfinite(e0)) throw std::runtime_error("run_gradient: non-finite energy");

    IterationRecord rec;
    rec.k = k;
    rec.energy = e0;
    rec.grad_norm = gn;
    if (k >= 1) rec.dd1 = (d.mat() - d_prev.mat()).norm();
    if (k >= 2) rec.dd2 = (d.mat() - d_prev2.mat()).norm();

    if (gn <= config.tol_grad) {
      trace.push_back(rec);
      return {RunStatus::Converged, d, std::move(trace), std::move(stored),
              aufbau_residual_of(sys, d)};
    }
    if (k == config.max_iter) {
      trace.push_back(rec);
      return {RunStatus::MaxIterations, d, std::move(trace), std::move(stored),
              aufbau_residual_of(sys, d)};
    }

    double t = 0.0;
    DensityMatrix d_next = d;
    if (const auto* fs = std::get_if<FixedStep>(&config.step)) {
      t = fs->t;
      if (k == 0 && have_alpha && t >= 2.0 / alpha)
        std::cerr << "run_gradient: warning, fixed step " << t
                  << " violates t < 2/alpha = " << 2.0 / alpha << "\n";
      d_next = geodesic_step(d, gen, t);
    } else if (std::holds_alternative<AlphaFormula>(config.step)) {
      t = 1.0 / alpha_value();
      d_next = geodesic_step(d, gen, t);
    } else {
      const auto& bt = std::get<Backtracking>(config.step);
      double t_init = bt.t_init;
      try {
        t_init = 1.0 / alpha_value();
      } catch (const std::exception&) {
        // zero-gradient probe failure cannot happen past the tol check; keep t_init
      }
      t = t_init;
      bool accepted = false;
      for (int halvings = 0; halvings <= 60; ++halvings) {
        d_next = geodesic_step(d, gen, t);
        const double et = energy(sys, d_next);
        if (et <= e0 - bt.armijo * t * gn * gn + 1e-12) {
          accepted = true;
          break;
        }
        t *= bt.shrink;
      }
      if (!accepted)
        throw std::runtime_error(
            "run_gradient: backtracking exhausted 60 halvings "
            "(gradient/energy inconsistency)");
    }

    rec.step = t;
    trace.push_back(rec);

    d_prev2 = d_prev;
    d_prev = d;
    d = d_next;
    if (config.record_matrices) stored.push_back(d);

    // periodic re-purification against slow idempotency drift
    if ((k + 1) % 100 == 0 && d.idempotency_drift() > 1e-13)
      d = DensityMatrix(mcweeny_purify(d.matrix(), d.n_occ()), d.n_occ());

    if (detect_oscillation(trace, config.oscillation_window,
                           config.oscillation_ratio, config.tol_dd))
      return {RunStatus::Oscillating, d, std::move(trace), std::move(stored), kNaN};
  }
  throw std::logic_error("run_gradient: unreachable");
}

namespace {

/// Shared Roothaan / Level-Shifting loop; b = 0 reproduces Roothaan
/// arithmetic exactly.
RunResult run_scf(const ElectronicSystem& sys, const DensityMatrix& d0,
                  const SolverConfig& config, double b) {
  if (b < 0) throw std::invalid_argument("run_scf: shift must be >= 0");
  DensityMatrix d = d0;
  DensityMatrix d_prev = d0;
  DensityMatrix d_prev2 = d0;

  IterationTrace trace;
  std::vector<DensityMatrix> stored;
  if (config.record_matrices) stored.push_back(d);

  for (long k = 0; k <= config.max_iter; ++k) {
    const SymMatrix f = fock(sys, d.matrix());
    const SymMatrix fb = SymMatrix(f.mat() - b * d.mat());
    const double gn =
        occupation_factor(sys.convention) * commutator(d.mat(), f.mat()).norm();
    const double e0 = energy(sys, d);
    if (!std::isfinite(e0)) throw std::runtime_error("run_scf: non-finite energy");

    IterationRecord rec;
    rec.k = k;
    rec.energy = e0;
    rec.grad_norm = gn;
    if (k >= 1) rec.dd1 = (d.mat() - d_prev.mat()).norm();
    if (k >= 2) rec.dd2 = (d.mat() - d_prev2.mat()).norm();
    rec.gap = d.n_occ() < sys.n_basis ? gap(fb, d.n_occ()) : kNaN;

    if (gn <= config.tol_grad) {
      trace.push_back(rec);
      return {RunStatus::Converged, d, std::move(trace), std::move(stored),
              aufbau_residual_of(sys, d)};
    }
    if (k == config.max_iter) {
      trace.push_back(rec);
      return {RunStatus::MaxIterations, d, std::move(trace), std::move(stored),
              aufbau_residual_of(sys, d)};
    }
    if (d.n_occ() < sys.n_basis && rec.gap < 1e-12) {
      trace.push_back(rec);
      return {RunStatus::WellPosednessFailure, d, std::move(trace),
              std::move(stored), kNaN};
    }

    DensityMatrix d_next = d;
    try {
      d_next = aufbau(fb, d.n_occ());
    } catch (const std::invalid_argument&) {
      trace.push_back(rec);
      return {RunStatus::WellPosednessFailure, d, std::move(trace),
              std::move(stored), kNaN};
    }
    rec.lyapunov = shifted_bilinear_energy(sys, d, d_next, b);
    trace.push_back(rec);

    d_prev2 = d_prev;
    d_prev = d;
    d = d_next;
    if (config.record_matrices) stored.push_back(d);

    if (detect_oscillation(trace, config.oscillation_window,
                           config.oscillation_ratio, config.tol_dd))
      return {RunStatus::Oscillating, d, std::move(trace), std::move(stored), kNaN};
  }
  throw std::logic_error("run_scf: unreachable");
}

}  // namespace

RunResult run_roothaan(const ElectronicSystem& sys, const DensityMatrix& d0,
                       const SolverConfig& config) {
  return run_scf(sys, d0, config, 0.0);
}

RunResult run_level_shifting(const ElectronicSystem& sys, const DensityMatrix& d0,
                             const SolverConfig& config) {
  return run_scf(sys, d0, config, config.shift_b);
}

RunResult run(const ElectronicSystem& sys, const DensityMatrix& d0,
              const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::GradientDescent: return run_gradient(sys, d0, config);
    case Algorithm::Roothaan: return run_roothaan(sys, d0, config);
    case Algorithm::LevelShifting: return run_level_shifting(sys, d0, config);
  }
  throw std::logic_error("run: unknown algorithm");
}

bool detect_oscillation(const IterationTrace& trace, int window, double ratio,
                        double tol_dd) {
  if (window < 1 || static_cast<long>(trace.size()) < window) return false;
  double max_dd2 = 0.0;
  double min_dd1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = trace.size() - window; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    if (!std::isfinite(r.dd1) || !std::isfinite(r.dd2)) return false;
    max_dd2 = std::max(max_dd2, r.dd2);
    min_dd1 = std::min(min_dd1, r.dd1);
  }
  return max_dd2 <= tol_dd && min_dd1 >= ratio * tol_dd;
}

std::pair<double, RunResult> auto_shift(const ElectronicSystem& sys,
                                        const DensityMatrix& d0,
                                        const SolverConfig& config) {
  std::vector<std::pair<double, RunStatus>> attempts;
  double b = 0.0;
  while (true) {
    SolverConfig c = config;
    c.algorithm = Algorithm::LevelShifting;
    c.shift_b = b;
    RunResult r = run_level_shifting(sys, d0, c);
    if (r.status == RunStatus::Converged) return {b, std::move(r)};
    attempts.emplace_back(b, r.status);
    b = b == 0.0 ? 1.0 : 2.0 * b;
    if (b > 65536.0) break;
  }
  std::ostringstream msg;
  msg << "auto_shift: no convergent shift up to 2^16; attempts:";
  for (const auto& [bb, st] : attempts) msg << " b=" << bb << ":" << status_name(st);
  throw std::runtime_error(msg.str());
}

DensityMatrix default_guess(const ElectronicSystem& sys) {
  return aufbau(sys.h, sys.n_occ);
}

DensityMatrix random_guess(const ElectronicSystem& sys, std::uint64_t seed,
                           double kick_norm) {
  const DensityMatrix d = default_guess(sys);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(sys.n_basis, sys.n_basis);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
  const TangentVector t = tangent_project(d, SymMatrix(m));
  if (t.norm() < 1e-12) return d;
  const TangentVector kick(SymMatrix(kick_norm * t.mat() / t.norm()), d);
  return retraction(d, kick);
}

}  // namespace hfopt
