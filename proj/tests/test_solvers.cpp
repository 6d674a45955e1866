#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hfopt/analysis.hpp"

#include <cmath>
#include <random>

using namespace hfopt;

namespace {

SymMatrix bonding() {
  Matrix d(2, 2);
  d << 0.5, 0.5, 0.5, 0.5;
  return SymMatrix(d);
}

IterationRecord rec_with(long k, double dd1, double dd2) {
  IterationRecord r;
  r.k = k;
  r.dd1 = dd1;
  r.dd2 = dd2;
  return r;
}

// 4-index orthogonal conjugation of the two-electron tensor (test-scale n)
EriTensor conjugate_eri(const EriTensor& eri, const Matrix& q) {
  const int n = eri.n_basis();
  EriTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (EriTensor::pair_index(i, j) < EriTensor::pair_index(k, l)) continue;
          double v = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e)
                  v += q(i, a) * q(j, b) * q(k, c) * q(l, e) * eri(a, b, c, e);
          out.set(i, j, k, l, v);
        }
  return out;
}

}  // namespace

TEST_CASE("gradient descent: fixed point of the spinless dimer") {
  const ElectronicSystem sys = hubbard_ring(2, 1.0, 2.0, 1, Convention::Spinless);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::GradientDescent;
  const RunResult r = run_gradient(sys, DensityMatrix(bonding(), 1), cfg);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace.back().k == 0);
  CHECK(r.trace.back().energy == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gradient descent: linear model reaches the aufbau minimizer") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix h(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = u(rng);
  const ElectronicSystem sys =
      make_system(SymMatrix(h), EriTensor(5), 2, Convention::Spinless, 0.25);

  SolverConfig cfg;
  cfg.algorithm = Algorithm::GradientDescent;
  cfg.step = Backtracking{};
  const RunResult r = run_gradient(sys, random_guess(sys, 5), cfg);
  CHECK(r.status == RunStatus::Converged);

  const Spectrum s = sym_eig(sys.h);
  const double expect = s.eigenvalues[0] + s.eigenvalues[1] + 0.25;
  CHECK(r.trace.back().energy == doctest::Approx(expect).epsilon(1e-8));
  CHECK((r.final.mat() - aufbau(sys.h, 2).mat()).norm() < 1e-6);
}

TEST_CASE("gradient descent: Armijo decrease on every accepted step") {
  const ElectronicSystem sys =
      random_system(77, 6, 4, Convention::RestrictedClosedShell, 0.6);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::GradientDescent;
  cfg.step = Backtracking{};
  const RunResult r = run_gradient(sys, random_guess(sys, 9), cfg);
  CHECK(r.status == RunStatus::Converged);
  REQUIRE(r.trace.size() >= 2);
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
    const IterationRecord& a = r.trace[i];
    const IterationRecord& b = r.trace[i + 1];
    CHECK(b.energy <=
          a.energy - 0.5 * a.step * a.grad_norm * a.grad_norm + 1e-12);
  }
}

TEST_CASE("roothaan: dimer hand iteration") {
  const ElectronicSystem sys = hubbard_ring(2, 1.0, 2.0, 1, Convention::Spinless);
  Matrix d0m = Matrix::Zero(2, 2);
  d0m(0, 0) = 1;
  SolverConfig cfg;
  cfg.record_matrices = true;
  const RunResult r = run_roothaan(sys, DensityMatrix(SymMatrix(d0m), 1), cfg);
  CHECK(r.status == RunStatus::Converged);
  REQUIRE(r.stored_iterates.size() >= 2);
  CHECK((r.stored_iterates[1].mat() - bonding().mat()).norm() < 1e-12);
  CHECK(r.trace.back().energy == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r.trace.back().k <= 2);
  CHECK(r.aufbau_residual < 1e-8);
}

TEST_CASE("roothaan: closed-shell dimer fixed point") {
  const ElectronicSystem sys =
      hubbard_ring(2, 1.0, 2.0, 2, Convention::RestrictedClosedShell);
  const RunResult r = run_roothaan(sys, DensityMatrix(bonding(), 1), SolverConfig{});
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace.back().energy == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("roothaan: bilinear functional decreases by the gap-weighted square") {
  const ElectronicSystem sys =
      hubbard_ring(6, 1.0, 2.0, 6, Convention::RestrictedClosedShell);
  const RunResult r = run_roothaan(sys, random_guess(sys, 3), SolverConfig{});
  CHECK(r.status == RunStatus::Converged);

  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& rec : r.trace)
    if (std::isfinite(rec.gap)) gamma = std::min(gamma, rec.gap);
  REQUIRE(gamma > 0.0);

  const double f = occupation_factor(sys.convention);
  for (std::size_t k = 0; k + 2 < r.trace.size(); ++k) {
    if (!std::isfinite(r.trace[k].lyapunov) ||
        !std::isfinite(r.trace[k + 1].lyapunov))
      continue;
    // minimizer vs frontier-gap bound: decrease >= f (gamma/2) ||D_{k+2}-D_k||^2
    const double dd2 = r.trace[k + 2].dd2;
    CHECK(r.trace[k + 1].lyapunov <=
          r.trace[k].lyapunov - 0.5 * f * gamma * dd2 * dd2 + 1e-10);
  }
}

TEST_CASE("level shifting with b = 0 is bitwise roothaan") {
  const ElectronicSystem sys =
      random_system(101, 6, 4, Convention::RestrictedClosedShell, 1.0);
  const DensityMatrix d0 = random_guess(sys, 17);
  SolverConfig cfg;
  cfg.max_iter = 300;
  const RunResult a = run_roothaan(sys, d0, cfg);
  cfg.shift_b = 0.0;
  const RunResult b = run_level_shifting(sys, d0, cfg);
  CHECK(a.status == b.status);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].energy == b.trace[i].energy);
    CHECK(a.trace[i].grad_norm == b.trace[i].grad_norm);
    // NaN fields must be NaN in both
    CHECK(std::isfinite(a.trace[i].dd1) == std::isfinite(b.trace[i].dd1));
    if (std::isfinite(a.trace[i].dd1)) CHECK(a.trace[i].dd1 == b.trace[i].dd1);
    if (std::isfinite(a.trace[i].lyapunov))
      CHECK(a.trace[i].lyapunov == b.trace[i].lyapunov);
  }
  CHECK((a.final.mat() - b.final.mat()).norm() == 0.0);
}

TEST_CASE("level shifting dampens steps") {
  const ElectronicSystem sys =
      hubbard_ring(2, 1.0, 2.0, 2, Convention::RestrictedClosedShell);
  Matrix d0m = Matrix::Zero(2, 2);
  d0m(0, 0) = 1;
  SolverConfig cfg;
  cfg.shift_b = 4.0;
  const RunResult r = run_level_shifting(sys, DensityMatrix(SymMatrix(d0m), 1), cfg);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.trace.back().energy == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("detect_oscillation") {
  IterationTrace osc;
  for (long k = 0; k < 40; ++k) osc.push_back(rec_with(k, 1.0, 0.0));
  CHECK(detect_oscillation(osc, 20, 1e6, 1e-10));

  IterationTrace conv;
  for (long k = 0; k < 40; ++k) conv.push_back(rec_with(k, 1e-14, 1e-14));
  CHECK_FALSE(detect_oscillation(conv, 20, 1e6, 1e-10));

  // transient oscillation followed by convergence: the trailing window rules
  IterationTrace mixed;
  for (long k = 0; k < 30; ++k) mixed.push_back(rec_with(k, 1.0, 0.0));
  for (long k = 30; k < 60; ++k) mixed.push_back(rec_with(k, 1e-14, 1e-14));
  CHECK_FALSE(detect_oscillation(mixed, 20, 1e6, 1e-10));

  // insufficient data never fires
  IterationTrace tiny;
  for (long k = 0; k < 5; ++k) tiny.push_back(rec_with(k, 1.0, 0.0));
  CHECK_FALSE(detect_oscillation(tiny, 20, 1e6, 1e-10));
}

TEST_CASE("auto_shift returns b = 0 when roothaan already converges") {
  const ElectronicSystem sys = hubbard_ring(2, 1.0, 2.0, 1, Convention::Spinless);
  Matrix d0m = Matrix::Zero(2, 2);
  d0m(0, 0) = 1;
  const auto [b, r] = auto_shift(sys, DensityMatrix(SymMatrix(d0m), 1), SolverConfig{});
  CHECK(b == 0.0);
  CHECK(r.status == RunStatus::Converged);
}

TEST_CASE("auto_shift finds a finite shift for an oscillating start") {
  // closed-shell dimer from the charge-ordered guess: plain iteration
  // flips between the two sites, a positive shift damps it
  const ElectronicSystem sys =
      hubbard_ring(2, 1.0, 2.0, 2, Convention::RestrictedClosedShell);
  Matrix d0m = Matrix::Zero(2, 2);
  d0m(0, 0) = 1;
  const DensityMatrix d0(SymMatrix(d0m), 1);
  const RunResult plain = run_roothaan(sys, d0, SolverConfig{});
  CHECK(plain.status != RunStatus::Converged);
  const auto [b, r] = auto_shift(sys, d0, SolverConfig{});
  CHECK(b > 0.0);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.trace.back().energy == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("estimate_alpha: closed-form branch") {
  Matrix h = Matrix::Zero(2, 2);
  h.diagonal() << 0.5, 2.0;
  ElectronicSystem sys = make_system(SymMatrix(h), EriTensor(2), 1,
                                     Convention::Spinless);
  sys.kinetic = SymMatrix(h);
  sys.nuclear_charge = 0;
  const double lap = 2.0 * 2.0;  // 2 lambda_max(kinetic)
  const double expect = lap + 4.0 * 6.0 * std::sqrt(lap);
  Matrix d0m = Matrix::Zero(2, 2);
  d0m(1, 1) = 1;
  CHECK(estimate_alpha(sys, DensityMatrix(SymMatrix(d0m), 1)) == expect);
}

TEST_CASE("estimate_alpha: linear-model empirical bound") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix h(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = u(rng);
  const ElectronicSystem sys =
      make_system(SymMatrix(h), EriTensor(4), 2, Convention::Spinless);
  const DensityMatrix d0 = random_guess(sys, 8);
  const double alpha = estimate_alpha(sys, d0);
  const Spectrum s = sym_eig(sys.h);
  const double h_op = std::max(std::abs(s.eigenvalues[0]),
                               std::abs(s.eigenvalues[s.eigenvalues.size() - 1]));
  // |eps''| <= 2 ||h||_op ||C||^2 on the linear model; the estimate doubles
  // the sampled curvature as a safety factor
  CHECK(alpha <= 4.0 * h_op * (1.0 + 1e-3) + 1e-6);
  CHECK(alpha > 0.0);
}

TEST_CASE("estimate_alpha: invariant under orthogonal conjugation") {
  const ElectronicSystem sys =
      random_system(55, 4, 2, Convention::RestrictedClosedShell, 0.5);
  const DensityMatrix d0 = default_guess(sys);
  const double a1 = estimate_alpha(sys, d0);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix g = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) {
      g(i, j) = u(rng);
      g(j, i) = -g(i, j);
    }
  const Matrix q = expm_antisym(AntiSymMatrix(g)).mat();

  ElectronicSystem conj = sys;
  conj.h = SymMatrix(q * sys.h.mat() * q.transpose());
  conj.eri = conjugate_eri(sys.eri, q);
  const DensityMatrix d0c = default_guess(conj);
  CHECK((d0c.mat() - q * d0.mat() * q.transpose()).norm() < 1e-10);
  const double a2 = estimate_alpha(conj, d0c);
  CHECK(std::abs(a2 - a1) <= 1e-6 * std::abs(a1));
}

TEST_CASE("guesses") {
  const ElectronicSystem sys =
      random_system(61, 5, 2, Convention::Spinless, 0.5);
  const DensityMatrix d = default_guess(sys);
  CHECK(commutator(d.mat(), sys.h.mat()).norm() < 1e-12);

  const DensityMatrix g1 = random_guess(sys, 4);
  const DensityMatrix g2 = random_guess(sys, 4);
  CHECK((g1.mat() - g2.mat()).norm() == 0.0);
  const DensityMatrix g3 = random_guess(sys, 5);
  CHECK((g1.mat() - g3.mat()).norm() > 1e-3);
  CHECK(g1.idempotency_drift() <= DensityMatrix::idempotency_budget(5));
}

TEST_CASE("status names") {
  CHECK(std::string(status_name(RunStatus::Converged)) == "converged");
  CHECK(std::string(status_name(RunStatus::Oscillating)) == "oscillating");
  CHECK(std::string(status_name(RunStatus::MaxIterations)) == "max_iterations");
  CHECK(std::string(status_name(RunStatus::WellPosednessFailure)) ==
        "well_posedness_failure");
}
