#pragma once

// The constraint manifold P = {D symmetric, D^2 = D, Tr D = n_occ}:
// projector iterates, tangent projection, constrained gradient, geodesic
// step, retraction, aufbau construction and frontier gap.

#include "hfopt/matops.hpp"

namespace hfopt {

/// Rank-n_occ orthogonal projector, the iterate of every solver.
/// Invariants: ||D^2 - D||_F <= 1e-10 n, |Tr D - n_occ| <= 1e-8,
/// symmetry exact.
class DensityMatrix {
 public:
  DensityMatrix(SymMatrix m, int n_occ);

  const SymMatrix& matrix() const { return m_; }
  const Matrix& mat() const { return m_.mat(); }
  int n_occ() const { return n_occ_; }
  Eigen::Index n_basis() const { return m_.n(); }

  double idempotency_drift() const;  // ||D^2 - D||_F

  static constexpr double idempotency_budget(Eigen::Index n) {
    return 1e-10 * static_cast<double>(n);
  }

 private:
  SymMatrix m_;
  int n_occ_;
};

/// Element of the tangent space at `base`: symmetric, D Δ + Δ D = Δ up to
/// 1e-10, traceless up to 1e-10.
class TangentVector {
 public:
  TangentVector(SymMatrix m, DensityMatrix base);

  const SymMatrix& matrix() const { return m_; }
  const Matrix& mat() const { return m_.mat(); }
  const DensityMatrix& base() const { return base_; }
  double norm() const { return m_.mat().norm(); }

 private:
  SymMatrix m_;
  DensityMatrix base_;
};

/// Spectral projection onto the n_occ eigenvectors of M with LARGEST
/// eigenvalues; sanitizes near-projectors. Errors on an eigenvalue tie at
/// the cut (< 1e-12 apart).
DensityMatrix project_to_manifold(const SymMatrix& m, int n_occ);

/// P_D(M) = D M (1-D) + (1-D) M D = [D,[D,M]].
TangentVector tangent_project(const DensityMatrix& d, const SymMatrix& m);

/// Constrained gradient [D,[D,F]] at D for symmetric F. Note
/// ||[D,[D,F]]|| = ||[D,F]||.
TangentVector riemannian_gradient(const DensityMatrix& d, const SymMatrix& f);

/// Descent step D+ = U D U^T with U = exp(t [D,F]); stays on the manifold,
/// re-purified when the idempotency drift exceeds half the budget.
DensityMatrix geodesic_step(const DensityMatrix& d, const SymMatrix& f, double t);

/// R_{D0}(Δ) = U D0 U^T with U = exp(-[D0, Δ]); R(0) = D0 and dR(0) = id on
/// the tangent space. Δ must be anchored at d0.
DensityMatrix retraction(const DensityMatrix& d0, const TangentVector& delta);

/// Projector onto the n_occ LOWEST eigenvectors of F. A degenerate frontier
/// (gap < 1e-12) is an error carrying both eigenvalues: it is exactly the
/// failure of uniform well-posedness.
DensityMatrix aufbau(const SymMatrix& f, int n_occ);

/// Frontier gap lambda_{n_occ+1} - lambda_{n_occ} of F.
double gap(const SymMatrix& f, int n_occ);

}  // namespace hfopt
