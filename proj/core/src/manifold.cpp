#include "hfopt/manifold.hpp"

#include <cmath>
#include <sstream>

namespace hfopt {

DensityMatrix::DensityMatrix(SymMatrix m, int n_occ) : m_(std::move(m)), n_occ_(n_occ) {
  const Eigen::Index n = m_.n();
  if (n_occ < 1 || n_occ > n)
    throw std::invalid_argument("DensityMatrix: n_occ out of range");
  const double drift = (m_.mat() * m_.mat() - m_.mat()).norm();
  if (!(drift <= idempotency_budget(n)))
    throw std::invalid_argument("DensityMatrix: idempotency drift " +
                                std::to_string(drift) + " exceeds budget");
  const double tr = m_.mat().trace();
  if (!(std::abs(tr - n_occ) <= 1e-8))
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                " != n_occ " + std::to_string(n_occ));
}

double DensityMatrix::idempotency_drift() const {
  return (m_.mat() * m_.mat() - m_.mat()).norm();
}

TangentVector::TangentVector(SymMatrix m, DensityMatrix base)
    : m_(std::move(m)), base_(std::move(base)) {
  if (m_.n() != base_.n_basis())
    throw std::invalid_argument("TangentVector: dimension mismatch with base");
  const Matrix& d = base_.mat();
  const double defect = (d * m_.mat() + m_.mat() * d - m_.mat()).norm();
  if (!(defect <= 1e-10 * std::max(1.0, m_.mat().norm())))
    throw std::invalid_argument("TangentVector: first-order constraint violated, defect " +
                                std::to_string(defect));
  if (!(std::abs(m_.mat().trace()) <= 1e-10 * std::max(1.0, m_.mat().norm())))
    throw std::invalid_argument("TangentVector: nonzero trace");
}

DensityMatrix project_to_manifold(const SymMatrix& m, int n_occ) {
  const Spectrum s = sym_eig(m);
  const Eigen::Index n = m.n();
  if (n_occ < 1 || n_occ > n)
    throw std::invalid_argument("project_to_manifold: n_occ out of range");
  if (n_occ < n) {
    const double lo = s.eigenvalues[n - n_occ - 1];
    const double hi = s.eigenvalues[n - n_occ];
    if (hi - lo < 1e-12) {
      std::ostringstream msg;
      msg << "project_to_manifold: eigenvalue tie at the cut (" << lo << ", " << hi << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  const Matrix occ = s.eigenvectors.rightCols(n_occ);
  return DensityMatrix(SymMatrix(occ * occ.transpose()), n_occ);
}

TangentVector tangent_project(const DensityMatrix& d, const SymMatrix& m) {
  if (m.n() != d.n_basis())
    throw std::invalid_argument("tangent_project: dimension mismatch");
  const Matrix p = commutator(d.mat(), commutator(d.mat(), m.mat()));
  return TangentVector(SymMatrix(p), d);
}

TangentVector riemannian_gradient(const DensityMatrix& d, const SymMatrix& f) {
  return tangent_project(d, f);
}

namespace {

DensityMatrix conjugate_on_manifold(const DensityMatrix& d, const Matrix& generator) {
  const OrthogonalMatrix u = expm_antisym(AntiSymMatrix(generator));
  SymMatrix stepped(u.mat() * d.mat() * u.mat().transpose());
  const double drift = (stepped.mat() * stepped.mat() - stepped.mat()).norm();
  if (drift > 0.5 * DensityMatrix::idempotency_budget(d.n_basis()))
    stepped = mcweeny_purify(stepped, d.n_occ());
  return DensityMatrix(stepped, d.n_occ());
}

}  // namespace

DensityMatrix geodesic_step(const DensityMatrix& d, const SymMatrix& f, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("geodesic_step: non-finite step");
  return conjugate_on_manifold(d, t * commutator(d.mat(), f.mat()));
}

DensityMatrix retraction(const DensityMatrix& d0, const TangentVector& delta) {
  if ((delta.base().mat() - d0.mat()).norm() > 1e-12 * std::max(1.0, d0.mat().norm()))
    throw std::invalid_argument("retraction: tangent vector not anchored at d0");
  return conjugate_on_manifold(d0, -commutator(d0.mat(), delta.mat()));
}

DensityMatrix aufbau(const SymMatrix& f, int n_occ) {
  const Spectrum s = sym_eig(f);
  if (n_occ < 1 || n_occ > f.n())
    throw std::invalid_argument("aufbau: n_occ out of range");
  if (n_occ < f.n()) {
    const double lo = s.eigenvalues[n_occ - 1];
    const double hi = s.eigenvalues[n_occ];
    if (hi - lo <= 1e-12) {
      std::ostringstream msg;
      msg << "aufbau: degenerate frontier, eigenvalues " << lo << " and " << hi;
      throw std::invalid_argument(msg.str());
    }
  }
  const Matrix occ = s.eigenvectors.leftCols(n_occ);
  return DensityMatrix(SymMatrix(occ * occ.transpose()), n_occ);
}

double gap(const SymMatrix& f, int n_occ) {
  if (n_occ < 1 || n_occ >= f.n())
    throw std::invalid_argument("gap: n_occ out of range");
  const Spectrum s = sym_eig(f);
  return s.eigenvalues[n_occ] - s.eigenvalues[n_occ - 1];
}

}  // namespace hfopt
