#include "hfopt/matops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace hfopt {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be square, n >= 1");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  require_square(a, "SymMatrix");
  m_ = 0.5 * (a + a.transpose().eval());
  // force exact symmetry, including -0.0 vs 0.0 discrepancies
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) m_(i, j) = m_(j, i);
}

SymMatrix SymMatrix::Zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
SymMatrix SymMatrix::Identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

AntiSymMatrix::AntiSymMatrix(const Matrix& a) {
  require_square(a, "AntiSymMatrix");
  m_ = 0.5 * (a - a.transpose().eval());
  m_.diagonal().setZero();
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) m_(i, j) = -m_(j, i);
}

OrthogonalMatrix::OrthogonalMatrix(const Matrix& u) {
  require_square(u, "OrthogonalMatrix");
  const double defect =
      (u.transpose() * u - Matrix::Identity(u.rows(), u.cols())).norm();
  if (!(defect <= 1e-12 * static_cast<double>(u.rows())))
    throw std::invalid_argument("OrthogonalMatrix: ||U^T U - I|| = " +
                                std::to_string(defect) + " exceeds tolerance");
  m_ = u;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_inner");
  return a.cwiseProduct(b).sum();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

Spectrum sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigensolver failed to converge");
  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  // deterministic sign: first component above threshold made positive
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < s.eigenvectors.rows(); ++r) {
      const double v = s.eigenvectors(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0) s.eigenvectors.col(c) = -s.eigenvectors.col(c);
        break;
      }
    }
  }
  return s;
}

OrthogonalMatrix expm_antisym(const AntiSymMatrix& a) {
  if (!a.mat().allFinite())
    throw std::invalid_argument("expm_antisym: non-finite entries");
  return OrthogonalMatrix(a.mat().exp());
}

SymMatrix mcweeny_purify(const SymMatrix& d_approx, int n_occ, double tol) {
  const Spectrum s = sym_eig(d_approx);
  int high = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double ev = s.eigenvalues[i];
    if (std::abs(ev - 0.5) <= 1e-8)
      throw std::invalid_argument(
          "mcweeny_purify: eigenvalue " + std::to_string(ev) +
          " at the unstable fixed point 0.5");
    if (ev <= -0.5 || ev >= 1.5)
      throw std::invalid_argument("mcweeny_purify: eigenvalue " +
                                  std::to_string(ev) +
                                  " outside the purification basin (-0.5, 1.5)");
    if (ev > 0.5) ++high;
  }
  if (high != n_occ)
    throw std::invalid_argument(
        "mcweeny_purify: " + std::to_string(high) +
        " eigenvalues in (0.5, 1.5], expected " + std::to_string(n_occ));

  Matrix d = d_approx.mat();
  for (int it = 0; it <= 50; ++it) {
    const Matrix d2 = d * d;
    if ((d2 - d).norm() <= tol) {
      SymMatrix out{d};
      if (std::abs(out.mat().trace() - n_occ) > 1e-8)
        throw std::runtime_error("mcweeny_purify: trace drifted from n_occ");
      return out;
    }
    if (it == 50) break;
    d = 3.0 * d2 - 2.0 * d2 * d;
    d = 0.5 * (d + d.transpose().eval());
  }
  throw std::runtime_error("mcweeny_purify: not converged after 50 sweeps");
}

SymMatrix inverse_sqrt(const SymMatrix& s) {
  const Spectrum sp = sym_eig(s);
  const double lmin = sp.eigenvalues[0];
  if (lmin <= 1e-10) {
    std::ostringstream msg;
    msg << "inverse_sqrt: matrix not positive definite, smallest eigenvalue "
        << lmin;
    throw std::invalid_argument(msg.str());
  }
  const Vector inv = sp.eigenvalues.array().sqrt().inverse();
  return SymMatrix(sp.eigenvectors * inv.asDiagonal() * sp.eigenvectors.transpose());
}

}  // namespace hfopt
