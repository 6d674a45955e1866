#pragma once

// Dense real symmetric/antisymmetric matrix kernels shared by the whole
// library. Everything here is a pure function over immutable values.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hfopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric matrix. Construction symmetrizes via (A + A^T)/2, so the
/// invariant m(i,j) == m(j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  static SymMatrix Zero(Eigen::Index n);
  static SymMatrix Identity(Eigen::Index n);

  Eigen::Index n() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(m_ + o.m_); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(m_ - o.m_); }
  SymMatrix operator*(double s) const { return SymMatrix(m_ * s); }

 private:
  Matrix m_;
};

/// Antisymmetric matrix, antisymmetrized on construction: zero diagonal,
/// m(i,j) == -m(j,i) exactly.
class AntiSymMatrix {
 public:
  AntiSymMatrix() = default;
  explicit AntiSymMatrix(const Matrix& a);

  Eigen::Index n() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

/// Orthogonal matrix; construction rejects U with ||U^T U - I||_F > 1e-12 n.
class OrthogonalMatrix {
 public:
  explicit OrthogonalMatrix(const Matrix& u);

  Eigen::Index n() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

/// Full spectrum of a symmetric matrix, eigenvalues ascending, column i of
/// eigenvectors pairing with eigenvalues[i].
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

double frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

/// AB - BA. Antisymmetric whenever A and B are both symmetric.
Matrix commutator(const Matrix& a, const Matrix& b);

/// Dense symmetric eigendecomposition with a deterministic sign convention:
/// the first component of each eigenvector above 1e-12 in magnitude is
/// positive. Throws on iteration failure.
Spectrum sym_eig(const SymMatrix& a);

/// exp(A) for antisymmetric A; exactly orthogonal up to 1e-12 n.
OrthogonalMatrix expm_antisym(const AntiSymMatrix& a);

/// McWeeny iteration D <- 3D^2 - 2D^3 until ||D^2 - D||_F <= tol.
/// Requires eigenvalues in the purification basin (-0.5, 1.5) with exactly
/// n_occ of them in (0.5, 1.5]; an eigenvalue at 0.5 (the unstable fixed
/// point) is an error, as is exceeding the 50-sweep cap.
SymMatrix mcweeny_purify(const SymMatrix& d_approx, int n_occ, double tol = 1e-12);

/// S^{-1/2} of a symmetric positive definite matrix. Throws, naming the
/// offending eigenvalue, when the smallest eigenvalue is <= 1e-10.
SymMatrix inverse_sqrt(const SymMatrix& s);

}  // namespace hfopt
