#pragma once

// Electronic-structure data model: core Hamiltonian, two-electron integrals
// in chemist notation with 8-fold symmetry, energy / Fock / bilinear
// functionals, and desk-scale preset systems.

#include "hfopt/manifold.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace hfopt {

/// Two-electron integrals (mu nu | lambda sigma), chemist notation, packed
/// under the canonical composite index of the 8-fold permutational symmetry.
/// Indices are 0-based.
class EriTensor {
 public:
  explicit EriTensor(int n_basis);

  int n_basis() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return vals_[index(i, j, k, l)]; }
  void set(int i, int j, int k, int l, double v) { vals_[index(i, j, k, l)] = v; }

  const std::vector<double>& packed() const { return vals_; }

  static std::size_t pair_index(int i, int j);  // canonicalizes i >= j
  std::size_t index(int i, int j, int k, int l) const;

 private:
  int n_ = 0;
  std::vector<double> vals_;
};

enum class Convention { Spinless, RestrictedClosedShell };

/// Occupation factor f: 1 for spinless, 2 for restricted closed-shell.
int occupation_factor(Convention c);

const char* convention_name(Convention c);
Convention convention_from_name(const std::string& name);

/// Discretized problem data in an orthonormal Galerkin basis.
struct ElectronicSystem {
  int n_basis = 0;
  int n_electrons = 0;
  Convention convention = Convention::Spinless;
  int n_occ = 0;  // n_electrons (spinless) or n_electrons/2 (RHF)
  SymMatrix h;
  EriTensor eri{1};
  double core_energy = 0.0;
  std::optional<SymMatrix> kinetic;      // discretized -1/2 Laplacian
  std::optional<int> nuclear_charge;     // Z
};

/// Validates counts (RHF requires an even electron count, n_occ <= n_basis)
/// and dimension agreement.
ElectronicSystem make_system(SymMatrix h, EriTensor eri, int n_electrons,
                             Convention convention, double core_energy = 0.0);

/// J(D)_{mu nu} = sum_{lambda sigma} (mu nu|lambda sigma) D_{lambda sigma}.
SymMatrix coulomb(const ElectronicSystem& sys, const SymMatrix& d);

/// K(D)_{mu nu} = sum_{lambda sigma} (mu lambda|nu sigma) D_{lambda sigma}.
SymMatrix exchange(const ElectronicSystem& sys, const SymMatrix& d);

/// G(D) = J - K (spinless) or 2J - K (restricted closed-shell).
SymMatrix g_matrix(const ElectronicSystem& sys, const SymMatrix& d);

/// Fock matrix F(D) = h + G(D).
SymMatrix fock(const ElectronicSystem& sys, const SymMatrix& d);

/// Unconstrained energy gradient f * F(D); the generator of the gradient
/// iteration, so that d/dt E(D_t)|_0 = -||[D, f F]||^2 holds for both
/// conventions.
SymMatrix gradient_operator(const ElectronicSystem& sys, const SymMatrix& d);

/// E(D) = f Tr(h D) + (f/2) Tr(G(D) D) + core_energy. The overload taking a
/// raw SymMatrix skips the manifold-membership check.
double energy(const ElectronicSystem& sys, const DensityMatrix& d);
double energy_unchecked(const ElectronicSystem& sys, const SymMatrix& d);

/// E(D, D') = f Tr(h (D+D')) + f Tr(G(D) D') + 2 core_energy.
/// Symmetric; E(D, D) = 2 E(D).
double bilinear_energy(const ElectronicSystem& sys, const DensityMatrix& d,
                       const DensityMatrix& dp);

/// F^b(D) = F(D) - b D.
SymMatrix shifted_fock(const ElectronicSystem& sys, const SymMatrix& d, double b);

/// E^b(D, D') = E(D, D') + (b/2) ||D - D'||^2_F.
double shifted_bilinear_energy(const ElectronicSystem& sys, const DensityMatrix& d,
                               const DensityMatrix& dp, double b);

/// Periodic Hubbard ring: hopping -t_h between nearest neighbours mod L,
/// on-site repulsion (ii|ii) = U, zero core energy.
ElectronicSystem hubbard_ring(int sites, double t_h, double u, int n_electrons,
                              Convention convention);

/// Deterministic random test system: h symmetric with entries in [-1, 1],
/// ERI i.i.d. over canonical index classes scaled by interaction_scale.
ElectronicSystem random_system(std::uint64_t seed, int n_basis, int n_electrons,
                               Convention convention, double interaction_scale);

/// Transform (h, eri) into an orthonormal basis via S^{-1/2} when inputs
/// carry an overlap matrix S. Throws when S is not positive definite.
std::pair<SymMatrix, EriTensor> lowdin_orthonormalize(const SymMatrix& h,
                                                      const EriTensor& eri,
                                                      const SymMatrix& s);

/// Samples eps(t) = E(geodesic descent step of size t from D) for
/// t in [0, t_max], n_samples points (t = 0 included).
std::vector<std::pair<double, double>> energy_curve_probe(const ElectronicSystem& sys,
                                                          const DensityMatrix& d,
                                                          double t_max, int n_samples);

}  // namespace hfopt
