#include "hfopt/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hfopt {

EriTensor::EriTensor(int n_basis) : n_(n_basis) {
  if (n_basis < 1) throw std::invalid_argument("EriTensor: n_basis must be >= 1");
  const std::size_t np = pair_index(n_basis - 1, n_basis - 1) + 1;
  vals_.assign(np * (np + 1) / 2, 0.0);
}

std::size_t EriTensor::pair_index(int i, int j) {
  if (i < j) std::swap(i, j);
  return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
}

std::size_t EriTensor::index(int i, int j, int k, int l) const {
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= n_ || j >= n_ || k >= n_ || l >= n_)
    throw std::out_of_range("EriTensor: index out of range");
  std::size_t ij = pair_index(i, j);
  std::size_t kl = pair_index(k, l);
  if (ij < kl) std::swap(ij, kl);
  return ij * (ij + 1) / 2 + kl;
}

int occupation_factor(Convention c) {
  return c == Convention::RestrictedClosedShell ? 2 : 1;
}

const char* convention_name(Convention c) {
  return c == Convention::RestrictedClosedShell ? "rhf" : "spinless";
}

Convention convention_from_name(const std::string& name) {
  if (name == "spinless") return Convention::Spinless;
  if (name == "rhf") return Convention::RestrictedClosedShell;
  throw std::invalid_argument("unknown convention '" + name + "' (expected spinless|rhf)");
}

ElectronicSystem make_system(SymMatrix h, EriTensor eri, int n_electrons,
                             Convention convention, double core_energy) {
  ElectronicSystem sys;
  sys.n_basis = static_cast<int>(h.n());
  if (eri.n_basis() != sys.n_basis)
    throw std::invalid_argument("make_system: h and eri dimensions differ");
  if (n_electrons < 1) throw std::invalid_argument("make_system: n_electrons must be >= 1");
  if (convention == Convention::RestrictedClosedShell && n_electrons % 2 != 0)
    throw std::invalid_argument("make_system: RHF requires an even electron count");
  sys.n_electrons = n_electrons;
  sys.convention = convention;
  sys.n_occ = convention == Convention::RestrictedClosedShell ? n_electrons / 2 : n_electrons;
  if (sys.n_occ > sys.n_basis)
    throw std::invalid_argument("make_system: n_occ exceeds n_basis");
  sys.h = std::move(h);
  sys.eri = std::move(eri);
  sys.core_energy = core_energy;
  return sys;
}

namespace {

void require_dim(const ElectronicSystem& sys, const SymMatrix& d, const char* who) {
  if (d.n() != sys.n_basis)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

SymMatrix coulomb(const ElectronicSystem& sys, const SymMatrix& d) {
  require_dim(sys, d, "coulomb");
  const int n = sys.n_basis;
  Matrix j = Matrix::Zero(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu <= mu; ++nu) {
      double acc = 0.0;
      for (int la = 0; la < n; ++la)
        for (int si = 0; si < n; ++si) acc += sys.eri(mu, nu, la, si) * d(la, si);
      j(mu, nu) = j(nu, mu) = acc;
    }
  return SymMatrix(j);
}

SymMatrix exchange(const ElectronicSystem& sys, const SymMatrix& d) {
  require_dim(sys, d, "exchange");
  const int n = sys.n_basis;
  Matrix k = Matrix::Zero(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu <= mu; ++nu) {
      double acc = 0.0;
      for (int la = 0; la < n; ++la)
        for (int si = 0; si < n; ++si) acc += sys.eri(mu, la, nu, si) * d(la, si);
      k(mu, nu) = k(nu, mu) = acc;
    }
  return SymMatrix(k);
}

SymMatrix g_matrix(const ElectronicSystem& sys, const SymMatrix& d) {
  const SymMatrix j = coulomb(sys, d);
  const SymMatrix k = exchange(sys, d);
  if (sys.convention == Convention::RestrictedClosedShell)
    return SymMatrix(2.0 * j.mat() - k.mat());
  return SymMatrix(j.mat() - k.mat());
}

SymMatrix fock(const ElectronicSystem& sys, const SymMatrix& d) {
  return SymMatrix(sys.h.mat() + g_matrix(sys, d).mat());
}

SymMatrix gradient_operator(const ElectronicSystem& sys, const SymMatrix& d) {
  const double f = occupation_factor(sys.convention);
  return SymMatrix(f * fock(sys, d).mat());
}

double energy_unchecked(const ElectronicSystem& sys, const SymMatrix& d) {
  require_dim(sys, d, "energy");
  const double f = occupation_factor(sys.convention);
  const double one_body = f * frobenius_inner(sys.h.mat(), d.mat());
  const double two_body = 0.5 * f * frobenius_inner(g_matrix(sys, d).mat(), d.mat());
  return one_body + two_body + sys.core_energy;
}

double energy(const ElectronicSystem& sys, const DensityMatrix& d) {
  return energy_unchecked(sys, d.matrix());
}

double bilinear_energy(const ElectronicSystem& sys, const DensityMatrix& d,
                       const DensityMatrix& dp) {
  require_dim(sys, d.matrix(), "bilinear_energy");
  require_dim(sys, dp.matrix(), "bilinear_energy");
  const double f = occupation_factor(sys.convention);
  return f * frobenius_inner(sys.h.mat(), d.mat() + dp.mat()) +
         f * frobenius_inner(g_matrix(sys, d.matrix()).mat(), dp.mat()) +
         2.0 * sys.core_energy;
}

SymMatrix shifted_fock(const ElectronicSystem& sys, const SymMatrix& d, double b) {
  if (b < 0) throw std::invalid_argument("shifted_fock: b must be >= 0");
  return SymMatrix(fock(sys, d).mat() - b * d.mat());
}

double shifted_bilinear_energy(const ElectronicSystem& sys, const DensityMatrix& d,
                               const DensityMatrix& dp, double b) {
  const double dist = (d.mat() - dp.mat()).norm();
  return bilinear_energy(sys, d, dp) + 0.5 * b * dist * dist;
}

ElectronicSystem hubbard_ring(int sites, double t_h, double u, int n_electrons,
                              Convention convention) {
  if (sites < 2) throw std::invalid_argument("hubbard_ring: need at least 2 sites");
  if (t_h <= 0) throw std::invalid_argument("hubbard_ring: hopping must be > 0");
  Matrix h = Matrix::Zero(sites, sites);
  for (int i = 0; i < sites; ++i) {
    const int j = (i + 1) % sites;
    h(i, j) = h(j, i) = -t_h;
  }
  EriTensor eri(sites);
  for (int i = 0; i < sites; ++i) eri.set(i, i, i, i, u);
  return make_system(SymMatrix(h), std::move(eri), n_electrons, convention);
}

ElectronicSystem random_system(std::uint64_t seed, int n_basis, int n_electrons,
                               Convention convention, double interaction_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix h = Matrix::Zero(n_basis, n_basis);
  for (int i = 0; i < n_basis; ++i)
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = unit(rng);
  EriTensor eri(n_basis);
  // one draw per canonical index class; 8-fold symmetry exact by construction
  for (int i = 0; i < n_basis; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (EriTensor::pair_index(i, j) < EriTensor::pair_index(k, l)) continue;
          eri.set(i, j, k, l, interaction_scale * unit(rng));
        }
  return make_system(SymMatrix(h), std::move(eri), n_electrons, convention);
}

std::pair<SymMatrix, EriTensor> lowdin_orthonormalize(const SymMatrix& h,
                                                      const EriTensor& eri,
                                                      const SymMatrix& s) {
  const int n = static_cast<int>(h.n());
  if (eri.n_basis() != n || s.n() != n)
    throw std::invalid_argument("lowdin_orthonormalize: dimension mismatch");
  const SymMatrix x = inverse_sqrt(s);  // throws if S is not SPD
  SymMatrix hp(x.mat() * h.mat() * x.mat());

  // staged four-index transform by X, one index at a time
  const int n2 = n * n;
  std::vector<double> t0(static_cast<std::size_t>(n2) * n2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t0[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = eri(i, j, k, l);

  auto transform_axis = [&](std::vector<double>& t, int axis) {
    std::vector<double> out(t.size(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            int idx[4] = {i, j, k, l};
            double acc = 0.0;
            for (int m = 0; m < n; ++m) {
              int src[4] = {i, j, k, l};
              src[axis] = m;
              acc += x(idx[axis], m) *
                     t[((static_cast<std::size_t>(src[0]) * n + src[1]) * n + src[2]) * n + src[3]];
            }
            out[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = acc;
          }
    t.swap(out);
  };
  for (int axis = 0; axis < 4; ++axis) transform_axis(t0, axis);

  EriTensor erip(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (EriTensor::pair_index(i, j) < EriTensor::pair_index(k, l)) continue;
          erip.set(i, j, k, l,
                   t0[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l]);
        }
  return {std::move(hp), std::move(erip)};
}

std::vector<std::pair<double, double>> energy_curve_probe(const ElectronicSystem& sys,
                                                          const DensityMatrix& d,
                                                          double t_max, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("energy_curve_probe: need >= 2 samples");
  const SymMatrix g = gradient_operator(sys, d.matrix());
  std::vector<std::pair<double, double>> out;
  out.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double t = t_max * static_cast<double>(i) / (n_samples - 1);
    out.emplace_back(t, energy(sys, geodesic_step(d, g, t)));
  }
  return out;
}

}  // namespace hfopt
