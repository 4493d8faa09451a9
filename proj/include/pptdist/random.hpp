#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "pptdist/states.hpp"

namespace pptdist {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

/// Haar unitary: QR of a complex Gaussian matrix with the phases of R's diagonal
/// moved into Q so the distribution is exactly invariant.
inline Matrix haar_unitary(Eigen::Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * identity(n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

inline Vector haar_vector(Eigen::Index n, Rng& rng) {
  Vector v = gaussian_matrix(n, 1, rng).col(0);
  return v / v.norm();
}

inline PureState haar_state(const BipartiteSpace& space, Rng& rng) {
  return PureState::normalized(haar_vector(static_cast<Eigen::Index>(space.total_dim()), rng), space);
}

/// Diagonal unitary with independent uniform phases.
inline Matrix random_phase_diagonal(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) d(k, k) = std::polar(1.0, u(rng));
  return d;
}

/// Probability vector drawn uniformly from the simplex, sorted descending.
inline std::vector<double> random_spectrum(int d, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<std::size_t>(d));
  double s = 0.0;
  for (auto& x : p) s += (x = e(rng));
  for (auto& x : p) x /= s;
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

inline Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

inline Matrix random_density_matrix(Eigen::Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// ⊗_f U_f with an independent Haar unitary on every factor.
inline Matrix random_local_unitary(const BipartiteSpace& space, Rng& rng) {
  Matrix u = identity(1);
  for (std::size_t f = 0; f < space.size(); ++f) u = kron(u, haar_unitary(space[f].dim, rng));
  return u;
}

inline PureState rotate_locally(const PureState& psi, Rng& rng) {
  return PureState::normalized(random_local_unitary(psi.space(), rng) * psi.vector(), psi.space());
}

}  // namespace pptdist
