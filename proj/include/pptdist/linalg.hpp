#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pptdist/error.hpp"
#include "pptdist/space.hpp"

namespace pptdist {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

/// ‖m‖∞ taken entrywise (largest modulus), the scale used by every relative tolerance here.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double tol_scale(const Matrix& m) { return std::max(1.0, max_abs(m)); }

inline bool is_hermitian(const Matrix& h, double tol = kHermitianTol) {
  if (h.rows() != h.cols()) return false;
  return max_abs(h - h.adjoint()) <= tol * tol_scale(h);
}

inline void require_hermitian(const Matrix& h, const char* what) {
  if (h.rows() != h.cols()) raise(ErrorCode::DimensionMismatch, std::string(what) + ": matrix is not square");
  if (!is_hermitian(h)) raise(ErrorCode::NonHermitian, std::string(what) + ": matrix is not Hermitian");
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // columns are the matching eigenvectors
};

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// a_pq, then applies the real Jacobi rotation that annihilates it.
inline HermitianEig hermitian_eigen(const Matrix& h) {
  require_hermitian(h, "hermitian_eigen");
  const Eigen::Index n = h.rows();
  Matrix a = (h + h.adjoint()) * 0.5;
  Matrix v = identity(n);

  const double frob = a.norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-12 * frob) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = std::conj(apq) / mag;  // e^{-i arg a_pq}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          const cplx new_kp = c * akp - s * phase * akq;
          const cplx new_kq = s * akp + c * phase * akq;
          a(k, p) = new_kp;
          a(p, k) = std::conj(new_kp);
          a(k, q) = new_kq;
          a(q, k) = std::conj(new_kq);
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * phase * vkq;
          v(k, q) = s * vkp + c * phase * vkq;
        }
      }
    }
  }
  if (!converged) raise(ErrorCode::NoConvergence, "Jacobi sweep cap exceeded");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEig out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

inline RealVector eigenvalues(const Matrix& h) { return hermitian_eigen(h).values; }

inline double min_eigenvalue(const Matrix& h) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eigen(h).values(0);
}

inline Matrix from_spectrum(const HermitianEig& eig, const RealVector& values) {
  return eig.vectors * values.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

/// PSD test relative to the matrix scale: min eigenvalue ≥ −tol·max(1, ‖h‖∞).
inline bool psd_check(const Matrix& h, double tol) {
  require_hermitian(h, "psd_check");
  if (h.rows() == 0) return true;
  return min_eigenvalue(h) >= -tol * tol_scale(h);
}

/// Clip negative eigenvalues.
inline Matrix psd_projection(const Matrix& h) {
  const auto eig = hermitian_eigen(h);
  return from_spectrum(eig, eig.values.cwiseMax(0.0));
}

/// |H| = sqrt(H†H) for Hermitian H.
inline Matrix matrix_abs(const Matrix& h) {
  const auto eig = hermitian_eigen(h);
  return from_spectrum(eig, eig.values.cwiseAbs());
}

/// Orthonormal basis (columns) of the eigenspace with eigenvalues above cutoff·max(1, ‖h‖∞).
inline Matrix support_basis(const Matrix& h, double cutoff = 1e-9) {
  const auto eig = hermitian_eigen(h);
  const double thr = cutoff * tol_scale(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = eig.values.size(); k-- > 0;)
    if (eig.values(k) > thr) keep.push_back(k);
  Matrix basis(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(keep[j]);
  return basis;
}

inline Matrix support_projector(const Matrix& h, double cutoff = 1e-9) {
  const Matrix basis = support_basis(h, cutoff);
  return basis * basis.adjoint();
}

inline Eigen::Index numerical_rank(const Matrix& h, double cutoff = 1e-9) { return support_basis(h, cutoff).cols(); }

struct SvdResult {
  Matrix u;        // rows × rows, unitary
  RealVector s;    // min(rows, cols) values, descending
  Matrix v;        // cols × cols, unitary
};

namespace detail {

/// Complete the first `filled` orthonormal columns of q to a unitary by Gram–Schmidt on basis vectors.
inline void complete_unitary(Matrix& q, Eigen::Index filled) {
  const Eigen::Index n = q.rows();
  Eigen::Index next = filled;
  for (Eigen::Index e = 0; e < n && next < q.cols(); ++e) {
    Vector cand = Vector::Zero(n);
    cand(e) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < next; ++j) cand -= q.col(j) * q.col(j).dot(cand);
    const double nrm = cand.norm();
    if (nrm > 1e-6) q.col(next++) = cand / nrm;
  }
}

}  // namespace detail

/// SVD through the eigen-decomposition of m†m; singular values are recomputed as ‖m v_i‖
/// so that small ones keep full absolute accuracy.
inline SvdResult svd(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const Matrix gram = m.adjoint() * m;
  const auto eig = hermitian_eigen((gram + gram.adjoint()) * 0.5);

  Matrix v(cols, cols);
  for (Eigen::Index k = 0; k < cols; ++k) v.col(k) = eig.vectors.col(cols - 1 - k);

  const Eigen::Index r = std::min(rows, cols);
  std::vector<double> sv(static_cast<std::size_t>(cols));
  for (Eigen::Index k = 0; k < cols; ++k) sv[static_cast<std::size_t>(k)] = (m * v.col(k)).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return sv[static_cast<std::size_t>(i)] > sv[static_cast<std::size_t>(j)];
  });
  Matrix vs(cols, cols);
  for (Eigen::Index k = 0; k < cols; ++k) vs.col(k) = v.col(order[static_cast<std::size_t>(k)]);

  SvdResult out{Matrix::Zero(rows, rows), RealVector::Zero(r), vs};
  for (Eigen::Index k = 0; k < r; ++k) out.s(k) = sv[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
  // Leading columns come from m v_i / s_i; columns for numerically zero singular values
  // are an arbitrary orthonormal completion.
  const double thr = 1e-13 * std::max(1.0, max_abs(m));
  Eigen::Index filled = 0;
  for (; filled < r && out.s(filled) > thr; ++filled) {
    Vector u = m * vs.col(filled) / out.s(filled);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < filled; ++j) u -= out.u.col(j) * out.u.col(j).dot(u);
    const double nrm = u.norm();
    if (nrm < 1e-6) break;
    out.u.col(filled) = u / nrm;
  }
  detail::complete_unitary(out.u, filled);
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline void require_operator_on(const Matrix& m, const BipartiteSpace& space, const char* what) {
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  if (m.rows() != d || m.cols() != d)
    raise(ErrorCode::DimensionMismatch, std::string(what) + ": operator does not match the space dimension");
}

/// Transpose every Alice factor: (|ij⟩⟨kl|)^Γ = |kj⟩⟨il| with i,k on Alice.
inline Matrix partial_transpose(const Matrix& m, const BipartiteSpace& space) {
  require_operator_on(m, space, "partial_transpose");
  const detail::MixedRadix radix(space.dims());
  const auto d = static_cast<std::size_t>(m.rows());
  const auto& factors = space.factors();
  Matrix out(m.rows(), m.cols());
  std::vector<int> rd, cd;
  for (std::size_t r = 0; r < d; ++r) {
    radix.split(r, rd);
    for (std::size_t c = 0; c < d; ++c) {
      radix.split(c, cd);
      std::vector<int> nr = rd, nc = cd;
      for (std::size_t f = 0; f < factors.size(); ++f)
        if (factors[f].side == Side::A) std::swap(nr[f], nc[f]);
      out(static_cast<Eigen::Index>(radix.join(nr)), static_cast<Eigen::Index>(radix.join(nc))) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// Trace out every factor whose index is not listed in keep. The result lives on the kept
/// factors in their original order.
inline Matrix partial_trace(const Matrix& m, const BipartiteSpace& space, const std::vector<int>& keep) {
  require_operator_on(m, space, "partial_trace");
  const auto nf = space.size();
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || static_cast<std::size_t>(k) >= nf) raise(ErrorCode::DimensionMismatch, "partial_trace: bad factor index");
    kept[static_cast<std::size_t>(k)] = true;
  }
  std::vector<int> kdims;
  for (std::size_t f = 0; f < nf; ++f)
    if (kept[f]) kdims.push_back(space[f].dim);
  const detail::MixedRadix full(space.dims());
  const detail::MixedRadix reduced(kdims);
  std::size_t kd = 1;
  for (int x : kdims) kd *= static_cast<std::size_t>(x);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<int> rd, cd, rk, ck;
  for (std::size_t r = 0; r < d; ++r) {
    full.split(r, rd);
    for (std::size_t c = 0; c < d; ++c) {
      full.split(c, cd);
      bool diag = true;
      rk.clear();
      ck.clear();
      for (std::size_t f = 0; f < nf; ++f) {
        if (kept[f]) {
          rk.push_back(rd[f]);
          ck.push_back(cd[f]);
        } else if (rd[f] != cd[f]) {
          diag = false;
          break;
        }
      }
      if (!diag) continue;
      out(static_cast<Eigen::Index>(reduced.join(rk)), static_cast<Eigen::Index>(reduced.join(ck))) +=
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// Reorder tensor factors of a vector: output factor j is input factor perm[j].
inline Vector permute_factors(const Vector& v, const std::vector<int>& dims, const std::vector<int>& perm) {
  std::vector<int> out_dims;
  for (int p : perm) out_dims.push_back(dims.at(static_cast<std::size_t>(p)));
  const detail::MixedRadix in(dims), out(out_dims);
  Vector res(v.size());
  std::vector<int> digits, od(perm.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    in.split(static_cast<std::size_t>(i), digits);
    for (std::size_t j = 0; j < perm.size(); ++j) od[j] = digits[static_cast<std::size_t>(perm[j])];
    res(static_cast<Eigen::Index>(out.join(od))) = v(i);
  }
  return res;
}

/// Same reordering applied to both indices of an operator.
inline Matrix permute_factors(const Matrix& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  std::vector<int> out_dims;
  for (int p : perm) out_dims.push_back(dims.at(static_cast<std::size_t>(p)));
  const detail::MixedRadix in(dims), out(out_dims);
  const auto n = m.rows();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(n));
  std::vector<int> digits, od(perm.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    in.split(static_cast<std::size_t>(i), digits);
    for (std::size_t j = 0; j < perm.size(); ++j) od[j] = digits[static_cast<std::size_t>(perm[j])];
    map[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(out.join(od));
  }
  Matrix res(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) res(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = m(r, c);
  return res;
}

inline double real_trace_product(const Matrix& a, const Matrix& b) { return (a.cwiseProduct(b.transpose())).sum().real(); }

}  // namespace pptdist
