#pragma once

#include <vector>

#include "pptdist/sdp.hpp"

namespace pptdist {

inline constexpr int kMaxCopies = 12;
/// Largest copy count solved over the full 2^m-variable program; above it the
/// copy-permutation-symmetric program is used.
inline constexpr int kFullLpMaxCopies = 8;

/// Eigenvalue of P_s^Γ on the ±-eigenspace of SWAP, for P_1 = Φ_d and P_2 = I − Φ_d.
inline double gamma_eigenvalue(int s, int v, int d) {
  if (s != 1 && s != 2) raise(ErrorCode::BadIndexing, "projector index must be 1 or 2");
  if (v != 1 && v != -1) raise(ErrorCode::BadIndexing, "sign index must be +1 or -1");
  if (d < 2) raise(ErrorCode::BadDimension, "local dimension must be >= 2");
  const double nu = v / static_cast<double>(d);
  return s == 1 ? nu : 1.0 - nu;
}

/// Pattern index bits, most significant first: 0 ↔ s = 1 (or v = +), 1 ↔ s = 2 (or v = −).
struct ReducedLp {
  int d = 2;
  int m = 1;
  Eigen::MatrixXd spectral;  // (v, s) ↦ Π_i ν(s_i, v_i)

  Eigen::Index size() const { return spectral.cols(); }
};

inline ReducedLp reduced_lp(int d, int m) {
  if (d < 2) raise(ErrorCode::BadDimension, "local dimension must be >= 2");
  if (m < 1) raise(ErrorCode::BadRange, "copy count must be >= 1");
  if (m > kMaxCopies) raise(ErrorCode::TooLarge, "copy count exceeds 12");
  Eigen::MatrixXd single(2, 2);
  for (int v = 0; v < 2; ++v)
    for (int s = 0; s < 2; ++s) single(v, s) = gamma_eigenvalue(s + 1, v == 0 ? 1 : -1, d);
  Eigen::MatrixXd n = single;
  for (int i = 1; i < m; ++i) {
    Eigen::MatrixXd next(n.rows() * 2, n.cols() * 2);
    for (Eigen::Index r = 0; r < n.rows(); ++r)
      for (Eigen::Index c = 0; c < n.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = n(r, c) * single;
    n = std::move(next);
  }
  return {d, m, std::move(n)};
}

struct MulticopyResult {
  double value = 0.0;
  LpStatus status = LpStatus::Infeasible;
  int pivots = 0;
  bool symmetric = false;
};

namespace detail {

/// maximize x_top subject to 0 ≤ x ≤ 1, x_zero = 0 and K x ≥ 0, in equality form with
/// slack and surplus columns.
inline MulticopyResult box_lp(const Eigen::MatrixXd& k, Eigen::Index top, Eigen::Index zero) {
  const Eigen::Index n = k.cols(), rows = k.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1 + rows, 2 * n + rows);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows()), c = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    a(i, n + i) = 1.0;
    b(i) = 1.0;
  }
  a(n, zero) = 1.0;
  a.block(n + 1, 0, rows, n) = k;
  a.block(n + 1, 2 * n, rows, rows) = -Eigen::MatrixXd::Identity(rows, rows);
  c(top) = 1.0;
  const auto lp = solve_lp(a, b, c);
  return {lp.objective, lp.status, lp.pivots, false};
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace detail

/// Full program over all 2^m coefficients.
inline MulticopyResult solve_full_multicopy_lp(int d, int m) {
  const auto lp = reduced_lp(d, m);
  return detail::box_lp(lp.spectral, 0, lp.size() - 1);
}

/// Program restricted to coefficients depending only on the number of P_1 factors;
/// rows are indexed by the number of minus signs.
inline MulticopyResult solve_symmetric_multicopy_lp(int d, int m) {
  if (d < 2) raise(ErrorCode::BadDimension, "local dimension must be >= 2");
  if (m < 1) raise(ErrorCode::BadRange, "copy count must be >= 1");
  if (m > kMaxCopies) raise(ErrorCode::TooLarge, "copy count exceeds 12");
  const double p1 = gamma_eigenvalue(1, 1, d), m1 = gamma_eigenvalue(1, -1, d);
  const double p2 = gamma_eigenvalue(2, 1, d), m2 = gamma_eigenvalue(2, -1, d);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int j = 0; j <= m; ++j)      // minus signs
    for (int ones = 0; ones <= m; ++ones)  // P_1 factors
      for (int a = 0; a <= std::min(j, ones); ++a) {
        const int plus_ones = ones - a;
        if (plus_ones > m - j) continue;
        k(j, ones) += detail::binomial(j, a) * detail::binomial(m - j, plus_ones) * std::pow(m1, a) *
                      std::pow(m2, j - a) * std::pow(p1, plus_ones) * std::pow(p2, m - j - plus_ones);
      }
  auto out = detail::box_lp(k, m, 0);
  out.symmetric = true;
  return out;
}

inline MulticopyResult solve_multicopy_lp(int d, int m) {
  return m <= kFullLpMaxCopies ? solve_full_multicopy_lp(d, m) : solve_symmetric_multicopy_lp(d, m);
}

/// Largest tr(E Φ_d^{⊗m}) over PPT effects E with tr(E (complement)^{⊗m}) = 0.
inline double unambiguous_multicopy_value(int d, int m) {
  const auto r = solve_multicopy_lp(d, m);
  if (r.status != LpStatus::Optimal) raise(ErrorCode::NoConvergence, "multicopy program did not reach an optimum");
  return r.value;
}

/// Whether Σ_s c_s ⊗_i P_{s_i}^Γ is PSD, with c_(1…1) = 1 and the all-2 term left out.
inline bool multicopy_witness_check(int d, int m, const std::vector<double>& coefficients) {
  const auto lp = reduced_lp(d, m);
  if (static_cast<Eigen::Index>(coefficients.size()) != lp.size())
    raise(ErrorCode::BadIndexing, "need one coefficient per pattern in {1,2}^m");
  for (double c : coefficients)
    if (c < 0.0) raise(ErrorCode::BadIndexing, "coefficients must be nonnegative");
  if (std::abs(coefficients.front() - 1.0) > 1e-12) raise(ErrorCode::BadIndexing, "coefficient of (1,...,1) must be 1");
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coefficients.data(), lp.size());
  c(lp.size() - 1) = 0.0;
  return (lp.spectral * c).minCoeff() >= -1e-10;
}

}  // namespace pptdist
