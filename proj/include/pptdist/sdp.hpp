#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "pptdist/linalg.hpp"

namespace pptdist {

/// One upper-triangular coefficient (row ≤ col); the Hermitian mirror is implied.
/// Entries given with row > col are stored as their conjugate mirror.
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  cplx value{0.0, 0.0};
};

using SdpCoefficient = std::vector<SdpEntry>;

struct SdpConstraint {
  SdpCoefficient coefficient;
  double rhs = 0.0;
};

/// maximize Σ_b tr(C_b X_b) subject to Σ_b tr(A_ib X_b) = rhs_i and X_b ⪰ 0.
/// The dual is minimize Σ_i rhs_i y_i subject to Σ_i y_i A_i − C ⪰ 0.
struct SdpProblem {
  std::vector<int> blocks;
  SdpCoefficient objective;
  std::vector<SdpConstraint> constraints;

  /// Appends the upper triangle of a dense Hermitian matrix, skipping entries below drop.
  static void add_dense(SdpCoefficient& coef, int block, const Matrix& h, double drop = 0.0) {
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      for (Eigen::Index r = 0; r <= c; ++r)
        if (std::abs(h(r, c)) > drop) coef.push_back({block, static_cast<int>(r), static_cast<int>(c), h(r, c)});
  }

  /// Dense Hermitian matrix of one block of a coefficient.
  Matrix dense_block(const SdpCoefficient& coef, int block) const {
    const int n = blocks.at(static_cast<std::size_t>(block));
    Matrix out = Matrix::Zero(n, n);
    for (const auto& e : coef) {
      if (e.block != block) continue;
      int r = e.row, c = e.col;
      cplx v = e.value;
      if (r > c) {
        std::swap(r, c);
        v = std::conj(v);
      }
      out(r, c) += v;
      if (r != c) out(c, r) += std::conj(v);
    }
    return out;
  }

  int total_dim() const {
    int s = 0;
    for (int b : blocks) s += b;
    return s;
  }
};

enum class SdpStatus { Optimal, Infeasible, DualInfeasible, Indeterminate };

inline std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::DualInfeasible: return "DualInfeasible";
    case SdpStatus::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

struct SdpIterate {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double complementarity = 0.0;  // ⟨X, Z⟩ / τ²
  double infeasibility_term = 0.0;  // (⟨r_d, X⟩ − yᵀ r_p) / τ²
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double tau = 1.0;
  double kappa = 1.0;
  double step = 0.0;
};

struct SdpOptions {
  double gap_tol = 1e-9;
  double feas_tol = 1e-9;
  int max_iter = 200;
  /// Looser tolerance accepted when the iteration stalls or hits the cap.
  double accept_tol = 1e-7;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::Indeterminate;
  std::vector<Matrix> primal;      // X_b, Hermitian
  std::vector<Matrix> dual_slack;  // Z_b = Σ y_i A_ib − C_b
  /// Optimal: the y of the dual. Infeasible: a Farkas ray with Σ y_i rhs_i = 1
  /// and Σ y_i A_i ⪯ 0.
  std::vector<double> dual_multipliers;
  double objective = 0.0;       // primal objective
  double dual_objective = 0.0;
  double gap = 0.0;             // |primal − dual objective|
  double primal_residual = 0.0; // max_i |A_i(X) − b_i| / (1 + |b_i|)
  double dual_residual = 0.0;   // ‖Σ y A − C − Z‖_F / (1 + ‖C‖_F)
  int iterations = 0;
  std::vector<SdpIterate> history;
};

inline constexpr int kMaxSdpDim = 600;

namespace detail {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Blocks = std::vector<RMat>;

struct RealBlock {
  int hdim = 0;       // Hermitian dimension
  int dim = 0;        // real symmetric dimension (2·hdim when embedded)
  bool embedded = false;
};

struct NzEntry {
  int r, c;
  double a;
};

/// Real symmetric form of the problem. Complex blocks use the embedding
/// X ↦ [[Re X, −Im X], [Im X, Re X]] with coefficients halved so inner products agree.
struct RealSdp {
  std::vector<RealBlock> blocks;
  std::vector<SpRow> a;  // per block: m × dim², column-major vec index c·dim + r
  Blocks c;
  RVec b;
  int m = 0;
  int total_real_dim = 0;
  // per block: constraint indices that touch it and their entries
  std::vector<std::vector<int>> touching;
  std::vector<std::vector<std::vector<NzEntry>>> entries;
};

inline void normalize_entry(SdpEntry& e) {
  if (e.row > e.col) {
    std::swap(e.row, e.col);
    e.value = std::conj(e.value);
  }
}

inline void validate(const SdpProblem& p) {
  if (p.blocks.empty()) raise(ErrorCode::IllPosed, "SDP needs at least one block");
  for (int n : p.blocks)
    if (n < 1) raise(ErrorCode::BadDimension, "SDP block dimension must be positive");
  if (p.total_dim() > kMaxSdpDim) raise(ErrorCode::TooLarge, "SDP total variable dimension exceeds 600");
  if (p.constraints.empty()) raise(ErrorCode::IllPosed, "SDP needs at least one constraint");
  auto check = [&](const SdpCoefficient& coef) {
    for (auto e : coef) {
      if (e.block < 0 || static_cast<std::size_t>(e.block) >= p.blocks.size())
        raise(ErrorCode::BadIndex, "SDP entry block out of range");
      const int n = p.blocks[static_cast<std::size_t>(e.block)];
      if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) raise(ErrorCode::BadIndex, "SDP entry index out of range");
      if (e.row == e.col && std::abs(e.value.imag()) > kHermitianTol * std::max(1.0, std::abs(e.value)))
        raise(ErrorCode::NonHermitian, "diagonal SDP coefficient must be real");
    }
  };
  check(p.objective);
  for (const auto& con : p.constraints) check(con.coefficient);
}

/// Adds the real-form entries of one Hermitian coefficient to per-block triplet lists.
inline void push_real(const SdpEntry& raw, const std::vector<RealBlock>& blocks, int row_index,
                      std::vector<std::vector<Eigen::Triplet<double>>>& trip) {
  SdpEntry e = raw;
  normalize_entry(e);
  const auto& blk = blocks[static_cast<std::size_t>(e.block)];
  auto& t = trip[static_cast<std::size_t>(e.block)];
  const int d = blk.dim;
  auto put = [&](int r, int c, double v) {
    if (v != 0.0) t.emplace_back(row_index, c * d + r, v);
  };
  const int r = e.row, c = e.col;
  if (!blk.embedded) {
    put(r, c, e.value.real());
    if (r != c) put(c, r, e.value.real());
    return;
  }
  const int n = blk.hdim;
  const double re = 0.5 * e.value.real(), im = 0.5 * e.value.imag();
  if (r == c) {
    put(r, r, re);
    put(n + r, n + r, re);
    return;
  }
  put(r, c, re);
  put(c, r, re);
  put(n + r, n + c, re);
  put(n + c, n + r, re);
  put(r, n + c, -im);
  put(n + c, r, -im);
  put(c, n + r, im);
  put(n + r, c, im);
}

inline RealSdp to_real(const SdpProblem& p) {
  RealSdp out;
  const auto nb = p.blocks.size();
  std::vector<bool> complex_block(nb, false);
  auto scan = [&](const SdpCoefficient& coef) {
    for (const auto& e : coef)
      if (e.row != e.col && e.value.imag() != 0.0) complex_block[static_cast<std::size_t>(e.block)] = true;
  };
  scan(p.objective);
  for (const auto& con : p.constraints) scan(con.coefficient);
  for (std::size_t b = 0; b < nb; ++b) {
    RealBlock blk;
    blk.hdim = p.blocks[b];
    blk.embedded = complex_block[b];
    blk.dim = blk.embedded ? 2 * blk.hdim : blk.hdim;
    out.total_real_dim += blk.dim;
    out.blocks.push_back(blk);
  }
  out.m = static_cast<int>(p.constraints.size());
  out.b.resize(out.m);

  std::vector<std::vector<Eigen::Triplet<double>>> trip(nb);
  for (int i = 0; i < out.m; ++i) {
    out.b(i) = p.constraints[static_cast<std::size_t>(i)].rhs;
    for (const auto& e : p.constraints[static_cast<std::size_t>(i)].coefficient) push_real(e, out.blocks, i, trip);
  }
  std::vector<std::vector<Eigen::Triplet<double>>> ctrip(nb);
  for (const auto& e : p.objective) push_real(e, out.blocks, 0, ctrip);

  out.a.resize(nb);
  out.c.resize(nb);
  out.touching.resize(nb);
  out.entries.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const int d = out.blocks[b].dim;
    out.a[b].resize(out.m, static_cast<Eigen::Index>(d) * d);
    out.a[b].setFromTriplets(trip[b].begin(), trip[b].end());
    out.a[b].prune(0.0);
    out.a[b].makeCompressed();
    SpRow cs(1, static_cast<Eigen::Index>(d) * d);
    cs.setFromTriplets(ctrip[b].begin(), ctrip[b].end());
    out.c[b] = RMat::Zero(d, d);
    for (SpRow::InnerIterator it(cs, 0); it; ++it) out.c[b](it.col() % d, it.col() / d) = it.value();
    for (int i = 0; i < out.m; ++i) {
      std::vector<NzEntry> row;
      for (SpRow::InnerIterator it(out.a[b], i); it; ++it)
        row.push_back({static_cast<int>(it.col() % d), static_cast<int>(it.col() / d), it.value()});
      if (!row.empty()) {
        out.touching[b].push_back(i);
        out.entries[b].push_back(std::move(row));
      }
    }
  }
  return out;
}

inline double inner(const Blocks& s, const Blocks& t) {
  double v = 0.0;
  for (std::size_t b = 0; b < s.size(); ++b) v += s[b].cwiseProduct(t[b]).sum();
  return v;
}

inline RVec apply_a(const RealSdp& p, const Blocks& s) {
  RVec out = RVec::Zero(p.m);
  for (std::size_t b = 0; b < s.size(); ++b) {
    const Eigen::Map<const RVec> v(s[b].data(), s[b].size());
    out += p.a[b] * v;
  }
  return out;
}

inline Blocks apply_adjoint(const RealSdp& p, const RVec& y) {
  Blocks out(p.blocks.size());
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const int d = p.blocks[b].dim;
    RVec v = p.a[b].transpose() * y;
    out[b] = Eigen::Map<RMat>(v.data(), d, d);
  }
  return out;
}

inline Blocks axpy(const Blocks& x, double alpha, const Blocks& dx) {
  Blocks out(x.size());
  for (std::size_t b = 0; b < x.size(); ++b) out[b] = x[b] + alpha * dx[b];
  return out;
}

inline double frob(const Blocks& s) {
  double v = 0.0;
  for (const auto& m : s) v += m.squaredNorm();
  return std::sqrt(v);
}

/// Upfront rank test of the constraint system: the normalized Gram matrix of the
/// constraint coefficients must be nonsingular.
inline void check_constraint_rank(const RealSdp& p) {
  RMat gram = RMat::Zero(p.m, p.m);
  for (const auto& a : p.a) {
    const SpRow g = a * SpRow(a.transpose());
    gram += RMat(g);
  }
  RVec scale(p.m);
  for (int i = 0; i < p.m; ++i) {
    if (gram(i, i) <= 0.0) raise(ErrorCode::IllPosed, "constraint " + std::to_string(i) + " has a zero coefficient");
    scale(i) = 1.0 / std::sqrt(gram(i, i));
  }
  const RMat normalized = scale.asDiagonal() * gram * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMat> es(normalized, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < 1e-11 * std::max(1.0, es.eigenvalues()(p.m - 1)))
    raise(ErrorCode::IllPosed, "constraint coefficients are linearly dependent");
}

/// Largest α with x + α·dx ⪰ 0, given a Cholesky factor of x.
inline double max_step(const Eigen::LLT<RMat>& chol, const RMat& dx) {
  RMat s = chol.matrixL().solve(dx);
  s = chol.matrixL().solve(s.transpose()).transpose();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

inline double max_eigenvalue(const RMat& s) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

inline double min_eigen_real(const RMat& s) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Schur matrix M_ij = Σ_b tr(A_ib X_b A_jb Z_b⁻¹).
inline RMat schur_matrix(const RealSdp& p, const Blocks& x, const Blocks& zinv) {
  RMat mat = RMat::Zero(p.m, p.m);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& rows = p.touching[b];
    const auto k = static_cast<Eigen::Index>(rows.size());
    if (k == 0) continue;
    const double d = p.blocks[b].dim;
    double nnz = 0.0;
    for (const auto& e : p.entries[b]) nnz += static_cast<double>(e.size());
    const double sparse_cost = nnz * nnz / 2.0;
    const double dense_cost = static_cast<double>(k) * 2.0 * d * d * d + static_cast<double>(k) * k * d * d;
    const RMat& xb = x[b];
    const RMat& zb = zinv[b];
    if (sparse_cost <= dense_cost) {
      for (Eigen::Index ii = 0; ii < k; ++ii) {
        const auto& ei = p.entries[b][static_cast<std::size_t>(ii)];
        for (Eigen::Index jj = ii; jj < k; ++jj) {
          const auto& ej = p.entries[b][static_cast<std::size_t>(jj)];
          double v = 0.0;
          for (const auto& s : ei)
            for (const auto& t : ej) v += s.a * t.a * xb(s.c, t.r) * zb(t.c, s.r);
          const int gi = rows[static_cast<std::size_t>(ii)], gj = rows[static_cast<std::size_t>(jj)];
          mat(gi, gj) += v;
          if (gi != gj) mat(gj, gi) += v;
        }
      }
    } else {
      const int di = p.blocks[b].dim;
      const Eigen::Index len = static_cast<Eigen::Index>(di) * di;
      RMat am(k, len), gm(k, len);
      for (Eigen::Index jj = 0; jj < k; ++jj) {
        RMat aj = RMat::Zero(di, di);
        for (const auto& t : p.entries[b][static_cast<std::size_t>(jj)]) aj(t.r, t.c) = t.a;
        const RMat g = xb * aj * zb;
        am.row(jj) = Eigen::Map<const RVec>(aj.data(), len).transpose();
        gm.row(jj) = Eigen::Map<const RVec>(g.data(), len).transpose();
      }
      const RMat sub = am * gm.transpose();
      for (Eigen::Index ii = 0; ii < k; ++ii)
        for (Eigen::Index jj = 0; jj < k; ++jj)
          mat(rows[static_cast<std::size_t>(ii)], rows[static_cast<std::size_t>(jj)]) += sub(ii, jj);
    }
  }
  return 0.5 * (mat + mat.transpose());
}

inline RMat sym(const RMat& m) { return 0.5 * (m + m.transpose()); }

inline Matrix to_hermitian(const RMat& x, const RealBlock& blk) {
  if (!blk.embedded) return x.cast<cplx>();
  const int n = blk.hdim;
  const RMat re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const RMat im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  Matrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return (out + out.adjoint()) * 0.5;
}

struct Direction {
  Blocks dx, dz;
  RVec dy;
  double dtau = 0.0, dkappa = 0.0;
};

}  // namespace detail

/// Primal-dual interior point method on the homogeneous self-dual embedding with the
/// HKM direction and Mehrotra predictor-corrector steps.
inline SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {}) {
  using namespace detail;
  validate(problem);
  const RealSdp p = to_real(problem);
  check_constraint_rank(p);

  const std::size_t nb = p.blocks.size();
  Blocks x(nb), z(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    x[b] = RMat::Identity(p.blocks[b].dim, p.blocks[b].dim);
    z[b] = x[b];
  }
  RVec y = RVec::Zero(p.m);
  double tau = 1.0, kappa = 1.0;
  const double nu = static_cast<double>(p.total_real_dim) + 1.0;
  const double norm_c = frob(p.c);

  SdpSolution sol;

  auto measure = [&](SdpIterate& it) {
    const RVec ax = apply_a(p, x);
    double pres = 0.0;
    for (int i = 0; i < p.m; ++i) pres = std::max(pres, std::abs(ax(i) / tau - p.b(i)) / (1.0 + std::abs(p.b(i))));
    Blocks rd = apply_adjoint(p, y);
    for (std::size_t b = 0; b < nb; ++b) rd[b] = (rd[b] - z[b]) / tau - p.c[b];
    it.primal_residual = pres;
    it.dual_residual = frob(rd) / (1.0 + norm_c);
    it.primal_objective = inner(p.c, x) / tau;
    it.dual_objective = p.b.dot(y) / tau;
    it.complementarity = inner(x, z) / (tau * tau);
    it.tau = tau;
    it.kappa = kappa;
  };

  auto converged = [&](const SdpIterate& it, double feas, double gap_tol) {
    const double gap = std::abs(it.primal_objective - it.dual_objective);
    return it.primal_residual <= feas && it.dual_residual <= feas &&
           gap <= gap_tol * (1.0 + std::abs(it.primal_objective));
  };

  // Farkas ray for primal infeasibility: y' = −y/|bᵀy| with Σ y' A ⪯ 0.
  auto primal_infeasible = [&]() -> bool {
    const double by = p.b.dot(y);
    if (!(by < 0.0)) return false;
    const RVec ray = -y / std::abs(by);
    const Blocks s = apply_adjoint(p, ray);
    for (const auto& sb : s)
      if (max_eigenvalue(sb) > 1e-8) return false;
    return true;
  };

  // Improving ray for the primal: X ⪰ 0, A(X) ≈ 0, ⟨C, X⟩ > 0.
  auto dual_infeasible = [&]() -> bool {
    const double cx = inner(p.c, x);
    if (!(cx > 0.0)) return false;
    const RVec ax = apply_a(p, x) / cx;
    return ax.lpNorm<Eigen::Infinity>() <= 1e-8;
  };

  auto finish = [&](SdpStatus status) {
    sol.status = status;
    sol.primal.clear();
    sol.dual_slack.clear();
    const double inv = status == SdpStatus::Optimal || status == SdpStatus::Indeterminate ? 1.0 / tau : 1.0;
    for (std::size_t b = 0; b < nb; ++b) {
      sol.primal.push_back(to_hermitian(x[b] * inv, p.blocks[b]));
      sol.dual_slack.push_back(to_hermitian(z[b] * inv, p.blocks[b]));
    }
    if (status == SdpStatus::Infeasible) {
      const RVec ray = -y / std::abs(p.b.dot(y));
      sol.dual_multipliers.assign(ray.data(), ray.data() + ray.size());
    } else {
      const RVec yy = y * inv;
      sol.dual_multipliers.assign(yy.data(), yy.data() + yy.size());
    }
    SdpIterate it;
    measure(it);
    sol.objective = it.primal_objective;
    sol.dual_objective = it.dual_objective;
    sol.gap = std::abs(it.primal_objective - it.dual_objective);
    sol.primal_residual = it.primal_residual;
    sol.dual_residual = it.dual_residual;
    return sol;
  };

  int stall = 0;
  double last_mu = std::numeric_limits<double>::infinity();
  // Best iterate seen so far, used when the method stalls short of the target.
  struct Snapshot {
    Blocks x, z;
    RVec y;
    double tau = 1.0, kappa = 1.0;
    double merit = std::numeric_limits<double>::infinity();
  } best;
  auto merit_of = [&](const SdpIterate& it) {
    const double gap = std::abs(it.primal_objective - it.dual_objective) / (1.0 + std::abs(it.primal_objective));
    return std::max({it.primal_residual, it.dual_residual, gap});
  };
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    sol.iterations = iter;
    SdpIterate it;
    it.iteration = iter;
    measure(it);

    const RVec rp = p.b * tau - apply_a(p, x);
    Blocks rd = apply_adjoint(p, y);
    for (std::size_t b = 0; b < nb; ++b) rd[b] = p.c[b] * tau + z[b] - rd[b];
    const double rg = kappa - inner(p.c, x) + p.b.dot(y);
    const double mu = (inner(x, z) + tau * kappa) / nu;
    it.infeasibility_term = (inner(rd, x) - y.dot(rp)) / (tau * tau);
    sol.history.push_back(it);
    if (const double mrt = merit_of(it); mrt < best.merit) best = {x, z, y, tau, kappa, mrt};

    if (converged(it, opts.feas_tol, opts.gap_tol)) return finish(SdpStatus::Optimal);
    if (tau < 1e-2 * kappa) {
      if (primal_infeasible()) return finish(SdpStatus::Infeasible);
      if (dual_infeasible()) return finish(SdpStatus::DualInfeasible);
    }
    if (iter == opts.max_iter) break;

    // Factorizations
    std::vector<Eigen::LLT<RMat>> xchol(nb), zchol(nb);
    Blocks zinv(nb);
    bool broken = false;
    for (std::size_t b = 0; b < nb && !broken; ++b) {
      xchol[b].compute(x[b]);
      zchol[b].compute(z[b]);
      if (xchol[b].info() != Eigen::Success || zchol[b].info() != Eigen::Success) {
        broken = true;
        break;
      }
      zinv[b] = zchol[b].solve(RMat::Identity(z[b].rows(), z[b].cols()));
      zinv[b] = sym(zinv[b]);
    }
    if (broken) break;

    const RMat schur = schur_matrix(p, x, zinv);
    Eigen::LLT<RMat> mchol(schur);
    Eigen::LDLT<RMat> mldlt;
    const bool use_llt = mchol.info() == Eigen::Success;
    if (!use_llt) {
      mldlt.compute(schur);
      if (mldlt.info() != Eigen::Success) break;
    }
    auto msolve = [&](const RVec& r) -> RVec {
      auto raw = [&](const RVec& v) -> RVec { return use_llt ? RVec(mchol.solve(v)) : RVec(mldlt.solve(v)); };
      RVec sol_v = raw(r);
      sol_v += raw(r - schur * sol_v);  // one refinement step
      return sol_v;
    };

    Blocks xczi(nb), xrdzi(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      xczi[b] = x[b] * p.c[b] * zinv[b];
      xrdzi[b] = x[b] * rd[b] * zinv[b];
    }
    const RVec u = apply_a(p, xczi);
    const double w = inner(p.c, xczi);
    const RVec ad = apply_a(p, xrdzi);
    const double cd = inner(p.c, xrdzi);
    const RVec q = msolve(p.b - u);
    const RVec bu = p.b + u;
    const double denom = bu.dot(q) + w + kappa / tau;

    auto direction = [&](double sigma, double eta, const Direction* corr) {
      Direction dir;
      Blocks rczi(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        rczi[b] = sigma * mu * zinv[b] - x[b];
        if (corr) rczi[b] -= corr->dx[b] * corr->dz[b] * zinv[b];
      }
      double rct = sigma * mu - tau * kappa;
      if (corr) rct -= corr->dtau * corr->dkappa;
      const RVec h = apply_a(p, rczi) + eta * ad - eta * rp;
      const double g = -eta * rg + inner(p.c, rczi) + eta * cd - rct / tau;
      const RVec pv = msolve(h);
      dir.dtau = (bu.dot(pv) - g) / denom;
      dir.dy = pv - q * dir.dtau;
      dir.dz = apply_adjoint(p, dir.dy);
      dir.dx.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        dir.dz[b] = dir.dz[b] - p.c[b] * dir.dtau - eta * rd[b];
        dir.dx[b] = sym(rczi[b] - x[b] * dir.dz[b] * zinv[b]);
      }
      dir.dkappa = (rct - kappa * dir.dtau) / tau;
      return dir;
    };

    auto step_length = [&](const Direction& dir) {
      double a = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < nb; ++b) {
        a = std::min(a, max_step(xchol[b], dir.dx[b]));
        a = std::min(a, max_step(zchol[b], dir.dz[b]));
      }
      if (dir.dtau < 0) a = std::min(a, -tau / dir.dtau);
      if (dir.dkappa < 0) a = std::min(a, -kappa / dir.dkappa);
      return a;
    };

    const Direction pred = direction(0.0, 1.0, nullptr);
    const double alpha_aff = std::min(1.0, step_length(pred));
    const Blocks xa = axpy(x, alpha_aff, pred.dx), za = axpy(z, alpha_aff, pred.dz);
    const double mu_aff =
        (inner(xa, za) + (tau + alpha_aff * pred.dtau) * (kappa + alpha_aff * pred.dkappa)) / nu;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    const Direction dir = direction(sigma, 1.0 - sigma, &pred);
    const double alpha = std::min(1.0, 0.95 * step_length(dir));
    sol.history.back().step = alpha;
    if (!(alpha > 1e-12)) break;

    x = axpy(x, alpha, dir.dx);
    z = axpy(z, alpha, dir.dz);
    for (std::size_t b = 0; b < nb; ++b) {
      x[b] = sym(x[b]);
      z[b] = sym(z[b]);
    }
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;

    // Keep the embedding scale bounded; the homogeneous system is invariant.
    const double scale = std::max(tau, kappa);
    if (scale > 1e8 || scale < 1e-8) {
      for (std::size_t b = 0; b < nb; ++b) {
        x[b] /= scale;
        z[b] /= scale;
      }
      y /= scale;
      tau /= scale;
      kappa /= scale;
    }

    const double new_mu = (inner(x, z) + tau * kappa) / nu;
    if (new_mu > 0.9 * last_mu && alpha < 1e-3) {
      if (++stall >= 5) break;
    } else {
      stall = 0;
    }
    last_mu = new_mu;
  }

  SdpIterate it;
  measure(it);
  if (converged(it, opts.accept_tol, opts.accept_tol)) return finish(SdpStatus::Optimal);
  if (primal_infeasible()) return finish(SdpStatus::Infeasible);
  if (dual_infeasible()) return finish(SdpStatus::DualInfeasible);
  if (std::isfinite(best.merit)) {
    x = best.x;
    z = best.z;
    y = best.y;
    tau = best.tau;
    kappa = best.kappa;
    measure(it);
    if (converged(it, opts.accept_tol, opts.accept_tol)) return finish(SdpStatus::Optimal);
  }
  if (primal_infeasible()) return finish(SdpStatus::Infeasible);
  if (dual_infeasible()) return finish(SdpStatus::DualInfeasible);
  return finish(SdpStatus::Indeterminate);
}

// ---------------------------------------------------------------------------
// Dense linear programming

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

namespace detail {

/// Tableau simplex with Bland's rule. Rows 0..m−1 are constraints, the last row holds
/// reduced costs of the current objective, the last column the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  /// Returns false when unbounded.
  bool optimize(int allowed_cols, int& pivots) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index rhs = t_.cols() - 1;
    constexpr double eps = 1e-11;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j)
        if (t_(m, j) < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a > eps) {
          const double ratio = t_(i, rhs) / a;
          if (leave < 0 || ratio < best - 1e-13 ||
              (std::abs(ratio - best) <= 1e-13 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = static_cast<int>(i);
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Eigen::MatrixXd& table() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace detail

/// Two-phase dense simplex for maximize cᵀx subject to A x = b, x ≥ 0.
inline LpSolution solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n) raise(ErrorCode::DimensionMismatch, "LP data shapes disagree");
  // Phase one: artificials on every row, rows sign-normalized so b ≥ 0.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b(i) < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = s * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = s * b(i);
    basis[static_cast<std::size_t>(i)] = static_cast<int>(n + i);
  }
  // Phase-one objective: minimize Σ artificials, i.e. reduced costs −Σ rows.
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) t(m, n + i) = 0.0;

  detail::Tableau tab(std::move(t), std::move(basis));
  LpSolution out;
  tab.optimize(static_cast<int>(n + m), out.pivots);
  auto& tt = tab.table();
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  if (-tt(m, n + m) > 1e-9 * scale) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  // Drive remaining artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tt(i, j)) > 1e-9) {
        tab.pivot(static_cast<int>(i), static_cast<int>(j));
        break;
      }
    }
  }
  // Phase two objective row: reduced costs −c, then eliminate basic columns.
  tt.row(m).setZero();
  tt.row(m).head(n) = -c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const int bcol = tab.basis()[static_cast<std::size_t>(i)];
    if (bcol < n && tt(m, bcol) != 0.0) tt.row(m) -= tt(m, bcol) * tt.row(i);
  }
  // Artificials stuck in the basis sit on redundant rows; keep them out of pricing.
  if (!tab.optimize(static_cast<int>(n), out.pivots)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int bcol = tab.basis()[static_cast<std::size_t>(i)];
    if (bcol < n) out.x(bcol) = tt(i, n + m);
  }
  out.objective = c.dot(out.x);
  return out;
}

/// LP path for SDPs whose coefficients are all diagonal: each diagonal entry of each
/// block is an independent nonnegative variable.
inline LpSolution solve_diagonal_lp(const SdpProblem& p) {
  detail::validate(p);
  std::vector<int> offset(p.blocks.size() + 1, 0);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) offset[b + 1] = offset[b] + p.blocks[b];
  const int n = offset.back();
  auto index = [&](const SdpEntry& e) {
    if (e.row != e.col) raise(ErrorCode::PreconditionViolated, "LP path requires diagonal coefficients");
    return offset[static_cast<std::size_t>(e.block)] + e.row;
  };
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (const auto& e : p.objective) c(index(e)) += e.value.real();
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& con = p.constraints[static_cast<std::size_t>(i)];
    b(i) = con.rhs;
    for (const auto& e : con.coefficient) a(i, index(e)) += e.value.real();
  }
  return solve_lp(a, b, c);
}

}  // namespace pptdist
