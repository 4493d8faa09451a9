#pragma once

#include "pptdist/random.hpp"
#include "pptdist/sdp.hpp"

namespace pptdist {

struct FeasibleSdp {
  SdpProblem problem;
  std::vector<Matrix> x0;  // strictly feasible primal point
};

/// Strictly feasible primal and dual by construction: b = A(X0) with X0 ≻ 0 and
/// C = Σ y0 A − Z0 with Z0 ≻ 0.
inline FeasibleSdp random_feasible_sdp(Rng& rng, bool complex_data, int max_dim = 8) {
  std::uniform_int_distribution<int> nblocks(1, 3), dim(1, max_dim);
  FeasibleSdp out;
  auto& p = out.problem;
  const int nb = nblocks(rng);
  for (int b = 0; b < nb; ++b) p.blocks.push_back(dim(rng));
  int total = 0;
  for (int n : p.blocks) total += n;
  std::uniform_int_distribution<int> ncons(1, std::max(1, total));
  const int m = ncons(rng);

  auto random_block = [&](int n) {
    Matrix h = random_hermitian(n, rng);
    if (!complex_data) h = h.real().cast<cplx>();
    return h;
  };
  std::vector<std::vector<Matrix>> a(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int n : p.blocks) a[static_cast<std::size_t>(i)].push_back(random_block(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> c;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const int n = p.blocks[b];
    Matrix g = random_block(n);
    out.x0.push_back(g * g + identity(n));
    Matrix z0 = random_block(n);
    c.push_back(-(z0 * z0 + identity(n)));
  }
  for (int i = 0; i < m; ++i) {
    const double yi = gauss(rng);
    double rhs = 0.0;
    SdpConstraint con;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const Matrix& ab = a[static_cast<std::size_t>(i)][b];
      c[b] += yi * ab;
      rhs += real_trace_product(ab, out.x0[b]);
      SdpProblem::add_dense(con.coefficient, static_cast<int>(b), ab);
    }
    con.rhs = rhs;
    p.constraints.push_back(std::move(con));
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) SdpProblem::add_dense(p.objective, static_cast<int>(b), c[b]);
  return out;
}

/// Same problem after X_b ↦ Q X_b Qᵀ with a random orthogonal Q on one block.
inline SdpProblem rotate_block(const SdpProblem& p, int block, Rng& rng) {
  const int n = p.blocks[static_cast<std::size_t>(block)];
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Matrix q = (qr.householderQ() * Eigen::MatrixXd::Identity(n, n)).cast<cplx>();
  auto transform = [&](const SdpCoefficient& coef) {
    SdpCoefficient out;
    for (const auto& e : coef)
      if (e.block != block) out.push_back(e);
    const Matrix dense = p.dense_block(coef, block);
    SdpProblem::add_dense(out, block, q * dense * q.adjoint());
    return out;
  };
  SdpProblem r = p;
  r.objective = transform(p.objective);
  for (auto& con : r.constraints) con.coefficient = transform(con.coefficient);
  return r;
}

/// Diagonal data with a strictly feasible primal and a bounded objective.
inline SdpProblem random_diagonal_sdp(Rng& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 2.0);
  SdpProblem p;
  p.blocks = {dim(rng), dim(rng)};
  const int total = p.blocks[0] + p.blocks[1];
  std::vector<double> x0;
  for (int k = 0; k < total; ++k) x0.push_back(pos(rng));
  auto diag_entries = [&](const std::vector<double>& v) {
    SdpCoefficient coef;
    int k = 0;
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < p.blocks[static_cast<std::size_t>(b)]; ++r, ++k)
        if (v[static_cast<std::size_t>(k)] != 0.0) coef.push_back({b, r, r, v[static_cast<std::size_t>(k)]});
    return coef;
  };
  // A bounding constraint Σ x = Σ x0 keeps the LP bounded.
  std::vector<double> ones(static_cast<std::size_t>(total), 1.0);
  double s = 0.0;
  for (double v : x0) s += v;
  p.constraints.push_back({diag_entries(ones), s});
  std::uniform_int_distribution<int> extra(0, std::max(0, total - 2));
  const int m = extra(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<double> a;
    double rhs = 0.0;
    for (int k = 0; k < total; ++k) {
      a.push_back(u(rng));
      rhs += a.back() * x0[static_cast<std::size_t>(k)];
    }
    p.constraints.push_back({diag_entries(a), rhs});
  }
  std::vector<double> c;
  for (int k = 0; k < total; ++k) c.push_back(u(rng));
  p.objective = diag_entries(c);
  return p;
}

}  // namespace pptdist
