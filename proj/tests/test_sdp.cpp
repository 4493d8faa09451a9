#include <gtest/gtest.h>

#include <functional>

#include "pptdist/random.hpp"
#include "pptdist/sdp.hpp"
#include "pptdist/sdp_instances.hpp"
#include "test_util.hpp"

using namespace pptdist;

using testing_util::code_of;

TEST(SdpSolve, TraceOneScalar) {
  SdpProblem p;
  p.blocks = {1};
  p.objective = {{0, 0, 0, 1.0}};
  p.constraints = {{{{0, 0, 0, 1.0}}, 1.0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-8);
}

TEST(SdpSolve, SmallestEigenvalueThroughSlack) {
  // dual: minimize −t subject to diag(1, 2) − t·I ⪰ 0
  SdpProblem p;
  p.blocks = {2};
  p.objective = {{0, 0, 0, -1.0}, {0, 1, 1, -2.0}};
  p.constraints = {{{{0, 0, 0, -1.0}, {0, 1, 1, -1.0}}, -1.0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.dual_multipliers[0], 1.0, 1e-7);
  EXPECT_NEAR(s.objective, -1.0, 1e-7);
}

TEST(SdpSolve, ComplexBlockLargestEigenvalue) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix c = random_hermitian(4, rng);
    SdpProblem p;
    p.blocks = {4};
    SdpProblem::add_dense(p.objective, 0, c);
    SdpCoefficient tr;
    SdpProblem::add_dense(tr, 0, identity(4));
    p.constraints = {{tr, 1.0}};
    const auto s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal);
    EXPECT_NEAR(s.objective, eigenvalues(c)(3), 1e-7);
    EXPECT_TRUE(psd_check(s.primal[0], 1e-8));
  }
}

TEST(SdpSolve, DetectsPrimalInfeasibility) {
  SdpProblem p;
  p.blocks = {1};
  p.objective = {{0, 0, 0, 1.0}};
  p.constraints = {{{{0, 0, 0, 1.0}}, -1.0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Infeasible);
  // Farkas ray: Σ y b = 1, Σ y A ⪯ 0.
  EXPECT_NEAR(s.dual_multipliers[0] * -1.0, 1.0, 1e-9);
  EXPECT_LE(s.dual_multipliers[0], 1e-8);
}

TEST(SdpSolve, InfeasibleMatrixSystem) {
  // X ⪰ 0 on 2×2 with X00 = −1 and X11 = 1: a Farkas ray exists.
  SdpProblem p;
  p.blocks = {2};
  p.objective = {{0, 0, 1, 1.0}};
  p.constraints = {{{{0, 0, 0, 1.0}}, -1.0}, {{{0, 1, 1, 1.0}}, 1.0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Infeasible);
  const double by = -s.dual_multipliers[0] + s.dual_multipliers[1];
  EXPECT_NEAR(by, 1.0, 1e-9);
  Matrix ray = Matrix::Zero(2, 2);
  ray(0, 0) = s.dual_multipliers[0];
  ray(1, 1) = s.dual_multipliers[1];
  EXPECT_LE(eigenvalues(ray)(1), 1e-8);
}

TEST(SdpSolve, DetectsUnboundedPrimal) {
  SdpProblem p;
  p.blocks = {1, 1};
  p.objective = {{0, 0, 0, 1.0}};
  p.constraints = {{{{0, 0, 0, 1.0}, {1, 0, 0, -1.0}}, 0.0}};
  EXPECT_EQ(solve(p).status, SdpStatus::DualInfeasible);
}

TEST(SdpSolve, Errors) {
  SdpProblem dup;
  dup.blocks = {2};
  dup.objective = {{0, 0, 0, 1.0}};
  dup.constraints = {{{{0, 0, 1, 1.0}}, 0.0}, {{{0, 0, 1, 2.0}}, 0.0}};
  EXPECT_EQ(code_of([&] { solve(dup); }), ErrorCode::IllPosed);

  SdpProblem none;
  none.blocks = {2};
  EXPECT_EQ(code_of([&] { solve(none); }), ErrorCode::IllPosed);

  SdpProblem big;
  big.blocks = {601};
  big.constraints = {{{{0, 0, 0, 1.0}}, 1.0}};
  EXPECT_EQ(code_of([&] { solve(big); }), ErrorCode::TooLarge);

  SdpProblem bad;
  bad.blocks = {2};
  bad.constraints = {{{{0, 0, 0, cplx(1.0, 1.0)}}, 1.0}};
  EXPECT_EQ(code_of([&] { solve(bad); }), ErrorCode::NonHermitian);
}

TEST(SdpSolve, RandomStrictlyFeasibleProblems) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto inst = random_feasible_sdp(rng, seed % 2 == 0);
    const auto s = solve(inst.problem);
    ASSERT_EQ(s.status, SdpStatus::Optimal) << "seed " << seed;
    EXPECT_LE(s.gap, 1e-7 * (1.0 + std::abs(s.objective)));
    EXPECT_LE(s.primal_residual, 1e-7);
    for (const auto& x : s.primal) EXPECT_TRUE(psd_check(x, 1e-8));
  }
}

TEST(SdpSolve, WeakDualityAlongIterates) {
  Rng rng(42);
  const auto inst = random_feasible_sdp(rng, true);
  const auto s = solve(inst.problem);
  ASSERT_FALSE(s.history.empty());
  for (const auto& it : s.history) {
    // pobj − dobj = infeasibility term − ⟨X, Z⟩/τ² with ⟨X, Z⟩ ≥ 0
    const double scale = 1e-9 * (1.0 + std::abs(it.primal_objective) + std::abs(it.dual_objective) + std::abs(it.infeasibility_term));
    EXPECT_LE(it.primal_objective, it.dual_objective + it.infeasibility_term + scale);
    EXPECT_NEAR(it.primal_objective - it.dual_objective, it.infeasibility_term - it.complementarity,
                1e-8 * (1.0 + std::abs(it.complementarity) + std::abs(it.infeasibility_term)));
  }
}

TEST(SdpSolve, InvariantUnderBlockBasisChange) {
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    Rng rng(seed);
    const auto inst = random_feasible_sdp(rng, false);
    const auto s1 = solve(inst.problem);
    const auto rotated = rotate_block(inst.problem, 0, rng);
    const auto s2 = solve(rotated);
    ASSERT_EQ(s1.status, SdpStatus::Optimal);
    ASSERT_EQ(s2.status, SdpStatus::Optimal);
    EXPECT_NEAR(s1.objective, s2.objective, 1e-7 * (1.0 + std::abs(s1.objective)));
  }
}

TEST(SdpSolve, DiagonalProblemsAgreeWithSimplex) {
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    Rng rng(seed);
    const auto p = random_diagonal_sdp(rng);
    const auto s = solve(p);
    const auto lp = solve_diagonal_lp(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal);
    ASSERT_EQ(lp.status, LpStatus::Optimal);
    EXPECT_NEAR(s.objective, lp.objective, 1e-7 * (1.0 + std::abs(lp.objective)));
  }
}

TEST(Simplex, SmallExamples) {
  // maximize x + y subject to x + 2y + s1 = 4, 3x + y + s2 = 6
  Eigen::MatrixXd a(2, 4);
  a << 1, 2, 1, 0, 3, 1, 0, 1;
  Eigen::VectorXd b(2), c(4);
  b << 4, 6;
  c << 1, 1, 0, 0;
  auto s = solve_lp(a, b, c);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 2.8, 1e-12);

  Eigen::MatrixXd a2(1, 2);
  a2 << 1, 1;
  Eigen::VectorXd b2(1), c2(2);
  b2 << -1;
  c2 << 1, 0;
  EXPECT_EQ(solve_lp(a2, b2, c2).status, LpStatus::Infeasible);

  Eigen::MatrixXd a3(1, 2);
  a3 << 1, -1;
  Eigen::VectorXd b3(1), c3(2);
  b3 << 0;
  c3 << 1, 0;
  EXPECT_EQ(solve_lp(a3, b3, c3).status, LpStatus::Unbounded);
}

TEST(Simplex, RedundantRows) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 1, 2, 2, 1, 0;
  Eigen::VectorXd b(3), c(2);
  b << 1, 2, 0.25;
  c << 0, 1;
  const auto s = solve_lp(a, b, c);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 0.75, 1e-12);
}
