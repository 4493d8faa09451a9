#include <gtest/gtest.h>

#include <cmath>

#include "pptdist/symmetry.hpp"
#include "test_util.hpp"

using namespace pptdist;
using testing_util::code_of;

namespace {

Matrix ket_bra(int dim, int r, int c) {
  Matrix m = Matrix::Zero(dim, dim);
  m(r, c) = 1.0;
  return m;
}

// Off-diagonal weight in the Bell basis.
double bell_offdiagonal(const Matrix& m) {
  Matrix in_bell = bell_basis().adjoint() * m * bell_basis();
  in_bell.diagonal().setZero();
  return max_abs(in_bell);
}

}  // namespace

TEST(IsotropicTwirl, Examples) {
  const Matrix phi = maximally_entangled(2).projector();
  auto c = isotropic_twirl(phi, 2);
  EXPECT_NEAR(c.a, 1.0, 1e-14);
  EXPECT_NEAR(c.b, 0.0, 1e-14);
  c = isotropic_twirl(identity(4), 2);
  EXPECT_NEAR(c.a, 1.0, 1e-14);
  EXPECT_NEAR(c.b, 3.0, 1e-14);
  EXPECT_LE(max_abs(isotropic_twirl_operator(phi, 2) - phi), 1e-14);
  EXPECT_LE(max_abs(isotropic_twirl_operator(identity(9), 3) - identity(9)), 1e-14);
}

TEST(IsotropicTwirl, Errors) {
  EXPECT_EQ(code_of([] { isotropic_twirl(identity(5), 2); }), ErrorCode::DimensionMismatch);
  Matrix skew = identity(4);
  skew(0, 1) = 1.0;
  EXPECT_EQ(code_of([&] { isotropic_twirl(skew, 2); }), ErrorCode::NonHermitian);
}

TEST(IsotropicTwirl, AgreesWithSampledAverage) {
  Rng rng(31);
  const Matrix n = random_hermitian(9, rng);
  const Matrix sampled = haar_average_sample(n, ChannelKind::Isotropic, 10000, 4);
  EXPECT_LE(max_abs(sampled - isotropic_twirl_operator(n, 3)), 2e-2);
}

TEST(IsotropicTwirl, PreservesTraceAndOverlap) {
  Rng rng(32);
  for (int d = 2; d <= 4; ++d) {
    const Matrix n = random_hermitian(d * d, rng);
    const Matrix t = isotropic_twirl_operator(n, d);
    EXPECT_NEAR(t.trace().real(), n.trace().real(), 1e-12);
    const Matrix phi = maximally_entangled(d).projector();
    EXPECT_NEAR(real_trace_product(t, phi), real_trace_product(n, phi), 1e-12);
    // idempotent
    EXPECT_LE(max_abs(isotropic_twirl_operator(t, d) - t), 1e-12);
  }
}

TEST(IsotropicTwirl, InvariantUnderConjugatePairs) {
  Rng rng(33);
  const Matrix n = random_hermitian(9, rng);
  const Matrix t = isotropic_twirl_operator(n, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix v = haar_unitary(3, rng);
    const Matrix u = kron(v, v.conjugate());
    EXPECT_LE(max_abs(u * t * u.adjoint() - t), 1e-12);
  }
}

TEST(PauliTwirl, Examples) {
  const Matrix psi1 = bell_state(1).projector();
  EXPECT_LE(max_abs(pauli_twirl(psi1) - psi1), 1e-14);
  const Matrix expected = (bell_state(0).projector() + bell_state(1).projector()) / 2.0;
  EXPECT_LE(max_abs(pauli_twirl(ket_bra(4, 0, 0)) - expected), 1e-14);
  EXPECT_EQ(code_of([] { pauli_twirl(identity(9)); }), ErrorCode::DimensionMismatch);
}

TEST(PauliTwirl, OutputIsBellDiagonal) {
  Rng rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix m = random_hermitian(4, rng);
    const Matrix t = pauli_twirl(m);
    EXPECT_LE(bell_offdiagonal(t), 1e-12);
    EXPECT_NEAR(t.trace().real(), m.trace().real(), 1e-12);
    for (int i = 0; i < 4; ++i) {
      const Matrix s = kron(pauli(i), pauli(i));
      EXPECT_LE(max_abs(s * t - t * s), 1e-12);
    }
  }
}

TEST(WMatrix, UnitaryAndCycling) {
  const Matrix w = w_matrix();
  EXPECT_LE(max_abs(w * w.adjoint() - identity(4)), 1e-14);
  for (int k = 1; k <= 3; ++k) {
    const int next = k == 3 ? 1 : k + 1;
    const cplx ov = bell_state(next).vector().dot(w * bell_state(k).vector());
    EXPECT_NEAR(std::abs(ov), 1.0, 1e-14);
  }
  const Matrix w3 = w * w * w;
  for (int k = 1; k <= 3; ++k) {
    const Matrix p = bell_state(k).projector();
    EXPECT_LE(max_abs(w3 * p * w3.adjoint() - p), 1e-13);
  }
}

TEST(DiagonalPhaseTwirl, Examples) {
  EXPECT_LE(max_abs(diagonal_phase_twirl(ket_bra(4, 0, 3), 2) - ket_bra(4, 0, 3)), 0.0);
  EXPECT_LE(max_abs(diagonal_phase_twirl(ket_bra(4, 1, 0), 2)), 0.0);
  EXPECT_LE(max_abs(diagonal_phase_twirl(ket_bra(4, 1, 1), 2) - ket_bra(4, 1, 1)), 0.0);
  const Matrix phi = maximally_entangled(3).projector();
  EXPECT_LE(max_abs(diagonal_phase_twirl(phi, 3) - phi), 1e-15);
}

TEST(DiagonalPhaseTwirl, Errors) {
  EXPECT_EQ(code_of([] { diagonal_phase_twirl(identity(8), {2, 2, 2}, 0, 0); }), ErrorCode::BadIndex);
  EXPECT_EQ(code_of([] { diagonal_phase_twirl(identity(8), {2, 2, 2}, 0, 3); }), ErrorCode::BadIndex);
  EXPECT_EQ(code_of([] { diagonal_phase_twirl(identity(6), {2, 3}, 0, 1); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { diagonal_phase_twirl(identity(5), 2); }), ErrorCode::DimensionMismatch);
}

TEST(DiagonalPhaseTwirl, IdempotentAndInvariant) {
  Rng rng(35);
  for (int d = 2; d <= 3; ++d) {
    const Matrix m = random_hermitian(d * d, rng);
    const Matrix t = diagonal_phase_twirl(m, d);
    EXPECT_LE(max_abs(diagonal_phase_twirl(t, d) - t), 0.0);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix v = random_phase_diagonal(d, rng);
      const Matrix u = kron(v, v.conjugate());
      EXPECT_LE(max_abs(u * t * u.adjoint() - t), 1e-12);
    }
  }
}

TEST(DiagonalPhaseTwirl, ActsOnChosenFactorsOnly) {
  // Twirling factors 0 and 2 of a three-factor operator equals twirling after moving them together.
  Rng rng(36);
  const Matrix m = random_hermitian(8, rng);
  const Matrix direct = diagonal_phase_twirl(m, {2, 2, 2}, 0, 2);
  const Matrix moved = permute_factors(m, {2, 2, 2}, {0, 2, 1});
  const Matrix back = permute_factors(diagonal_phase_twirl(moved, {2, 2, 2}, 0, 1), {2, 2, 2}, {0, 2, 1});
  EXPECT_LE(max_abs(direct - back), 1e-14);
}

TEST(DiagonalPhaseTwirl, AgreesWithSampledAverage) {
  Rng rng(37);
  const Matrix m = random_hermitian(9, rng);
  const Matrix sampled = haar_average_sample(m, ChannelKind::DiagonalPhase, 10000, 5);
  EXPECT_LE(max_abs(sampled - diagonal_phase_twirl(m, 3)), 5e-2 * tol_scale(m));
}

TEST(HaarAverageSample, Examples) {
  Rng rng(38);
  const Matrix m = random_hermitian(4, rng);
  EXPECT_LE(max_abs(haar_average_sample(m, ChannelKind::Identity, 3, 1) - m), 1e-14);
  const Matrix phi = maximally_entangled(2).projector();
  EXPECT_LE(max_abs(haar_average_sample(phi, ChannelKind::Isotropic, 100, 2) - phi), 1e-10);
  const Matrix pauli_avg = haar_average_sample(ket_bra(4, 0, 0), ChannelKind::Pauli, 4000, 3);
  EXPECT_LE(max_abs(pauli_avg - pauli_twirl(ket_bra(4, 0, 0))), 5e-2);
}

TEST(HaarAverageSample, Errors) {
  EXPECT_EQ(code_of([] { parse_channel_kind("unitary"); }), ErrorCode::BadChannelKind);
  EXPECT_EQ(parse_channel_kind("diagonal-phase"), ChannelKind::DiagonalPhase);
  EXPECT_EQ(code_of([] { haar_average_sample(identity(4), ChannelKind::Identity, 0, 1); }), ErrorCode::BadRange);
  EXPECT_EQ(code_of([] { haar_average_sample(identity(5), ChannelKind::Identity, 1, 1); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { haar_average_sample(identity(9), ChannelKind::Pauli, 1, 1); }), ErrorCode::DimensionMismatch);
}
