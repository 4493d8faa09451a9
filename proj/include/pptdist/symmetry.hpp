#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "pptdist/random.hpp"
#include "pptdist/states.hpp"

namespace pptdist {

struct TwirlCoefficients {
  double a = 0.0;  // weight on the maximally entangled projector
  double b = 0.0;  // weight on its normalized complement
};

namespace detail {

inline int square_root_dim(Eigen::Index n, const char* what) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n) raise(ErrorCode::DimensionMismatch, std::string(what) + " needs a d⊗d operator");
  return d;
}

inline void require_square(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) raise(ErrorCode::DimensionMismatch, std::string(what) + ": operator has wrong shape");
}

}  // namespace detail

/// Coefficients of the V⊗V̄ twirl: a = tr(NΦ), b = tr(N(I−Φ)).
inline TwirlCoefficients isotropic_twirl(const Matrix& n, int d) {
  detail::require_square(n, static_cast<Eigen::Index>(d) * d, "isotropic_twirl");
  require_hermitian(n, "isotropic_twirl");
  const Matrix phi = maximally_entangled(d).projector();
  const double total = n.trace().real();
  const double a = real_trace_product(n, phi);
  return {a, total - a};
}

/// a·Φ + b·(I − Φ)/(d² − 1).
inline Matrix isotropic_twirl_operator(const Matrix& n, int d) {
  const auto c = isotropic_twirl(n, d);
  const Matrix phi = maximally_entangled(d).projector();
  const auto dd = static_cast<Eigen::Index>(d) * d;
  return c.a * phi + c.b * (identity(dd) - phi) / static_cast<double>(dd - 1);
}

/// (1/4) Σ_i (σ_i⊗σ_i) m (σ_i⊗σ_i); the output is diagonal in the Bell basis.
inline Matrix pauli_twirl(const Matrix& m) {
  detail::require_square(m, 4, "pauli_twirl");
  Matrix out = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const Matrix s = kron(pauli(i), pauli(i));
    out += s * m * s;
  }
  return out / 4.0;
}

/// Bell basis as columns Ψ0..Ψ3.
inline Matrix bell_basis() {
  Matrix b(4, 4);
  for (int k = 0; k < 4; ++k) b.col(k) = bell_state(k).vector();
  return b;
}

/// The local unitary (1/2)[[−i, 1], [−i, −1]] ⊗ [[i, 1], [i, −1]] cycling Ψ1 → Ψ2 → Ψ3.
inline Matrix w_matrix() {
  const cplx i(0, 1);
  Matrix x(2, 2), y(2, 2);
  x << -i, 1, -i, -1;
  y << i, 1, i, -1;
  return kron(x, y) / 2.0;
}

/// Phase average over v⊗v̄ with v diagonal, acting on factors fx and fy of a composite
/// operator with the given factor dimensions. The phase of ⟨ij|·|kl⟩ on that pair is
/// e^{i(θ_i − θ_j − θ_k + θ_l)}; it averages to one exactly when {i, l} = {j, k} as
/// multisets, i.e. (i = k and j = l) or (i = j and k = l), and to zero otherwise.
inline Matrix diagonal_phase_twirl(const Matrix& m, const std::vector<int>& dims, int fx, int fy) {
  const detail::MixedRadix radix(dims);
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  detail::require_square(m, static_cast<Eigen::Index>(total), "diagonal_phase_twirl");
  if (fx < 0 || fy < 0 || static_cast<std::size_t>(fx) >= dims.size() || static_cast<std::size_t>(fy) >= dims.size() || fx == fy)
    raise(ErrorCode::BadIndex, "diagonal_phase_twirl factor indices");
  if (dims[static_cast<std::size_t>(fx)] != dims[static_cast<std::size_t>(fy)])
    raise(ErrorCode::DimensionMismatch, "twirled factor pair must have equal dimensions");
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  std::vector<int> row, col;
  for (std::size_t r = 0; r < total; ++r) {
    radix.split(r, row);
    const int i = row[static_cast<std::size_t>(fx)], j = row[static_cast<std::size_t>(fy)];
    for (std::size_t c = 0; c < total; ++c) {
      radix.split(c, col);
      const int k = col[static_cast<std::size_t>(fx)], l = col[static_cast<std::size_t>(fy)];
      if ((i == k && j == l) || (i == j && k == l))
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// Single local_dim⊗local_dim pair.
inline Matrix diagonal_phase_twirl(const Matrix& m, int local_dim) {
  return diagonal_phase_twirl(m, {local_dim, local_dim}, 0, 1);
}

enum class ChannelKind { Identity, Isotropic, DiagonalPhase, Pauli };

inline ChannelKind parse_channel_kind(const std::string& name) {
  if (name == "identity") return ChannelKind::Identity;
  if (name == "isotropic") return ChannelKind::Isotropic;
  if (name == "diagonal-phase") return ChannelKind::DiagonalPhase;
  if (name == "pauli") return ChannelKind::Pauli;
  raise(ErrorCode::BadChannelKind, "unknown channel kind '" + name + "'");
}

/// Empirical mean of u m u† over sampled channel elements u, acting on a d⊗d operator.
inline Matrix haar_average_sample(const Matrix& m, ChannelKind kind, int samples, std::uint64_t seed) {
  if (samples < 1) raise(ErrorCode::BadRange, "samples must be >= 1");
  const int d = detail::square_root_dim(m.rows(), "haar_average_sample");
  detail::require_square(m, static_cast<Eigen::Index>(d) * d, "haar_average_sample");
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  Matrix acc = Matrix::Zero(m.rows(), m.cols());
  for (int s = 0; s < samples; ++s) {
    Matrix u;
    switch (kind) {
      case ChannelKind::Identity: u = identity(m.rows()); break;
      case ChannelKind::Isotropic: {
        const Matrix v = haar_unitary(d, rng);
        u = kron(v, v.conjugate());
        break;
      }
      case ChannelKind::DiagonalPhase: {
        const Matrix v = random_phase_diagonal(d, rng);
        u = kron(v, v.conjugate());
        break;
      }
      case ChannelKind::Pauli: {
        if (d != 2) raise(ErrorCode::DimensionMismatch, "Pauli channel acts on 2⊗2");
        const int k = pick(rng);
        u = kron(pauli(k), pauli(k));
        break;
      }
      default: raise(ErrorCode::BadChannelKind, "unsupported channel kind");
    }
    acc += u * m * u.adjoint();
  }
  return acc / static_cast<double>(samples);
}

}  // namespace pptdist
