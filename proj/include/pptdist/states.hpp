#pragma once

#include <cmath>
#include <vector>

#include "pptdist/linalg.hpp"

namespace pptdist {

/// Normalized vector on a tagged tensor space. The first amplitude with modulus above
/// 1e-12 is rotated to be real and nonnegative, so equal states compare equal.
class PureState {
 public:
  PureState(Vector vector, BipartiteSpace space) : vector_(std::move(vector)), space_(std::move(space)) {
    if (static_cast<std::size_t>(vector_.size()) != space_.total_dim())
      raise(ErrorCode::DimensionMismatch, "state vector length does not match the space");
    if (std::abs(vector_.norm() - 1.0) > 1e-10) raise(ErrorCode::NotNormalized, "pure state must have unit norm");
    for (Eigen::Index i = 0; i < vector_.size(); ++i) {
      if (std::abs(vector_(i)) > 1e-12) {
        vector_ *= std::conj(vector_(i)) / std::abs(vector_(i));
        break;
      }
    }
  }

  /// Normalizes the input first; throws if it is (numerically) zero.
  static PureState normalized(const Vector& v, BipartiteSpace space) {
    const double n = v.norm();
    if (n < 1e-300) raise(ErrorCode::NotNormalized, "cannot normalize a zero vector");
    return PureState(v / n, std::move(space));
  }

  const Vector& vector() const noexcept { return vector_; }
  const BipartiteSpace& space() const noexcept { return space_; }
  Matrix projector() const { return pptdist::projector(vector_); }

 private:
  Vector vector_;
  BipartiteSpace space_;
};

class DensityOperator {
 public:
  DensityOperator(Matrix matrix, BipartiteSpace space) : matrix_(std::move(matrix)), space_(std::move(space)) {
    require_operator_on(matrix_, space_, "DensityOperator");
    require_hermitian(matrix_, "DensityOperator");
    if (std::abs(matrix_.trace().real() - 1.0) > 1e-10) raise(ErrorCode::NotNormalized, "density operator trace must be 1");
    if (!psd_check(matrix_, 1e-9)) raise(ErrorCode::PreconditionViolated, "density operator must be positive semidefinite");
  }

  explicit DensityOperator(const PureState& psi) : matrix_(psi.projector()), space_(psi.space()) {}

  const Matrix& matrix() const noexcept { return matrix_; }
  const BipartiteSpace& space() const noexcept { return space_; }

 private:
  Matrix matrix_;
  BipartiteSpace space_;
};

struct SchmidtDecomposition {
  RealVector lambdas;   // descending, sums to 1
  Matrix left_vectors;  // columns on the grouped Alice space
  Matrix right_vectors; // columns on the grouped Bob space

  int schmidt_number(double cutoff = 1e-10) const {
    int n = 0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
      if (lambdas(i) > cutoff) ++n;
    return n;
  }
};

/// Orthogonal states to be discriminated; orthogonality is checked on construction.
class DiscriminationInstance {
 public:
  explicit DiscriminationInstance(std::vector<DensityOperator> states) : states_(std::move(states)) {
    if (states_.empty()) raise(ErrorCode::BadDimension, "instance needs at least one state");
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (!(states_[i].space() == states_[0].space()))
        raise(ErrorCode::DimensionMismatch, "instance states must share one space");
      for (std::size_t j = 0; j < i; ++j) {
        const double overlap = real_trace_product(states_[i].matrix(), states_[j].matrix());
        if (overlap > 1e-9) raise(ErrorCode::NotOrthogonal, "instance states must be mutually orthogonal");
      }
    }
  }

  static DiscriminationInstance from_pure(const std::vector<PureState>& states) {
    std::vector<DensityOperator> rhos;
    rhos.reserve(states.size());
    for (const auto& s : states) rhos.emplace_back(s);
    return DiscriminationInstance(std::move(rhos));
  }

  const std::vector<DensityOperator>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const BipartiteSpace& space() const noexcept { return states_.front().space(); }

 private:
  std::vector<DensityOperator> states_;
};

/// Pauli matrices in the indexing used throughout: σ0 = I, σ1 = diag(1,−1),
/// σ2 = bit flip, σ3 = [[0, −i], [i, 0]].
inline Matrix pauli(int k) {
  Matrix m = Matrix::Zero(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 1, 0, 0, -1; break;
    case 2: m << 0, 1, 1, 0; break;
    case 3: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: raise(ErrorCode::BadIndex, "pauli index must be in 0..3");
  }
  return m;
}

inline Vector basis_vector(Eigen::Index dim, Eigen::Index index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(a.vector(), b.vector()), a.space().merged(b.space()));
}

/// Σ_i √λ_i |ii⟩ on a d⊗d space with d = lambdas.size().
inline PureState schmidt_form_state(const std::vector<double>& lambdas) {
  const auto d = static_cast<Eigen::Index>(lambdas.size());
  if (d < 1) raise(ErrorCode::BadDimension, "need at least one Schmidt coefficient");
  Vector v = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lambdas[static_cast<std::size_t>(i)] < 0) raise(ErrorCode::BadRange, "Schmidt coefficients must be nonnegative");
    v(i * d + i) = std::sqrt(lambdas[static_cast<std::size_t>(i)]);
  }
  return PureState::normalized(v, BipartiteSpace::pair(static_cast<int>(d), static_cast<int>(d)));
}

/// √λ0 |00⟩ + √(1−λ0) |11⟩ on 2⊗2.
inline PureState two_qubit_resource(double lambda0) {
  if (lambda0 < 0.0 || lambda0 > 1.0) raise(ErrorCode::BadRange, "lambda0 must lie in [0, 1]");
  return schmidt_form_state({lambda0, 1.0 - lambda0});
}

/// |Ψ_k⟩ = (I ⊗ σ_k)(|00⟩ + |11⟩)/√2 on 2⊗2, Alice first.
inline PureState bell_state(int k) {
  if (k < 0 || k > 3) raise(ErrorCode::BadIndex, "Bell index must be in 0..3");
  Vector phi0 = Vector::Zero(4);
  phi0(0) = phi0(3) = 1.0 / std::sqrt(2.0);
  return PureState(kron(identity(2), pauli(k)) * phi0, BipartiteSpace::pair(2, 2));
}

inline PureState maximally_entangled(int d) {
  if (d < 2) raise(ErrorCode::BadDimension, "maximally entangled state needs d >= 2");
  return schmidt_form_state(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

inline PureState product_basis_state(int dim_a, int dim_b, int i, int j) {
  return PureState(basis_vector(dim_a * dim_b, i * dim_b + j), BipartiteSpace::pair(dim_a, dim_b));
}

namespace detail {

/// Alice-then-Bob grouping permutation (order within each side preserved).
inline std::vector<int> side_grouping(const BipartiteSpace& space) {
  std::vector<int> perm;
  for (std::size_t f = 0; f < space.size(); ++f)
    if (space[f].side == Side::A) perm.push_back(static_cast<int>(f));
  for (std::size_t f = 0; f < space.size(); ++f)
    if (space[f].side == Side::B) perm.push_back(static_cast<int>(f));
  return perm;
}

/// Coefficient matrix C with ψ = Σ C(a, b) |a⟩_A |b⟩_B.
inline Matrix coefficient_matrix(const PureState& psi) {
  const auto& space = psi.space();
  const Vector grouped = permute_factors(psi.vector(), space.dims(), side_grouping(space));
  const auto da = static_cast<Eigen::Index>(space.side_dim(Side::A));
  const auto db = static_cast<Eigen::Index>(space.side_dim(Side::B));
  Matrix c(da, db);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < db; ++b) c(a, b) = grouped(a * db + b);
  return c;
}

}  // namespace detail

inline SchmidtDecomposition schmidt(const PureState& psi) {
  psi.space().require_bipartite("schmidt");
  const Matrix c = detail::coefficient_matrix(psi);
  const auto dec = svd(c);
  const Eigen::Index r = dec.s.size();
  SchmidtDecomposition out{dec.s.array().square().matrix(), dec.u.leftCols(r), dec.v.leftCols(r).conjugate()};
  return out;
}

inline int schmidt_number(const PureState& psi) { return schmidt(psi).schmidt_number(); }

/// Schmidt coefficients as a plain descending vector.
inline std::vector<double> schmidt_coefficients(const PureState& psi) {
  const auto dec = schmidt(psi);
  return {dec.lambdas.data(), dec.lambdas.data() + dec.lambdas.size()};
}

/// (I − |ψ⟩⟨ψ|)/(D − 1).
inline DensityOperator complement_state(const PureState& psi) {
  const auto d = static_cast<Eigen::Index>(psi.space().total_dim());
  if (d < 2) raise(ErrorCode::BadDimension, "complement needs total dimension >= 2");
  return DensityOperator((identity(d) - psi.projector()) / static_cast<double>(d - 1), psi.space());
}

/// χ0 = Ψ0⊗Ψ0, χ1 = Ψ1⊗Ψ1, χ2 = Ψ2⊗Ψ1, χ3 = Ψ3⊗Ψ1 on factors (X1:A, X2:A, Y1:B, Y2:B).
inline std::vector<PureState> ququad_set() {
  const BipartiteSpace space{{2, Side::A}, {2, Side::A}, {2, Side::B}, {2, Side::B}};
  const int first[4] = {0, 1, 2, 3};
  const int second[4] = {0, 1, 1, 1};
  std::vector<PureState> out;
  for (int k = 0; k < 4; ++k) {
    // X1 Y1 X2 Y2 → X1 X2 Y1 Y2
    const Vector v = tensor(bell_state(first[k]).vector(), bell_state(second[k]).vector());
    out.emplace_back(permute_factors(v, {2, 2, 2, 2}, {0, 2, 1, 3}), space);
  }
  return out;
}

/// Each ρ_k ⊗ |α⟩⟨α| on the concatenated space (instance factors first).
inline DiscriminationInstance tensor_with_resource(const DiscriminationInstance& instance, const PureState& alpha) {
  const Matrix a = alpha.projector();
  std::vector<DensityOperator> out;
  out.reserve(instance.size());
  for (const auto& rho : instance.states()) out.emplace_back(kron(rho.matrix(), a), rho.space().merged(alpha.space()));
  return DiscriminationInstance(std::move(out));
}

inline constexpr std::size_t kMaxMulticopyDim = 4096;

inline DensityOperator multicopy(const DensityOperator& rho, int m) {
  if (m < 1) raise(ErrorCode::BadRange, "copy count must be >= 1");
  double dim = 1.0;
  for (int i = 0; i < m; ++i) dim *= static_cast<double>(rho.space().total_dim());
  if (dim > static_cast<double>(kMaxMulticopyDim)) raise(ErrorCode::TooLarge, "multicopy dimension exceeds 4096");
  Matrix out = rho.matrix();
  for (int i = 1; i < m; ++i) out = kron(out, rho.matrix());
  return DensityOperator(std::move(out), rho.space().power(m));
}

inline double binary_entropy_terms(const RealVector& probs, double cutoff = 1e-12) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    if (probs(i) > cutoff) h -= probs(i) * std::log2(probs(i));
  return h;
}

/// Entanglement entropy in bits over Schmidt coefficients above 1e-12.
inline double entanglement_entropy(const PureState& psi) { return binary_entropy_terms(schmidt(psi).lambdas); }

}  // namespace pptdist
