#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pptdist/states.hpp"
#include "pptdist/symmetry.hpp"

namespace pptdist {

inline constexpr double kPovmTol = 1e-9;
inline constexpr double kDiscriminationTol = 1e-6;

/// Effects on a common space. Shapes are checked on construction; positivity and
/// completeness are checked by verify_povm.
class Povm {
 public:
  Povm(std::vector<Matrix> effects, BipartiteSpace space) : effects_(std::move(effects)), space_(std::move(space)) {
    if (effects_.empty()) raise(ErrorCode::BadDimension, "POVM needs at least one effect");
    for (const auto& e : effects_) require_operator_on(e, space_, "Povm");
  }

  const std::vector<Matrix>& effects() const noexcept { return effects_; }
  const BipartiteSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return effects_.size(); }

 private:
  std::vector<Matrix> effects_;
  BipartiteSpace space_;
};

inline bool verify_povm(const Povm& p) {
  const auto n = static_cast<Eigen::Index>(p.space().total_dim());
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& e : p.effects()) {
    if (!is_hermitian(e)) return false;
    if (!psd_check(e, kPovmTol)) return false;
    sum += e;
  }
  return max_abs(sum - identity(n)) <= kPovmTol;
}

inline bool is_ppt_povm(const Povm& p) {
  if (!verify_povm(p)) raise(ErrorCode::NotAPovm, "is_ppt_povm requires a valid POVM");
  for (const auto& e : p.effects())
    if (!psd_check(partial_transpose(e, p.space()), kPovmTol)) return false;
  return true;
}

/// Entry (k, j) = tr(Π_k ρ_j).
inline Eigen::MatrixXd discrimination_matrix(const Povm& p, const DiscriminationInstance& instance) {
  if (!(p.space() == instance.space())) raise(ErrorCode::DimensionMismatch, "POVM and instance live on different spaces");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(instance.size()));
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t j = 0; j < instance.size(); ++j)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          real_trace_product(p.effects()[k], instance.states()[j].matrix());
  return out;
}

inline double discrimination_error(const Povm& p, const DiscriminationInstance& instance) {
  const auto m = discrimination_matrix(p, instance);
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

inline bool verify_perfect_discrimination(const Povm& p, const DiscriminationInstance& instance,
                                          double tol = kDiscriminationTol) {
  return discrimination_error(p, instance) <= tol;
}

/// The three checks every witness must pass.
struct PovmChecks {
  bool valid = false;
  bool ppt = false;
  bool perfect = false;
  double discrimination_error = 0.0;

  bool all() const { return valid && ppt && perfect; }
};

inline PovmChecks check_witness(const Povm& p, const DiscriminationInstance& instance, double tol = kDiscriminationTol) {
  PovmChecks c;
  c.valid = verify_povm(p);
  c.ppt = c.valid && is_ppt_povm(p);
  c.discrimination_error = discrimination_error(p, instance);
  c.perfect = c.discrimination_error <= tol;
  return c;
}

struct ConstructionParams {
  std::map<std::string, double> scalars;
  std::map<std::string, Matrix> operators;
};

/// Output of an explicit construction: the POVM, the resource it consumes, and the
/// instance it discriminates.
struct Construction {
  Povm povm;
  PureState resource;
  DiscriminationInstance instance;
  ConstructionParams params;
};

namespace detail {

/// Σ Block_{ab,cd} ⊗ |ab⟩⟨cd| over a two-qubit resource with 00, 01, 10, 11 ordering.
inline Matrix assemble_blocks(const Matrix (&blocks)[4][4]) {
  const Eigen::Index n = blocks[0][0].rows();
  Matrix out = Matrix::Zero(4 * n, 4 * n);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      Matrix unit = Matrix::Zero(4, 4);
      unit(r, c) = 1.0;
      if (blocks[r][c].size() != 0) out += kron(blocks[r][c], unit);
    }
  return out;
}

/// The two-effect family [[A, 0, 0, B], [0, I/2, 0, 0], [0, 0, I/2, 0], [B, 0, 0, C]]
/// and its complement.
inline std::vector<Matrix> corner_pair(const Matrix& a, const Matrix& b, const Matrix& c) {
  const Eigen::Index n = a.rows();
  const Matrix half = identity(n) / 2.0;
  const Matrix zero = Matrix::Zero(n, n);
  const Matrix p1[4][4] = {{a, zero, zero, b}, {zero, half, zero, zero}, {zero, zero, half, zero}, {b, zero, zero, c}};
  const Matrix e1 = assemble_blocks(p1);
  return {e1, identity(4 * n) - e1};
}

inline DiscriminationInstance pure_and_complement(const PureState& psi, const PureState& alpha) {
  std::vector<DensityOperator> states{DensityOperator(psi), complement_state(psi)};
  return tensor_with_resource(DiscriminationInstance(std::move(states)), alpha);
}

inline Construction corner_construction(const PureState& psi, double t, double x, double y, double iota,
                                        ConstructionParams params) {
  const Matrix proj = psi.projector();
  const Matrix id = identity(proj.rows());
  const Matrix b = x * proj - y * id;
  const Matrix a = (1.0 - t * x) * proj + t * y * id;
  const Matrix c = (1.0 - x / t) * proj + (y / t) * id;
  const PureState alpha = two_qubit_resource(iota);
  params.scalars["t"] = t;
  params.scalars["x"] = x;
  params.scalars["y"] = y;
  params.scalars["iota"] = iota;
  params.operators["A"] = a;
  params.operators["B"] = b;
  params.operators["C"] = c;
  auto instance = pure_and_complement(psi, alpha);
  Povm povm(corner_pair(a, b, c), instance.space());
  return {std::move(povm), alpha, std::move(instance), std::move(params)};
}

}  // namespace detail

/// Σ_k w_k |Ψ_k⟩⟨Ψ_k| over the Bell basis.
inline Matrix bell_diagonal(double w0, double w1, double w2, double w3) {
  const double w[4] = {w0, w1, w2, w3};
  Matrix out = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) out += w[k] * bell_state(k).projector();
  return out;
}

/// Three effects discriminating {Ψ_k ⊗ α : k = 1, 2, 3} with α = √(2/3)|00⟩ + √(1/3)|11⟩.
/// Space: X1 (A), Y1 (B), X2 (A), Y2 (B).
inline Construction three_bell_povm() {
  const double s2 = std::sqrt(2.0);
  const Matrix n00 = bell_diagonal(1.0 / 3, 2.0 / 3, 1.0 / 6, 1.0 / 6);
  const Matrix n01 = bell_diagonal(1.0 / 3, 1.0 / 6, 5.0 / 12, 5.0 / 12);
  const Matrix n11 = identity(4) / 3.0;
  const Matrix r = bell_diagonal(0.0, s2 / 3, -s2 / 6, -s2 / 6);
  const Matrix zero = Matrix::Zero(4, 4);
  const Matrix blocks[4][4] = {{n00, zero, zero, r}, {zero, n01, zero, zero}, {zero, zero, n01, zero}, {r, zero, zero, n11}};
  const Matrix pi1 = detail::assemble_blocks(blocks);
  const Matrix w = kron(w_matrix(), identity(4));
  const Matrix pi2 = w * pi1 * w.adjoint();
  const Matrix pi3 = w.adjoint() * pi1 * w;

  const PureState alpha = two_qubit_resource(2.0 / 3.0);
  std::vector<PureState> bells{bell_state(1), bell_state(2), bell_state(3)};
  auto instance = tensor_with_resource(DiscriminationInstance::from_pure(bells), alpha);
  ConstructionParams params;
  params.scalars["lambda0"] = 2.0 / 3.0;
  params.operators["N00"] = n00;
  params.operators["N01"] = n01;
  params.operators["N10"] = n01;
  params.operators["N11"] = n11;
  params.operators["R"] = r;
  Povm povm({pi1, pi2, pi3}, instance.space());
  return {std::move(povm), alpha, std::move(instance), std::move(params)};
}

/// Two effects discriminating ψ⊗Ψ0 from complement(ψ)⊗Ψ0 for any entangled ψ.
inline Construction thm15_povm(const PureState& psi) {
  const auto lambdas = schmidt(psi).lambdas;
  if (lambdas.size() < 2 || lambdas(1) <= 1e-10) raise(ErrorCode::NotEntangled, "construction needs Schmidt rank >= 2");
  const double r = std::sqrt(lambdas(0) * lambdas(1));
  const double p = r / (1.0 + r);
  const double q = 0.5 - p;
  const Matrix proj = psi.projector();
  const Matrix id = identity(proj.rows());
  const Matrix a = p * proj + q * id;
  const Matrix b = (1.0 - p) * proj - q * id;
  const PureState alpha = two_qubit_resource(0.5);
  ConstructionParams params;
  params.scalars["p"] = p;
  params.scalars["q"] = q;
  params.scalars["iota"] = 0.5;
  params.operators["A"] = a;
  params.operators["B"] = b;
  auto instance = detail::pure_and_complement(psi, alpha);
  Povm povm(detail::corner_pair(a, b, a), instance.space());
  return {std::move(povm), alpha, std::move(instance), std::move(params)};
}

/// Parameters of the partial-resource construction for r = √(λ0 λ1) ∈ (0, 1/2).
struct PartialResourceParams {
  double r, t, x, y, iota;
};

inline PartialResourceParams partial_resource_params(double r) {
  if (!(r > 0.0)) raise(ErrorCode::NotEntangled, "construction needs Schmidt rank >= 2");
  if (r >= 0.5 - 1e-12) raise(ErrorCode::PreconditionViolated, "construction needs sqrt(lambda0 lambda1) < 1/2");
  const double t = std::min(std::sqrt((1.0 + r) / r), 1.0 / (2.0 * r));
  const double den = (r + 1.0) * (t * t + 1.0);
  return {r, t, (r * t * t * t + r * t + t) / den, r * t * t * t / den, 1.0 / (t * t + 1.0)};
}

/// Two effects discriminating ψ⊗α from complement(ψ)⊗α with a partially entangled α.
inline Construction thm16_povm(const PureState& psi) {
  const auto lambdas = schmidt(psi).lambdas;
  if (lambdas.size() < 2 || lambdas(1) <= 1e-10) raise(ErrorCode::NotEntangled, "construction needs Schmidt rank >= 2");
  const auto pr = partial_resource_params(std::sqrt(lambdas(0) * lambdas(1)));
  ConstructionParams params;
  params.scalars["r"] = pr.r;
  return detail::corner_construction(psi, pr.t, pr.x, pr.y, pr.iota, std::move(params));
}

/// Closed-form parameters for Φ_d: t = √(d+1) for d ≥ 5, t = d/2 otherwise.
inline PartialResourceParams maximally_entangled_params(int d) {
  if (d < 2) raise(ErrorCode::BadDimension, "construction needs d >= 2");
  const double dd = d;
  if (d >= 5) {
    const double t = std::sqrt(dd + 1.0);
    return {1.0 / dd, t, 2.0 * t / (dd + 2.0), t / (dd + 2.0), 1.0 / (dd + 2.0)};
  }
  const double den = 2.0 * (dd + 1.0) * (dd * dd + 4.0);
  return {1.0 / dd, dd / 2.0, dd * (dd + 2.0) * (dd + 2.0) / den, dd * dd * dd / den, 4.0 / (dd * dd + 4.0)};
}

inline Construction thm19_povm(int d) {
  const auto pr = maximally_entangled_params(d);
  ConstructionParams params;
  params.scalars["r"] = pr.r;
  params.scalars["d"] = d;
  return detail::corner_construction(maximally_entangled(d), pr.t, pr.x, pr.y, pr.iota, std::move(params));
}

}  // namespace pptdist
