#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pptdist/povm.hpp"
#include "pptdist/sdp.hpp"

namespace pptdist {

inline constexpr std::size_t kMaxInstanceDim = 256;
inline constexpr double kDecisionTol = 1e-7;
inline constexpr double kSupportCutoff = 1e-9;

enum class Feasibility { Yes, No, Marginal };
enum class Decision { Yes, No, Indeterminate };
enum class SchmidtBound { Possible, Excluded };

inline std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Yes: return "Yes";
    case Feasibility::No: return "No";
    case Feasibility::Marginal: return "Marginal";
  }
  return "Unknown";
}

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::Yes: return "Yes";
    case Decision::No: return "No";
    case Decision::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

inline std::string to_string(SchmidtBound b) { return b == SchmidtBound::Possible ? "Possible" : "Excluded"; }

struct FeasibilityReport {
  Feasibility feasible = Feasibility::Marginal;
  double slack = 0.0;  // optimal t
  std::optional<Povm> witness;
  /// Primal blocks of the conic problem; on No they bound t from above.
  std::optional<std::vector<Matrix>> certificate;
  SdpStatus solver_status = SdpStatus::Indeterminate;
  int iterations = 0;
  /// "solver", "supplied" or empty.
  std::string witness_source;
};

namespace detail {

inline bool is_real(const Matrix& m, double tol = 1e-13) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol; }

inline Matrix drop_imag(const Matrix& m) { return m.real().cast<cplx>(); }

/// Trace-orthonormal basis of r×r Hermitian (or real symmetric) matrices.
inline std::vector<Matrix> hermitian_basis(Eigen::Index r, bool real_only) {
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < r; ++i) {
    Matrix e = Matrix::Zero(r, r);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = i + 1; j < r; ++j) {
      Matrix e = Matrix::Zero(r, r);
      e(i, j) = e(j, i) = s;
      out.push_back(e);
      if (!real_only) {
        Matrix f = Matrix::Zero(r, r);
        f(i, j) = cplx(0.0, -s);
        f(j, i) = cplx(0.0, s);
        out.push_back(f);
      }
    }
  return out;
}

inline Matrix combine(const std::vector<Matrix>& basis, const std::vector<double>& y, std::size_t offset) {
  Matrix out = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) out += y[offset + i] * basis[i];
  return out;
}

/// Supports of the states, the leftover space P0 = I − Σ P_k and a basis V of it.
struct SupportData {
  std::vector<Matrix> projectors;
  Matrix leftover;
  Matrix basis;  // D × r
  bool real = true;
};

inline SupportData supports(const DiscriminationInstance& instance) {
  SupportData s;
  const auto d = static_cast<Eigen::Index>(instance.space().total_dim());
  s.leftover = identity(d);
  for (const auto& rho : instance.states()) {
    s.projectors.push_back(support_projector(rho.matrix(), kSupportCutoff));
    s.leftover -= s.projectors.back();
    s.real = s.real && is_real(s.projectors.back());
  }
  if (s.real) {
    for (auto& p : s.projectors) p = drop_imag(p);
    s.leftover = drop_imag(s.leftover);
  }
  s.leftover = 0.5 * (s.leftover + s.leftover.adjoint());
  s.basis = support_basis(s.leftover, 0.5);
  if (s.real) s.basis = drop_imag(s.basis);
  return s;
}

/// POVM Π_k = P_k + V M_k V† with Π_n = I − Σ_{k<n} Π_k.
inline Povm assemble_witness(const SupportData& s, const std::vector<Matrix>& m, const BipartiteSpace& space) {
  const auto n = s.projectors.size();
  std::vector<Matrix> effects;
  Matrix last = s.projectors.back() + s.leftover;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Matrix e = s.projectors[k];
    if (s.basis.cols() > 0) {
      const Matrix lifted = s.basis * m[k] * s.basis.adjoint();
      e += lifted;
      last -= lifted;
    }
    effects.push_back(e);
  }
  effects.push_back(last);
  for (auto& e : effects) e = 0.5 * (e + e.adjoint());
  return Povm(std::move(effects), space);
}

/// Candidates from the solver's M_k, mixed increasingly toward the uniform split of P0.
inline std::optional<Povm> polish_witness(const SupportData& s, const std::vector<Matrix>& m,
                                          const DiscriminationInstance& instance) {
  const auto n = static_cast<double>(s.projectors.size());
  const Eigen::Index r = s.basis.cols();
  for (double eps : {0.0, 1e-8, 1e-6, 1e-4, 1e-2}) {
    std::vector<Matrix> mixed;
    for (const auto& mk : m) mixed.push_back((1.0 - eps) * mk + eps * identity(r) / n);
    Povm candidate = assemble_witness(s, mixed, instance.space());
    if (check_witness(candidate, instance).all()) return candidate;
  }
  return std::nullopt;
}

}  // namespace detail

/// Maximizes t subject to Π_k = P_k + E_k with E_k ⪰ 0, Σ E_k = P0 and Π_k^Γ ⪰ t·I.
/// The E_k are written as V M_k V† on the leftover space and the last one is
/// eliminated, so the program is solved as the dual of the conic form.
inline FeasibilityReport perfect_ppt_feasibility(const DiscriminationInstance& instance,
                                                 const std::optional<Povm>& supplied_witness = std::nullopt,
                                                 const SdpOptions& sdp_options = {}) {
  const auto& space = instance.space();
  space.require_bipartite("perfect_ppt_feasibility");
  if (space.total_dim() > kMaxInstanceDim) raise(ErrorCode::TooLarge, "instance dimension exceeds 256");

  const auto s = detail::supports(instance);
  const std::size_t n = s.projectors.size();
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  const Eigen::Index r = s.basis.cols();
  const auto basis = r > 0 ? detail::hermitian_basis(r, s.real) : std::vector<Matrix>{};
  const std::size_t nb = basis.size();
  const std::size_t nm = r > 0 ? n - 1 : 0;  // number of free M_k

  std::vector<Matrix> lifted_pt;
  for (const auto& b : basis) lifted_pt.push_back(partial_transpose(s.basis * b * s.basis.adjoint(), space));

  SdpProblem p;
  // blocks: M_k (k < n), I − Σ M_k, then one PPT block per effect
  const int first_ppt = r > 0 ? static_cast<int>(nm + 1) : 0;
  for (std::size_t k = 0; k < nm; ++k) p.blocks.push_back(static_cast<int>(r));
  if (r > 0) p.blocks.push_back(static_cast<int>(r));
  for (std::size_t k = 0; k < n; ++k) p.blocks.push_back(static_cast<int>(d));

  constexpr double drop = 1e-14;
  if (r > 0) SdpProblem::add_dense(p.objective, static_cast<int>(nm), -identity(r), drop);
  for (std::size_t k = 0; k < n; ++k) {
    Matrix c = s.projectors[k];
    if (k + 1 == n) c += s.leftover;
    SdpProblem::add_dense(p.objective, first_ppt + static_cast<int>(k), -partial_transpose(c, space), drop);
  }
  for (std::size_t k = 0; k < nm; ++k)
    for (std::size_t i = 0; i < nb; ++i) {
      SdpConstraint con;
      SdpProblem::add_dense(con.coefficient, static_cast<int>(k), basis[i], drop);
      SdpProblem::add_dense(con.coefficient, static_cast<int>(nm), -basis[i], drop);
      SdpProblem::add_dense(con.coefficient, first_ppt + static_cast<int>(k), lifted_pt[i], drop);
      SdpProblem::add_dense(con.coefficient, first_ppt + static_cast<int>(n - 1), -lifted_pt[i], drop);
      p.constraints.push_back(std::move(con));
    }
  SdpConstraint tcon;
  for (std::size_t k = 0; k < n; ++k) SdpProblem::add_dense(tcon.coefficient, first_ppt + static_cast<int>(k), -identity(d));
  tcon.rhs = -1.0;
  p.constraints.push_back(std::move(tcon));

  const auto sol = solve(p, sdp_options);
  FeasibilityReport report;
  report.solver_status = sol.status;
  report.iterations = sol.iterations;
  if (sol.status == SdpStatus::Optimal) {
    report.slack = sol.dual_multipliers.back();
    if (report.slack > kDecisionTol)
      report.feasible = Feasibility::Yes;
    else if (report.slack < -kDecisionTol)
      report.feasible = Feasibility::No;
    else
      report.feasible = Feasibility::Marginal;
  }
  if (report.feasible == Feasibility::No) report.certificate = sol.primal;

  if (supplied_witness && report.feasible != Feasibility::No && check_witness(*supplied_witness, instance).all()) {
    report.witness = supplied_witness;
    report.witness_source = "supplied";
  }
  if (!report.witness && report.feasible != Feasibility::No && sol.status == SdpStatus::Optimal) {
    std::vector<Matrix> m;
    for (std::size_t k = 0; k < nm; ++k) m.push_back(detail::combine(basis, sol.dual_multipliers, k * nb));
    if (auto w = detail::polish_witness(s, m, instance)) {
      report.witness = std::move(w);
      report.witness_source = "solver";
    }
  }
  if (report.feasible == Feasibility::Marginal && report.witness) report.feasible = Feasibility::Yes;
  return report;
}

/// max tr(E·target) over 0 ⪯ E ⪯ I, E^Γ ⪰ 0, tr(E·other) = 0. E is restricted to
/// the kernel of other, which is equivalent for E ⪰ 0.
inline double unambiguous_ppt_value(const DensityOperator& target, const DensityOperator& other,
                                    const SdpOptions& sdp_options = {}) {
  if (!(target.space() == other.space())) raise(ErrorCode::DimensionMismatch, "states must share one space");
  const auto& space = target.space();
  space.require_bipartite("unambiguous_ppt_value");
  if (space.total_dim() > kMaxInstanceDim) raise(ErrorCode::TooLarge, "instance dimension exceeds 256");
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  Matrix kernel = identity(d) - support_projector(other.matrix(), kSupportCutoff);
  const bool real = detail::is_real(kernel) && detail::is_real(target.matrix());
  Matrix v = support_basis(0.5 * (kernel + kernel.adjoint()), 0.5);
  const Eigen::Index r = v.cols();
  if (r == 0) return 0.0;
  if (real) v = detail::drop_imag(v);
  const Matrix t = real ? detail::drop_imag(target.matrix()) : target.matrix();
  const auto basis = detail::hermitian_basis(r, real);

  SdpProblem p;
  p.blocks = {static_cast<int>(r), static_cast<int>(r), static_cast<int>(d)};
  SdpProblem::add_dense(p.objective, 1, -identity(r));
  for (const auto& b : basis) {
    const Matrix lifted = v * b * v.adjoint();
    SdpConstraint con;
    SdpProblem::add_dense(con.coefficient, 0, b, 1e-14);
    SdpProblem::add_dense(con.coefficient, 1, -b, 1e-14);
    SdpProblem::add_dense(con.coefficient, 2, partial_transpose(lifted, space), 1e-14);
    con.rhs = -real_trace_product(lifted, t);
    p.constraints.push_back(std::move(con));
  }
  const auto sol = solve(p, sdp_options);
  if (sol.status != SdpStatus::Optimal) raise(ErrorCode::NoConvergence, "unambiguous value: solver " + to_string(sol.status));
  return -sol.dual_objective;
}

inline bool unambiguous_pair_ppt(const DensityOperator& rho1, const DensityOperator& rho2) {
  return unambiguous_ppt_value(rho1, rho2) > kDecisionTol && unambiguous_ppt_value(rho2, rho1) > kDecisionTol;
}

struct ThresholdResult {
  double value = 0.0;
  /// False when the whole range is feasible (value = hi) or infeasible (value = lo).
  bool boundary_found = false;
  int probes = 0;
};

using InstanceFamily = std::function<DiscriminationInstance(double)>;
using WitnessFamily = std::function<std::optional<Povm>(double)>;

/// Boundary between a feasible lower part and an infeasible upper part of [lo, hi].
inline ThresholdResult cost_threshold_bisection(const InstanceFamily& builder, double lo, double hi, double tol,
                                                const WitnessFamily& witnesses = {}) {
  if (!(tol >= 1e-5)) raise(ErrorCode::BadRange, "tolerance must be at least 1e-5");
  if (!(lo <= hi)) raise(ErrorCode::BadRange, "need lo <= hi");
  ThresholdResult out;
  if (lo == hi) {
    out.value = lo;
    return out;
  }
  auto status = [&](double x) {
    ++out.probes;
    std::optional<Povm> w;
    if (witnesses) w = witnesses(x);
    return perfect_ppt_feasibility(builder(x), w).feasible;
  };
  auto feasible = [&](double x) {
    const auto f = status(x);
    if (f != Feasibility::Marginal) return f == Feasibility::Yes;
    return status(std::max(lo, x - tol / 2)) == Feasibility::Yes;
  };

  constexpr int kGrid = 8;
  std::vector<double> grid;
  std::vector<bool> ok;
  for (int i = 0; i < kGrid; ++i) {
    grid.push_back(lo + (hi - lo) * i / (kGrid - 1));
    ok.push_back(feasible(grid.back()));
  }
  int flips = 0, last_yes = -1;
  for (int i = 1; i < kGrid; ++i) flips += ok[static_cast<std::size_t>(i)] != ok[static_cast<std::size_t>(i - 1)];
  if (flips > 1 || (flips == 1 && !ok.front()))
    raise(ErrorCode::NonMonotone, "feasibility is not monotone over the probe grid");
  if (flips == 0) {
    out.value = ok.front() ? hi : lo;
    return out;
  }
  for (int i = 0; i < kGrid; ++i)
    if (ok[static_cast<std::size_t>(i)]) last_yes = i;
  double a = grid[static_cast<std::size_t>(last_yes)], b = grid[static_cast<std::size_t>(last_yes + 1)];
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    (feasible(mid) ? a : b) = mid;
  }
  out.value = 0.5 * (a + b);
  out.boundary_found = true;
  return out;
}

inline Decision is_separable_rank_bounded(const DensityOperator& rho) {
  const auto& space = rho.space();
  space.require_bipartite("is_separable_rank_bounded");
  const auto bound = static_cast<Eigen::Index>(std::max(space.side_dim(Side::A), space.side_dim(Side::B)));
  if (numerical_rank(rho.matrix(), kSupportCutoff) > bound) return Decision::Indeterminate;
  return psd_check(partial_transpose(rho.matrix(), space), 1e-9) ? Decision::Yes : Decision::No;
}

/// Whether the orthogonal complement of ψ admits a PPT-distinguishable basis.
inline bool complement_basis_predicate(const PureState& psi) { return schmidt_number(psi) <= 2; }

inline SchmidtBound sep_unambiguous_schmidt_bound(const PureState& psi, const PureState& alpha) {
  return schmidt_number(alpha) < schmidt_number(psi) ? SchmidtBound::Excluded : SchmidtBound::Possible;
}

struct DetectionCheck {
  bool by_trace = false;     // tr(Eρ) ≥ 1 − 1e-9
  bool by_operator = false;  // E − P_supp(ρ) ⪰ 0
};

inline DetectionCheck perfect_detection_details(const Matrix& effect, const DensityOperator& rho) {
  require_operator_on(effect, rho.space(), "perfect_detection_check");
  if (!is_hermitian(effect) || !psd_check(effect, 1e-9) ||
      !psd_check(identity(effect.rows()) - effect, 1e-9))
    raise(ErrorCode::BadEffect, "effect must satisfy 0 <= E <= I");
  DetectionCheck c;
  c.by_trace = real_trace_product(effect, rho.matrix()) >= 1.0 - 1e-9;
  c.by_operator = psd_check(effect - support_projector(rho.matrix(), kSupportCutoff), 1e-9);
  return c;
}

/// Whether outcome E fires with certainty on ρ.
inline bool perfect_detection_check(const Matrix& effect, const DensityOperator& rho) {
  return perfect_detection_details(effect, rho).by_trace;
}

/// {Ψ0, Ψ1, Ψ2} ⊗ α(λ0) on X1 (A), Y1 (B), X2 (A), Y2 (B).
inline DiscriminationInstance three_bell_instance(double lambda0) {
  const auto bells = DiscriminationInstance::from_pure({bell_state(0), bell_state(1), bell_state(2)});
  return tensor_with_resource(bells, two_qubit_resource(lambda0));
}

/// {Ψ0 ⊗ α, complement(Ψ0) ⊗ α} with α = √ι|00⟩ + √(1−ι)|11⟩.
inline DiscriminationInstance bell_complement_instance(double iota) {
  return detail::pure_and_complement(bell_state(0), two_qubit_resource(iota));
}

}  // namespace pptdist
