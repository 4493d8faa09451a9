#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "pptdist/random.hpp"
#include "pptdist/states.hpp"

namespace pptdist {

inline constexpr double kMajorizationTol = 1e-10;

/// Probabilities and detector states on one common detector space.
class EnsembleSpec {
 public:
  EnsembleSpec(std::vector<double> probabilities, std::vector<PureState> detectors)
      : probabilities_(std::move(probabilities)), detectors_(std::move(detectors)) {
    if (probabilities_.empty() || probabilities_.size() != detectors_.size())
      raise(ErrorCode::BadEnsemble, "need one probability per detector");
    double sum = 0.0;
    for (double p : probabilities_) {
      if (p < 0.0) raise(ErrorCode::BadEnsemble, "probabilities must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10) raise(ErrorCode::BadEnsemble, "probabilities must sum to 1");
    for (const auto& d : detectors_)
      if (!(d.space() == detectors_.front().space())) raise(ErrorCode::BadEnsemble, "detectors must share one space");
  }

  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  const std::vector<PureState>& detectors() const noexcept { return detectors_; }
  std::size_t size() const noexcept { return detectors_.size(); }
  const BipartiteSpace& space() const noexcept { return detectors_.front().space(); }

  /// Every detector tensored with the same state.
  EnsembleSpec tensored(const PureState& extra) const {
    std::vector<PureState> out;
    for (const auto& d : detectors_) out.push_back(tensor(d, extra));
    return {probabilities_, std::move(out)};
  }

 private:
  std::vector<double> probabilities_;
  std::vector<PureState> detectors_;
};

/// Whether x majorizes y: descending partial sums of x dominate those of y.
inline bool majorizes(std::vector<double> x, std::vector<double> y) {
  const double sx = std::accumulate(x.begin(), x.end(), 0.0), sy = std::accumulate(y.begin(), y.end(), 0.0);
  if (std::abs(sx - sy) > 1e-9) raise(ErrorCode::SumMismatch, "majorization needs equal sums");
  const std::size_t n = std::max(x.size(), y.size());
  x.resize(n, 0.0);
  y.resize(n, 0.0);
  std::sort(x.begin(), x.end(), std::greater<>());
  std::sort(y.begin(), y.end(), std::greater<>());
  double px = 0.0, py = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    px += x[i];
    py += y[i];
    if (px < py - kMajorizationTol) return false;
  }
  return true;
}

/// Whether source → target is possible by LOCC.
inline bool nielsen_possible(const PureState& source, const PureState& target) {
  return majorizes(schmidt_coefficients(target), schmidt_coefficients(source));
}

/// Σ_k p_k λ(φ_k), each spectrum sorted descending and zero-padded.
inline std::vector<double> average_spectrum(const EnsembleSpec& ens) {
  std::vector<double> out;
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const auto lambdas = schmidt_coefficients(ens.detectors()[k]);
    if (out.size() < lambdas.size()) out.resize(lambdas.size(), 0.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] += ens.probabilities()[k] * lambdas[i];
  }
  return out;
}

/// Jonathan–Plenio: source → {p_k, φ_k} is possible by LOCC.
inline bool ensemble_possible(const PureState& source, const EnsembleSpec& ens) {
  return majorizes(average_spectrum(ens), schmidt_coefficients(source));
}

/// Σ_k √p_k |ψ_k⟩|φ_k⟩ on the states' factors followed by the detector factors.
inline PureState flagged_superposition(const std::vector<PureState>& states, const EnsembleSpec& ens) {
  if (states.size() != ens.size()) raise(ErrorCode::DimensionMismatch, "need one detector per state");
  for (const auto& s : states)
    if (!(s.space() == states.front().space())) raise(ErrorCode::DimensionMismatch, "states must share one space");
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(states[i].vector().dot(states[j].vector())) > 1e-9)
        raise(ErrorCode::NotOrthogonal, "states must be mutually orthogonal");
  const BipartiteSpace space = states.front().space().merged(ens.space());
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  for (std::size_t k = 0; k < states.size(); ++k)
    v += std::sqrt(ens.probabilities()[k]) * tensor(states[k].vector(), ens.detectors()[k].vector());
  return PureState::normalized(v, space);
}

/// True when the flagged superposition cannot reach the detector ensemble, which shows
/// the states are not LOCC-distinguishable. An explicit cut must describe the same factors.
inline bool hssh_detect(const std::vector<PureState>& states, const EnsembleSpec& ens,
                        const std::optional<BipartiteSpace>& cut = std::nullopt) {
  PureState psi = flagged_superposition(states, ens);
  if (cut) {
    if (cut->total_dim() != psi.space().total_dim()) raise(ErrorCode::DimensionMismatch, "cut does not match the states");
    psi = PureState(psi.vector(), *cut);
  }
  return !ensemble_possible(psi, ens);
}

/// Smallest m ≤ cap with β^{⊗m} → Φ_d possible by LOCC, searched over Schmidt
/// spectra only. Stops early once the spectrum would exceed max_terms entries.
inline std::optional<int> copies_for_maximal_entanglement(const PureState& beta, int d, int cap = 32,
                                                          std::size_t max_terms = std::size_t{1} << 22) {
  if (d < 2) raise(ErrorCode::BadDimension, "target dimension must be >= 2");
  std::vector<double> base;
  for (double l : schmidt_coefficients(beta))
    if (l > 1e-12) base.push_back(l);
  if (base.size() < 2) return std::nullopt;
  const std::vector<double> target(static_cast<std::size_t>(d), 1.0 / d);
  std::vector<double> power{1.0};
  for (int m = 1; m <= cap; ++m) {
    if (power.size() * base.size() > max_terms) return std::nullopt;
    std::vector<double> next;
    next.reserve(power.size() * base.size());
    for (double a : power)
      for (double b : base) next.push_back(a * b);
    power = std::move(next);
    if (majorizes(target, power)) return m;
  }
  return std::nullopt;
}

struct LowerBoundResult {
  double lambda_max = 0.0;
  bool excluded = false;
};

/// (1/√3) Σ_{k=1..3} |Ψ_k⟩|β⟩|Ψ_k⟩ with β = √λ0|00⟩ + √(1−λ0)|11⟩.
inline PureState three_bell_flagged_state(double lambda0) {
  const PureState beta = two_qubit_resource(lambda0);
  std::vector<PureState> states;
  std::vector<PureState> detectors;
  for (int k = 1; k <= 3; ++k) {
    states.push_back(tensor(bell_state(k), beta));
    detectors.push_back(bell_state(k));
  }
  return flagged_superposition(states, EnsembleSpec({1.0 / 3, 1.0 / 3, 1.0 / 3}, detectors));
}

/// Largest Schmidt coefficient of the flagged state; above 1/2 it cannot reach a
/// two-qubit maximally entangled state, so LOCC discrimination with β is excluded.
inline LowerBoundResult three_bell_lower_bound(double lambda0) {
  if (!(lambda0 >= 0.5 && lambda0 <= 1.0)) raise(ErrorCode::BadRange, "lambda0 must lie in [1/2, 1]");
  const double lmax = schmidt_coefficients(three_bell_flagged_state(lambda0)).front();
  return {lmax, lmax > 0.5 + 1e-9};
}

struct CatalysisCheck {
  bool plain = false;     // ψ → ensemble
  bool catalyzed = false; // ψ⊗Ψ0 → ensemble⊗Ψ0
  bool agree() const { return plain == catalyzed; }
};

inline CatalysisCheck catalysis_details(const EnsembleSpec& ens) {
  if (ens.size() != 4) raise(ErrorCode::BadEnsemble, "ensemble must have one detector per ququad state");
  const auto chi = ququad_set();
  const PureState psi = flagged_superposition(chi, ens);
  const PureState phi = bell_state(0);
  return {ensemble_possible(psi, ens), ensemble_possible(tensor(psi, phi), ens.tensored(phi))};
}

/// The common truth value of the plain and catalyzed transformations, false if they differ.
inline bool catalysis_transform_check(const EnsembleSpec& ens) {
  const auto c = catalysis_details(ens);
  return c.agree() && c.plain;
}

/// Four Haar-random detectors on dA⊗dB with dA, dB ∈ {2, 3, 4} and random probabilities.
inline EnsembleSpec random_detector_ensemble(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> dim(2, 4);
  const auto space = BipartiteSpace::pair(dim(rng), dim(rng));
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(4);
  for (auto& x : p) x = expo(rng);
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= sum;
  std::vector<PureState> detectors;
  for (int k = 0; k < 4; ++k) detectors.push_back(haar_state(space, rng));
  return {p, std::move(detectors)};
}

inline bool catalysis_transform_check(std::uint64_t seed) {
  return catalysis_transform_check(random_detector_ensemble(seed));
}

}  // namespace pptdist
