#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptdist/discrim.hpp"
#include "pptdist/hssh.hpp"
#include "pptdist/multicopy.hpp"
#include "pptdist/povm.hpp"
#include "pptdist/random.hpp"
#include "pptdist/sdp_instances.hpp"

namespace pptdist::experiments {

using json = nlohmann::json;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0: no runtime bound
  json payload = json::object();
};

namespace detail {

template <class F>
CriterionResult timed(int id, std::string name, double budget, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.budget_seconds = budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.pass = body(r.payload);
  } catch (const Error& e) {
    r.pass = false;
    r.payload["error"] = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0.0 && r.seconds >= budget) r.pass = false;
  return r;
}

inline double max_residual(const Eigen::MatrixXd& m) {
  return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

/// Largest violation among completeness, positivity and PPT of every effect.
inline double povm_residual(const Povm& p) {
  const auto n = static_cast<Eigen::Index>(p.space().total_dim());
  Matrix sum = Matrix::Zero(n, n);
  double worst = 0.0;
  for (const auto& e : p.effects()) {
    sum += e;
    worst = std::max(worst, -min_eigenvalue(e));
    worst = std::max(worst, -min_eigenvalue(partial_transpose(e, p.space())));
  }
  return std::max(worst, max_abs(sum - identity(n)));
}

}  // namespace detail

/// {|u_i⟩ ⊗ |v_ij⟩}: a Haar basis for Alice and an independent Haar basis for Bob per i.
inline DiscriminationInstance random_product_basis(int da, int db, Rng& rng) {
  const Matrix u = haar_unitary(da, rng);
  const auto space = BipartiteSpace::pair(da, db);
  std::vector<PureState> states;
  for (int i = 0; i < da; ++i) {
    const Matrix v = haar_unitary(db, rng);
    for (int j = 0; j < db; ++j) states.emplace_back(tensor(Vector(u.col(i)), Vector(v.col(j))), space);
  }
  return DiscriminationInstance::from_pure(states);
}

/// Basis of 2⊗db whose first two vectors are (|00⟩ ± |11⟩)/√2, rotated by one random
/// local unitary.
inline DiscriminationInstance bell_containing_basis(int db, Rng& rng) {
  const auto space = BipartiteSpace::pair(2, db);
  const auto n = static_cast<Eigen::Index>(2 * db);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Vector> vs;
  Vector plus = Vector::Zero(n), minus = Vector::Zero(n);
  plus(0) = minus(0) = s;
  plus(db + 1) = s;
  minus(db + 1) = -s;
  vs.push_back(plus);
  vs.push_back(minus);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < db; ++j)
      if (i != j) vs.push_back(basis_vector(n, i * db + j));
  const Matrix u = random_local_unitary(space, rng);
  std::vector<PureState> states;
  for (const auto& v : vs) states.emplace_back(u * v, space);
  return DiscriminationInstance::from_pure(states);
}

inline CriterionResult three_bell_threshold() {
  return detail::timed(1, "three-Bell threshold at lambda0 = 2/3", 60.0, [](json& out) {
    const auto th = cost_threshold_bisection(three_bell_instance, 0.5, 1.0, 1e-4);
    out["threshold"] = th.value;
    out["probes"] = th.probes;
    bool ok = th.boundary_found && std::abs(th.value - 2.0 / 3.0) <= 1e-3;
    for (double l : {0.55, 0.60, 0.66}) {
      const auto r = perfect_ppt_feasibility(three_bell_instance(l));
      out["yes_points"].push_back({{"lambda0", l}, {"status", to_string(r.feasible)}, {"slack", r.slack}});
      ok = ok && r.feasible == Feasibility::Yes;
    }
    for (double l : {0.68, 0.75, 0.9}) {
      const auto r = perfect_ppt_feasibility(three_bell_instance(l));
      out["no_points"].push_back({{"lambda0", l}, {"status", to_string(r.feasible)}, {"slack", r.slack}});
      ok = ok && r.feasible == Feasibility::No;
    }
    return ok;
  });
}

inline CriterionResult three_bell_explicit_povm() {
  return detail::timed(2, "explicit three-Bell POVM", 1.0, [](json& out) {
    const auto c = three_bell_povm();
    const double povm_res = detail::povm_residual(c.povm);
    const double disc_res = detail::max_residual(discrimination_matrix(c.povm, c.instance));
    out["povm_residual"] = povm_res;
    out["discrimination_residual"] = disc_res;
    out["verify_povm"] = verify_povm(c.povm);
    out["is_ppt_povm"] = out["verify_povm"].get<bool>() && is_ppt_povm(c.povm);
    return out["is_ppt_povm"].get<bool>() && povm_res <= 1e-9 && disc_res <= 1e-9;
  });
}

/// {λ_i} ∪ {±√(λ_i λ_j), i < j}, sorted ascending.
inline std::vector<double> pure_transpose_spectrum(const std::vector<double>& lambdas) {
  std::vector<double> out(lambdas);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
      const double g = std::sqrt(lambdas[i] * lambdas[j]);
      out.push_back(g);
      out.push_back(-g);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline CriterionResult partial_transpose_spectrum(std::uint64_t seed = 3) {
  return detail::timed(3, "partial transpose spectrum of pure states", 0.0, [seed](json& out) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(2, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto lambdas = random_spectrum(dim(rng), rng);
      const auto psi = rotate_locally(schmidt_form_state(lambdas), rng);
      const auto eig = eigenvalues(partial_transpose(psi.projector(), psi.space()));
      const auto expected = pure_transpose_spectrum(lambdas);
      for (std::size_t k = 0; k < expected.size(); ++k)
        worst = std::max(worst, std::abs(eig(static_cast<Eigen::Index>(k)) - expected[k]));
    }
    out["max_deviation"] = worst;
    return worst <= 1e-9;
  });
}

inline CriterionResult multicopy_indistinguishability() {
  return detail::timed(4, "multicopy PPT unambiguous value is zero", 120.0, [](json& out) {
    bool ok = true;
    for (int d = 2; d <= 4; ++d)
      for (int m = 1; m <= 8; ++m) {
        const double v = unambiguous_multicopy_value(d, m);
        out["values"].push_back({{"d", d}, {"m", m}, {"value", v}});
        ok = ok && std::abs(v) <= 1e-8;
      }
    for (int d = 2; d <= 4; ++d) {
      const auto phi = maximally_entangled(d);
      const double sdp = unambiguous_ppt_value(DensityOperator(phi), complement_state(phi));
      const double lp = unambiguous_multicopy_value(d, 1);
      out["cross_check"].push_back({{"d", d}, {"sdp", sdp}, {"lp", lp}});
      ok = ok && std::abs(sdp - lp) <= 1e-7;
    }
    return ok;
  });
}

inline CriterionResult maximal_resource_construction(std::uint64_t seed = 5) {
  return detail::timed(5, "construction with a maximally entangled resource", 0.0, [seed](json& out) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(2, 6);
    int passed = 0;
    double worst_abs = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto psi = rotate_locally(schmidt_form_state(random_spectrum(dim(rng), rng)), rng);
      const auto c = thm15_povm(psi);
      const auto& a = c.params.operators.at("A");
      const auto& b = c.params.operators.at("B");
      const double abs_gap = max_abs(matrix_abs(b) - a);
      worst_abs = std::max(worst_abs, abs_gap);
      if (check_witness(c.povm, c.instance).all() && abs_gap <= 1e-10) ++passed;
    }
    out["passed"] = passed;
    out["max_abs_identity_gap"] = worst_abs;
    return passed == 50;
  });
}

inline CriterionResult partial_resource_construction(std::uint64_t seed = 6) {
  return detail::timed(6, "construction with a partially entangled resource", 0.0, [seed](json& out) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(2, 6);
    int passed = 0;
    double max_iota = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> lambdas;
      do lambdas = random_spectrum(dim(rng), rng);
      while (std::sqrt(lambdas[0] * lambdas[1]) >= 0.5 - 1e-9 || lambdas.back() <= 1e-12);
      const auto psi = rotate_locally(schmidt_form_state(lambdas), rng);
      const auto c = thm16_povm(psi);
      const double iota = c.params.scalars.at("iota");
      max_iota = std::max(max_iota, iota);
      if (iota < 0.5 && check_witness(c.povm, c.instance).all()) ++passed;
    }
    out["passed"] = passed;
    out["max_iota"] = max_iota;
    return passed == 50;
  });
}

inline CriterionResult two_qubit_necessity() {
  return detail::timed(7, "two-qubit case needs a maximally entangled resource", 0.0, [](json& out) {
    bool ok = true;
    for (double iota : {0.30, 0.40, 0.45, 0.49}) {
      const auto r = perfect_ppt_feasibility(bell_complement_instance(iota));
      out["points"].push_back({{"iota", iota}, {"status", to_string(r.feasible)}, {"slack", r.slack}});
      ok = ok && r.feasible == Feasibility::No;
    }
    const auto witness = thm19_povm(2);
    const auto r = perfect_ppt_feasibility(bell_complement_instance(0.5), witness.povm);
    out["points"].push_back({{"iota", 0.5},
                             {"status", to_string(r.feasible)},
                             {"slack", r.slack},
                             {"witness_source", r.witness_source}});
    return ok && r.feasible == Feasibility::Yes && r.witness_source == "supplied";
  });
}

inline CriterionResult maximally_entangled_family() {
  return detail::timed(8, "resource cost for maximally entangled states", 0.0, [](json& out) {
    bool ok = true;
    for (int d = 2; d <= 8; ++d) {
      const auto c = thm19_povm(d);
      const double iota = c.params.scalars.at("iota");
      const double expected = d <= 4 ? 4.0 / (d * d + 4.0) : 1.0 / (d + 2.0);
      const bool verified = check_witness(c.povm, c.instance).all();
      out["constructions"].push_back({{"d", d}, {"iota", iota}, {"verified", verified}});
      ok = ok && verified && std::abs(iota - expected) <= 1e-12;
    }
    for (int d : {8, 16, 32, 64}) {
      const double e = entanglement_entropy(two_qubit_resource(maximally_entangled_params(d).iota));
      const double bound = 2.0 * std::log2(static_cast<double>(d)) / d;
      out["entropy"].push_back({{"d", d}, {"entropy", e}, {"bound", bound}});
      ok = ok && e <= bound;
    }
    return ok;
  });
}

inline CriterionResult hssh_limitation(std::uint64_t seed = 9) {
  return detail::timed(9, "ququad set escapes every detector ensemble", 60.0, [seed](json& out) {
    const auto chi = ququad_set();
    int undetected = 0, catalysis = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto ens = random_detector_ensemble(seed * 1000 + s);
      undetected += !hssh_detect(chi, ens);
      catalysis += catalysis_transform_check(ens);
    }
    out["undetected"] = undetected;
    out["catalysis_true"] = catalysis;
    return undetected == 200 && catalysis == 200;
  });
}

inline CriterionResult three_bell_locc_bound() {
  return detail::timed(10, "LOCC lower bound for three Bell states", 0.0, [](json& out) {
    bool ok = true;
    auto check = [&](double l, bool excluded) {
      const auto r = three_bell_lower_bound(l);
      out["points"].push_back({{"lambda0", l}, {"lambda_max", r.lambda_max}, {"excluded", r.excluded}});
      ok = ok && r.excluded == excluded && std::abs(r.lambda_max - 0.75 * l) <= 1e-9;
    };
    for (double l : {0.68, 0.7, 0.8}) check(l, true);
    for (double l : {0.5, 0.6, 2.0 / 3.0}) check(l, false);
    return ok;
  });
}

inline CriterionResult product_basis_sanity(std::uint64_t seed = 11) {
  return detail::timed(11, "product bases are PPT-distinguishable, Bell-containing bases are not", 0.0, [seed](json& out) {
    Rng rng(seed);
    int yes = 0, no = 0, total = 0;
    for (int db : {2, 3})
      for (int trial = 0; trial < 10; ++trial) {
        ++total;
        yes += perfect_ppt_feasibility(random_product_basis(2, db, rng)).feasible == Feasibility::Yes;
        no += perfect_ppt_feasibility(bell_containing_basis(db, rng)).feasible == Feasibility::No;
      }
    out["product_yes"] = yes;
    out["bell_no"] = no;
    out["trials"] = total;
    return yes == total && no == total;
  });
}

inline CriterionResult solver_integrity(std::uint64_t seed = 12) {
  return detail::timed(12, "interior-point solver accuracy", 0.0, [seed](json& out) {
    Rng rng(seed);
    int passed = 0;
    double worst_gap = 0.0, worst_res = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto inst = random_feasible_sdp(rng, trial % 2 == 0, 20);
      const auto s = solve(inst.problem);
      const double gap = s.gap / (1.0 + std::abs(s.objective));
      worst_gap = std::max(worst_gap, gap);
      worst_res = std::max(worst_res, s.primal_residual);
      if (s.status == SdpStatus::Optimal && gap <= 1e-7 && s.primal_residual <= 1e-7) ++passed;
    }
    out["passed"] = passed;
    out["worst_relative_gap"] = worst_gap;
    out["worst_primal_residual"] = worst_res;
    return passed == 50;
  });
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
  return {three_bell_threshold,
          three_bell_explicit_povm,
          [] { return partial_transpose_spectrum(); },
          multicopy_indistinguishability,
          [] { return maximal_resource_construction(); },
          [] { return partial_resource_construction(); },
          two_qubit_necessity,
          maximally_entangled_family,
          [] { return hssh_limitation(); },
          three_bell_locc_bound,
          [] { return product_basis_sanity(); },
          [] { return solver_integrity(); }};
}

inline json to_json(const CriterionResult& r) {
  json out = {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"result", r.payload}};
  if (r.budget_seconds > 0.0) out["budget_seconds"] = r.budget_seconds;
  return out;
}

}  // namespace pptdist::experiments
