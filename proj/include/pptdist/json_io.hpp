#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptdist/discrim.hpp"
#include "pptdist/hssh.hpp"
#include "pptdist/povm.hpp"
#include "pptdist/sdp.hpp"

namespace pptdist::io {

using json = nlohmann::json;

namespace detail {

/// Runs f and reports any JSON library failure as ParseError.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

/// "im" may be omitted for real data.
inline Matrix matrix_from_json(const json& j) {
  return detail::guarded("matrix", [&] {
    const auto rows = detail::field(j, "rows").get<Eigen::Index>();
    const auto cols = detail::field(j, "cols").get<Eigen::Index>();
    if (rows < 0 || cols < 0) raise(ErrorCode::ParseError, "matrix shape must be nonnegative");
    const json& re = detail::field(j, "re");
    const bool has_im = j.contains("im");
    Matrix m(rows, cols);
    if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != rows)
      raise(ErrorCode::ParseError, "matrix \"re\" must have one array per row");
    if (has_im && (!j.at("im").is_array() || static_cast<Eigen::Index>(j.at("im").size()) != rows))
      raise(ErrorCode::ParseError, "matrix \"im\" must have one array per row");
    for (Eigen::Index r = 0; r < rows; ++r) {
      const json& rr = re.at(static_cast<std::size_t>(r));
      if (!rr.is_array() || static_cast<Eigen::Index>(rr.size()) != cols) raise(ErrorCode::ParseError, "matrix row length mismatch");
      for (Eigen::Index c = 0; c < cols; ++c) {
        double imag = 0.0;
        if (has_im) {
          const json& ir = j.at("im").at(static_cast<std::size_t>(r));
          if (static_cast<Eigen::Index>(ir.size()) != cols) raise(ErrorCode::ParseError, "matrix row length mismatch");
          imag = ir.at(static_cast<std::size_t>(c)).get<double>();
        }
        m(r, c) = cplx(rr.at(static_cast<std::size_t>(c)).get<double>(), imag);
      }
    }
    return m;
  });
}

inline json space_to_json(const BipartiteSpace& s) {
  json out = json::array();
  for (std::size_t f = 0; f < s.size(); ++f) out.push_back({{"dim", s[f].dim}, {"side", s[f].side == Side::A ? "A" : "B"}});
  return out;
}

inline BipartiteSpace space_from_json(const json& j) {
  return detail::guarded("factors", [&] {
    if (!j.is_array() || j.empty()) raise(ErrorCode::ParseError, "factors must be a nonempty array");
    std::vector<Factor> factors;
    for (const auto& f : j) {
      const auto side = detail::field(f, "side").get<std::string>();
      if (side != "A" && side != "B") raise(ErrorCode::ParseError, "factor side must be \"A\" or \"B\"");
      const int dim = detail::field(f, "dim").get<int>();
      if (dim < 1) raise(ErrorCode::ParseError, "factor dimension must be positive");
      factors.push_back({dim, side == "A" ? Side::A : Side::B});
    }
    return BipartiteSpace(factors);
  });
}

inline json state_to_json(const PureState& psi) {
  Matrix col = psi.vector();
  return {{"factors", space_to_json(psi.space())}, {"vector", matrix_to_json(col)}};
}

inline json state_to_json(const DensityOperator& rho) {
  return {{"factors", space_to_json(rho.space())}, {"matrix", matrix_to_json(rho.matrix())}};
}

inline PureState pure_state_from_json(const json& j) {
  const auto space = space_from_json(detail::field(j, "factors"));
  const Matrix v = matrix_from_json(detail::field(j, "vector"));
  if (v.cols() != 1) raise(ErrorCode::ParseError, "state vector must have one column");
  return PureState(v.col(0), space);
}

/// Accepts either the pure ("vector") or the density ("matrix") form.
inline DensityOperator density_from_json(const json& j) {
  if (j.is_object() && j.contains("vector")) return DensityOperator(pure_state_from_json(j));
  const auto space = space_from_json(detail::field(j, "factors"));
  return DensityOperator(matrix_from_json(detail::field(j, "matrix")), space);
}

inline json instance_to_json(const DiscriminationInstance& instance) {
  json states = json::array();
  for (const auto& rho : instance.states()) states.push_back(state_to_json(rho));
  return {{"states", std::move(states)}};
}

/// {"states": [state JSON, ...]}.
inline DiscriminationInstance instance_from_json(const json& j) {
  const json& states = detail::field(j, "states");
  if (!states.is_array()) raise(ErrorCode::ParseError, "\"states\" must be an array");
  std::vector<DensityOperator> rhos;
  for (const auto& s : states) rhos.push_back(density_from_json(s));
  return DiscriminationInstance(std::move(rhos));
}

inline std::vector<PureState> pure_states_from_json(const json& j) {
  const json& states = detail::field(j, "states");
  if (!states.is_array()) raise(ErrorCode::ParseError, "\"states\" must be an array");
  std::vector<PureState> out;
  for (const auto& s : states) out.push_back(pure_state_from_json(s));
  return out;
}

inline json povm_to_json(const Povm& p) {
  json effects = json::array();
  for (const auto& e : p.effects()) effects.push_back(matrix_to_json(e));
  return {{"space", space_to_json(p.space())}, {"effects", std::move(effects)}};
}

inline Povm povm_from_json(const json& j) {
  const auto space = space_from_json(detail::field(j, "space"));
  const json& effects = detail::field(j, "effects");
  if (!effects.is_array()) raise(ErrorCode::ParseError, "\"effects\" must be an array");
  std::vector<Matrix> out;
  for (const auto& e : effects) out.push_back(matrix_from_json(e));
  return Povm(std::move(out), space);
}

inline json ensemble_to_json(const EnsembleSpec& ens) {
  json detectors = json::array();
  for (const auto& d : ens.detectors()) detectors.push_back(state_to_json(d));
  return {{"probabilities", ens.probabilities()}, {"detectors", std::move(detectors)}};
}

inline EnsembleSpec ensemble_from_json(const json& j) {
  const auto probs = detail::guarded("probabilities", [&] { return detail::field(j, "probabilities").get<std::vector<double>>(); });
  const json& detectors = detail::field(j, "detectors");
  if (!detectors.is_array()) raise(ErrorCode::ParseError, "\"detectors\" must be an array");
  std::vector<PureState> out;
  for (const auto& d : detectors) out.push_back(pure_state_from_json(d));
  return EnsembleSpec(probs, std::move(out));
}

/// {"blocks": [...], "objective": [per-block Matrix JSON], "constraints": [{"rhs", "coefficient": [...]}]}.
inline json sdp_to_json(const SdpProblem& p) {
  auto blocks_of = [&](const SdpCoefficient& c) {
    json out = json::array();
    for (std::size_t b = 0; b < p.blocks.size(); ++b) out.push_back(matrix_to_json(p.dense_block(c, static_cast<int>(b))));
    return out;
  };
  json cons = json::array();
  for (const auto& c : p.constraints) cons.push_back({{"rhs", c.rhs}, {"coefficient", blocks_of(c.coefficient)}});
  return {{"blocks", p.blocks}, {"objective", blocks_of(p.objective)}, {"constraints", std::move(cons)}};
}

inline SdpProblem sdp_from_json(const json& j) {
  SdpProblem p;
  p.blocks = detail::guarded("blocks", [&] { return detail::field(j, "blocks").get<std::vector<int>>(); });
  auto read_blocks = [&](const json& arr) {
    if (!arr.is_array() || arr.size() != p.blocks.size()) raise(ErrorCode::ParseError, "need one matrix per block");
    SdpCoefficient c;
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      SdpProblem::add_dense(c, static_cast<int>(b), matrix_from_json(arr.at(b)));
    return c;
  };
  p.objective = read_blocks(detail::field(j, "objective"));
  for (const auto& c : detail::field(j, "constraints")) {
    const double rhs = detail::guarded("rhs", [&] { return detail::field(c, "rhs").get<double>(); });
    p.constraints.push_back({read_blocks(detail::field(c, "coefficient")), rhs});
  }
  return p;
}

inline json report_to_json(const FeasibilityReport& r, bool include_witness = false) {
  json out = {{"status", to_string(r.feasible)},
              {"slack", r.slack},
              {"solver_status", to_string(r.solver_status)},
              {"iterations", r.iterations},
              {"witness_source", r.witness_source}};
  if (include_witness && r.witness) out["witness"] = povm_to_json(*r.witness);
  return out;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return detail::guarded("json", [&] { return json::parse(ss.str()); });
}

}  // namespace pptdist::io
