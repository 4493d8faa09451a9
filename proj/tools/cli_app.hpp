#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pptdist/discrim.hpp"
#include "pptdist/experiments.hpp"
#include "pptdist/hssh.hpp"
#include "pptdist/json_io.hpp"
#include "pptdist/multicopy.hpp"
#include "pptdist/povm.hpp"
#include "pptdist/random.hpp"

namespace pptdist::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::IllPosed:
    case ErrorCode::NonMonotone:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

struct Flags {
  double tol = 1e-4;
  std::uint64_t seed = 1;
  std::string d;
  std::string m;
  std::string lambda;
  std::string iota;
  int samples = 200;
  std::string out;
  std::string family = "three-bell";
  std::string construction;
  std::string instance_file;
  std::string resource_file;
  std::string witness_file;
  std::string states_file;
  std::string ensemble_file;
};

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      raise(ErrorCode::ParseError, std::string("cannot parse --") + what + " entry \"" + item + "\"");
    }
  }
  if (out.empty()) raise(ErrorCode::ParseError, std::string("--") + what + " needs at least one value");
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_list(text, what)) {
    if (v != std::floor(v)) raise(ErrorCode::ParseError, std::string("--") + what + " entries must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

/// Descending, nonnegative and summing to 1 within 1e-9.
inline std::vector<double> parse_spectrum(const std::string& text) {
  const auto lambdas = parse_list(text, "lambda");
  double sum = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0) raise(ErrorCode::BadRange, "spectrum entries must be nonnegative");
    if (i > 0 && lambdas[i] > lambdas[i - 1] + 1e-12) raise(ErrorCode::BadRange, "spectrum must be descending");
    sum += lambdas[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) raise(ErrorCode::BadRange, "spectrum must sum to 1");
  return lambdas;
}

class Reporter {
 public:
  Reporter(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void open(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) raise(ErrorCode::ParseError, "cannot open output file " + path);
  }

  void emit(const json& report) { (file_.is_open() ? static_cast<std::ostream&>(file_) : out_) << report.dump() << '\n'; }

  std::ostream& table() { return err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::ofstream file_;
};

inline json make_report(const std::string& name, json parameters, json result, bool pass, double ms, std::uint64_t seed) {
  return {{"experiment", name}, {"parameters", std::move(parameters)}, {"result", std::move(result)},
          {"pass", pass},       {"elapsed_ms", ms},                    {"seed", seed}};
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline int cmd_check(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  auto instance = io::instance_from_json(io::read_file(f.instance_file));
  json params = {{"instance", f.instance_file}};
  if (!f.resource_file.empty()) {
    instance = tensor_with_resource(instance, io::pure_state_from_json(io::read_file(f.resource_file)));
    params["resource"] = f.resource_file;
  }
  std::optional<Povm> witness;
  if (!f.witness_file.empty()) {
    witness = io::povm_from_json(io::read_file(f.witness_file));
    params["witness"] = f.witness_file;
  }
  const auto r = perfect_ppt_feasibility(instance, witness);
  if (r.solver_status != SdpStatus::Optimal && !r.witness) {
    rep.table() << "check: solver ended " << to_string(r.solver_status) << "\n";
    return kExitNumeric;
  }
  rep.emit(make_report("check", params, io::report_to_json(r, true), r.feasible != Feasibility::Marginal, sw.ms(), f.seed));
  rep.table() << "check  feasible=" << to_string(r.feasible) << "  slack=" << r.slack << "\n";
  return kExitOk;
}

inline int cmd_threshold(const Flags& f, Reporter& rep) {
  if (f.family != "three-bell") raise(ErrorCode::ParseError, "unknown family \"" + f.family + "\"");
  Stopwatch sw;
  const auto th = cost_threshold_bisection(three_bell_instance, 0.5, 1.0, f.tol);
  const bool pass = th.boundary_found && std::abs(th.value - 2.0 / 3.0) <= std::max(f.tol, 1e-3);
  rep.emit(make_report("threshold", {{"family", f.family}, {"tol", f.tol}},
                       {{"threshold", th.value}, {"boundary_found", th.boundary_found}, {"probes", th.probes}}, pass,
                       sw.ms(), f.seed));
  rep.table() << "threshold  lambda0*=" << std::setprecision(6) << th.value << "  probes=" << th.probes << "\n";
  return kExitOk;
}

inline PureState spectrum_state(const Flags& f, Rng& rng) {
  if (!f.lambda.empty()) return schmidt_form_state(parse_spectrum(f.lambda));
  const int d = f.d.empty() ? 2 : parse_int_list(f.d, "d").front();
  if (d < 2) raise(ErrorCode::BadDimension, "--d must be at least 2");
  return schmidt_form_state(random_spectrum(d, rng));
}

inline int cmd_verify(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  Rng rng(f.seed);
  json params = {{"construction", f.construction}};
  std::optional<Construction> c;
  if (f.construction == "thm10") {
    c = three_bell_povm();
  } else if (f.construction == "thm15") {
    c = thm15_povm(spectrum_state(f, rng));
  } else if (f.construction == "thm16") {
    c = thm16_povm(spectrum_state(f, rng));
  } else if (f.construction == "thm19") {
    if (f.d.empty()) raise(ErrorCode::ParseError, "thm19 needs --d");
    const int d = parse_int_list(f.d, "d").front();
    params["d"] = d;
    c = thm19_povm(d);
  } else {
    raise(ErrorCode::ParseError, "unknown construction \"" + f.construction + "\"");
  }
  if (!f.lambda.empty()) params["lambda"] = parse_list(f.lambda, "lambda");
  const auto checks = check_witness(c->povm, c->instance);
  json result = {{"verify_povm", checks.valid},
                 {"is_ppt_povm", checks.ppt},
                 {"perfect_discrimination", checks.perfect},
                 {"discrimination_error", checks.discrimination_error},
                 {"parameters", c->params.scalars}};
  rep.emit(make_report("verify", params, result, checks.all(), sw.ms(), f.seed));
  rep.table() << "verify " << f.construction << "  povm=" << checks.valid << "  ppt=" << checks.ppt
              << "  perfect=" << checks.perfect << "\n";
  return kExitOk;
}

inline int cmd_multicopy(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  const auto ds = parse_int_list(f.d.empty() ? "2,3,4" : f.d, "d");
  const auto ms = parse_int_list(f.m.empty() ? "1,2,3,4,5,6,7,8" : f.m, "m");
  json rows = json::array();
  bool pass = true;
  for (int d : ds)
    for (int m : ms) {
      const double v = unambiguous_multicopy_value(d, m);
      rows.push_back({{"d", d}, {"m", m}, {"value", v}});
      pass = pass && std::abs(v) <= 1e-8;
      rep.table() << "multicopy  d=" << d << "  m=" << m << "  value=" << v << "\n";
    }
  rep.emit(make_report("multicopy", {{"d", ds}, {"m", ms}}, {{"values", rows}}, pass, sw.ms(), f.seed));
  return kExitOk;
}

inline int cmd_hssh(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  const auto states = io::pure_states_from_json(io::read_file(f.states_file));
  const auto ens = io::ensemble_from_json(io::read_file(f.ensemble_file));
  const bool detected = hssh_detect(states, ens);
  rep.emit(make_report("hssh", {{"states", f.states_file}, {"ensemble", f.ensemble_file}}, {{"detected", detected}}, true,
                       sw.ms(), f.seed));
  rep.table() << "hssh  detected=" << detected << "\n";
  return kExitOk;
}

inline int cmd_catalysis(const Flags& f, Reporter& rep) {
  if (f.samples < 1) raise(ErrorCode::BadRange, "--samples must be positive");
  Stopwatch sw;
  const auto chi = ququad_set();
  int undetected = 0, catalysis = 0;
  for (int s = 0; s < f.samples; ++s) {
    const auto ens = random_detector_ensemble(f.seed * 1000 + static_cast<std::uint64_t>(s));
    undetected += !hssh_detect(chi, ens);
    catalysis += catalysis_transform_check(ens);
  }
  const bool pass = undetected == f.samples && catalysis == f.samples;
  rep.emit(make_report("catalysis", {{"samples", f.samples}},
                       {{"undetected", undetected}, {"catalysis_true", catalysis}, {"all_pass", pass}}, pass, sw.ms(), f.seed));
  rep.table() << "catalysis  samples=" << f.samples << "  undetected=" << undetected << "  catalysis=" << catalysis << "\n";
  return kExitOk;
}

inline int cmd_entropy(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  const auto ds = parse_int_list(f.d.empty() ? "8,16,32,64" : f.d, "d");
  json rows = json::array();
  bool pass = true;
  for (int d : ds) {
    const double iota = maximally_entangled_params(d).iota;
    const double e = entanglement_entropy(two_qubit_resource(iota));
    const double bound = 2.0 * std::log2(static_cast<double>(d)) / d;
    rows.push_back({{"d", d}, {"iota", iota}, {"entropy", e}, {"bound", bound}});
    pass = pass && e <= bound;
    rep.table() << "entropy  d=" << d << "  iota=" << iota << "  E=" << e << "  bound=" << bound << "\n";
  }
  rep.emit(make_report("entropy", {{"d", ds}}, {{"rows", rows}}, pass, sw.ms(), f.seed));
  return kExitOk;
}

inline int cmd_sweep17(const Flags& f, Reporter& rep) {
  Stopwatch sw;
  const auto iotas = parse_list(f.iota.empty() ? "0.3,0.4,0.45,0.49,0.5" : f.iota, "iota");
  const auto witness = thm19_povm(2);
  json rows = json::array();
  bool pass = true;
  for (double iota : iotas) {
    if (!(iota > 0.0 && iota <= 0.5)) raise(ErrorCode::BadRange, "--iota entries must lie in (0, 1/2]");
    std::optional<Povm> w;
    if (std::abs(iota - 0.5) <= 1e-12) w = witness.povm;
    const auto r = perfect_ppt_feasibility(bell_complement_instance(iota), w);
    const auto expected = iota < 0.5 - 1e-12 ? Feasibility::No : Feasibility::Yes;
    pass = pass && r.feasible == expected;
    rows.push_back({{"iota", iota}, {"status", to_string(r.feasible)}, {"slack", r.slack}, {"witness_source", r.witness_source}});
    rep.table() << "sweep17  iota=" << iota << "  " << to_string(r.feasible) << "  slack=" << r.slack << "\n";
  }
  rep.emit(make_report("sweep17", {{"iota", iotas}}, {{"points", rows}}, pass, sw.ms(), f.seed));
  return kExitOk;
}

inline int cmd_reproduce_all(const Flags& f, Reporter& rep) {
  int passed = 0, total = 0;
  rep.table() << std::left << std::setw(4) << "id" << std::setw(6) << "pass" << std::setw(10) << "seconds"
              << "claim\n";
  for (const auto& run : experiments::all_criteria()) {
    const auto r = run();
    ++total;
    passed += r.pass;
    rep.emit(make_report("criterion-" + std::to_string(r.id), {{"name", r.name}}, r.payload, r.pass, r.seconds * 1e3, f.seed));
    rep.table() << std::left << std::setw(4) << r.id << std::setw(6) << (r.pass ? "yes" : "NO") << std::setw(10)
                << std::fixed << std::setprecision(2) << r.seconds << r.name << "\n";
  }
  rep.table() << passed << "/" << total << " criteria passed\n";
  return kExitOk;
}

/// Parses argv, runs one subcommand, and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"PPT distinguishability experiments"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--out", f.out, "write the report to a file instead of stdout");
  };

  auto* check = app.add_subcommand("check", "decide perfect PPT distinguishability of an instance file");
  check->add_option("instance", f.instance_file, "instance JSON")->required();
  check->add_option("resource", f.resource_file, "optional resource state JSON");
  check->add_option("--witness", f.witness_file, "optional POVM JSON to try at the boundary");
  common(check);

  auto* threshold = app.add_subcommand("threshold", "locate the resource threshold of a family by bisection");
  threshold->add_option("family", f.family, "family name (three-bell)");
  threshold->add_option("--tol", f.tol, "bisection tolerance (>= 1e-5)");
  common(threshold);

  auto* verify = app.add_subcommand("verify", "build and verify an explicit POVM construction");
  verify->add_option("construction", f.construction, "thm10 | thm15 | thm16 | thm19")->required();
  verify->add_option("--lambda", f.lambda, "Schmidt spectrum, comma separated, descending");
  verify->add_option("--d", f.d, "local dimension");
  common(verify);

  auto* multicopy = app.add_subcommand("multicopy", "multicopy unambiguous PPT values over a (d, m) grid");
  multicopy->add_option("--d", f.d, "comma list of local dimensions");
  multicopy->add_option("--m", f.m, "comma list of copy counts");
  common(multicopy);

  auto* hssh = app.add_subcommand("hssh", "run the HSSH detection on state and ensemble files");
  hssh->add_option("states", f.states_file, "states JSON")->required();
  hssh->add_option("ensemble", f.ensemble_file, "ensemble JSON")->required();
  common(hssh);

  auto* catalysis = app.add_subcommand("catalysis", "sample detector ensembles for the ququad set");
  catalysis->add_option("--samples", f.samples, "number of sampled ensembles");
  common(catalysis);

  auto* entropy = app.add_subcommand("entropy", "entanglement entropy of the maximally-entangled-family resource");
  entropy->add_option("--d", f.d, "comma list of dimensions");
  common(entropy);

  auto* sweep = app.add_subcommand("sweep17", "feasibility over resource parameters for a two-qubit state");
  sweep->add_option("--iota", f.iota, "comma list of resource parameters");
  common(sweep);

  auto* all = app.add_subcommand("reproduce-all", "run every acceptance criterion");
  common(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  Reporter rep(out, err);
  try {
    rep.open(f.out);
    if (*check) return cmd_check(f, rep);
    if (*threshold) return cmd_threshold(f, rep);
    if (*verify) return cmd_verify(f, rep);
    if (*multicopy) return cmd_multicopy(f, rep);
    if (*hssh) return cmd_hssh(f, rep);
    if (*catalysis) return cmd_catalysis(f, rep);
    if (*entropy) return cmd_entropy(f, rep);
    if (*sweep) return cmd_sweep17(f, rep);
    if (*all) return cmd_reproduce_all(f, rep);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitInput;
}

}  // namespace pptdist::cli
