#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace pptdist;
using json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;

  json report() const { return json::parse(out); }
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pptdist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("pptdist_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string write(const std::string& name, const json& j) { return write(name, j.dump()); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

json three_bell_file() {
  return io::instance_to_json(DiscriminationInstance::from_pure({bell_state(0), bell_state(1), bell_state(2)}));
}

}  // namespace

TEST(CliExitCodes, Mapping) {
  EXPECT_EQ(cli::exit_code_for(ErrorCode::NoConvergence), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::IllPosed), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::NonMonotone), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::ParseError), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::BadRange), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::PreconditionViolated), 2);
}

TEST(CliParsing, Lists) {
  EXPECT_EQ(cli::parse_int_list("2,3,4", "d"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(cli::parse_list("0.5, 0.25", "x").size(), 2u);
  EXPECT_THROW(cli::parse_int_list("2,x", "d"), Error);
  EXPECT_THROW(cli::parse_spectrum("0.2,0.8"), Error);
  EXPECT_THROW(cli::parse_spectrum("0.7,0.2"), Error);
  EXPECT_THROW(cli::parse_spectrum("1.2,-0.2"), Error);
  EXPECT_EQ(cli::parse_spectrum("0.8,0.2").size(), 2u);
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
  EXPECT_EQ(run_cli({"verify"}).code, 2);
  EXPECT_EQ(run_cli({"multicopy", "--d", "two"}).code, 2);
}

TEST_F(CliFiles, CheckThreeBellInstance) {
  const auto inst = write("bells.json", three_bell_file());
  auto r = run_cli({"check", inst});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = r.report();
  EXPECT_EQ(rep["experiment"], "check");
  EXPECT_EQ(rep["result"]["status"], "No");
  EXPECT_TRUE(rep["pass"].get<bool>());

  const auto res = write("alpha.json", io::state_to_json(two_qubit_resource(0.6)));
  r = run_cli({"check", inst, res});
  ASSERT_EQ(r.code, 0) << r.err;
  rep = r.report();
  EXPECT_EQ(rep["result"]["status"], "Yes");
  ASSERT_TRUE(rep["result"].contains("witness"));
  const auto witness = io::povm_from_json(rep["result"]["witness"]);
  EXPECT_TRUE(check_witness(witness, three_bell_instance(0.6)).all());
}

TEST_F(CliFiles, CheckWithSuppliedWitness) {
  const auto c = three_bell_povm();
  const auto inst = write("inst.json", io::instance_to_json(c.instance));
  const auto w = write("povm.json", io::povm_to_json(c.povm));
  const auto r = run_cli({"check", inst, "--witness", w});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_EQ(rep["result"]["status"], "Yes");
  EXPECT_EQ(rep["result"]["witness_source"], "supplied");
}

TEST_F(CliFiles, InputErrors) {
  EXPECT_EQ(run_cli({"check", write("bad.json", std::string("{ not json"))}).code, 2);
  EXPECT_EQ(run_cli({"check", path("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"check", write("empty.json", json::object())}).code, 2);
  const json overlapping = {{"states", {io::state_to_json(bell_state(0)), io::state_to_json(bell_state(0))}}};
  EXPECT_EQ(run_cli({"check", write("overlap.json", overlapping)}).code, 2);
}

TEST_F(CliFiles, OutFile) {
  const auto out = path("report.json");
  const auto r = run_cli({"verify", "thm10", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const auto rep = json::parse(in);
  EXPECT_TRUE(rep["pass"].get<bool>());
}

TEST_F(CliFiles, Hssh) {
  std::vector<PureState> states;
  std::vector<PureState> dets;
  for (int k = 1; k <= 3; ++k) {
    states.push_back(tensor(bell_state(k), two_qubit_resource(0.7)));
    dets.push_back(bell_state(k));
  }
  json sj = {{"states", json::array()}};
  for (const auto& s : states) sj["states"].push_back(io::state_to_json(s));
  const EnsembleSpec ens({1.0 / 3, 1.0 / 3, 1.0 / 3}, dets);
  const auto r = run_cli({"hssh", write("states.json", sj), write("ens.json", io::ensemble_to_json(ens))});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["result"]["detected"].get<bool>());
}

TEST(Cli, Verify) {
  auto r = run_cli({"verify", "thm10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["pass"].get<bool>());

  r = run_cli({"verify", "thm19", "--d", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_NEAR(rep["result"]["parameters"]["iota"].get<double>(), 1.0 / 9, 1e-12);

  r = run_cli({"verify", "thm16", "--lambda", "0.8,0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["result"]["parameters"]["iota"].get<double>(), 1.0 / 2.5625, 1e-12);

  r = run_cli({"verify", "thm15", "--d", "3", "--seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["pass"].get<bool>());

  EXPECT_EQ(run_cli({"verify", "thm16", "--lambda", "0.5,0.5"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "thm16", "--lambda", "0.2,0.8"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "thm99"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "thm19"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "thm19", "--d", "1"}).code, 2);
}

TEST(Cli, Threshold) {
  auto r = run_cli({"threshold", "--tol", "1e-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_NEAR(rep["result"]["threshold"].get<double>(), 2.0 / 3, 1e-2);
  EXPECT_EQ(run_cli({"threshold", "foo"}).code, 2);
  EXPECT_EQ(run_cli({"threshold", "--tol", "1e-7"}).code, 2);
}

TEST(Cli, MulticopyEntropySweep) {
  auto r = run_cli({"multicopy", "--d", "2,3", "--m", "1,2,9"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_EQ(rep["result"]["values"].size(), 6u);
  EXPECT_EQ(run_cli({"multicopy", "--m", "13"}).code, 2);

  r = run_cli({"entropy", "--d", "8,16"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["pass"].get<bool>());

  r = run_cli({"sweep17", "--iota", "0.4,0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_EQ(rep["result"]["points"][0]["status"], "No");
  EXPECT_EQ(rep["result"]["points"][1]["status"], "Yes");
  EXPECT_EQ(run_cli({"sweep17", "--iota", "0.7"}).code, 2);
}

TEST(Cli, Catalysis) {
  const auto r = run_cli({"catalysis", "--samples", "10", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_EQ(rep["seed"], 3);
  EXPECT_EQ(run_cli({"catalysis", "--samples", "0"}).code, 2);
}

TEST(JsonIo, RoundTrips) {
  const auto psi = two_qubit_resource(0.7);
  const auto back = io::pure_state_from_json(json::parse(io::state_to_json(psi).dump()));
  EXPECT_LE((back.vector() - psi.vector()).norm(), 1e-15);
  EXPECT_TRUE(back.space() == psi.space());

  const auto c = thm15_povm(bell_state(0));
  const auto povm = io::povm_from_json(io::povm_to_json(c.povm));
  ASSERT_EQ(povm.size(), c.povm.size());
  for (std::size_t k = 0; k < povm.size(); ++k) EXPECT_LE(max_abs(povm.effects()[k] - c.povm.effects()[k]), 0.0);

  const auto inst = io::instance_from_json(io::instance_to_json(c.instance));
  EXPECT_EQ(inst.size(), c.instance.size());
  EXPECT_LE(max_abs(inst.states()[1].matrix() - c.instance.states()[1].matrix()), 0.0);

  Matrix m(2, 3);
  m << cplx(1, 2), 3, 4, 5, cplx(0, -6), 7;
  EXPECT_LE(max_abs(io::matrix_from_json(io::matrix_to_json(m)) - m), 0.0);
  const json real_only = {{"rows", 1}, {"cols", 2}, {"re", {{1.0, 2.0}}}};
  EXPECT_EQ(io::matrix_from_json(real_only)(0, 1), cplx(2.0, 0.0));
  const json ragged = {{"rows", 2}, {"cols", 2}, {"re", {{1.0, 2.0}, {3.0}}}};
  EXPECT_THROW(io::matrix_from_json(ragged), Error);
  const json bad_side = json::array({{{"dim", 2}, {"side", "C"}}});
  EXPECT_THROW(io::space_from_json(bad_side), Error);
}

TEST(JsonIo, SdpRoundTrip) {
  SdpProblem p;
  p.blocks = {2};
  SdpProblem::add_dense(p.objective, 0, identity(2));
  SdpCoefficient c;
  SdpProblem::add_dense(c, 0, identity(2));
  p.constraints.push_back({c, 1.0});
  const auto back = io::sdp_from_json(io::sdp_to_json(p));
  EXPECT_EQ(back.blocks, p.blocks);
  ASSERT_EQ(back.constraints.size(), 1u);
  EXPECT_EQ(back.constraints[0].rhs, 1.0);
  EXPECT_NEAR(solve(back).objective, solve(p).objective, 1e-8);
}
