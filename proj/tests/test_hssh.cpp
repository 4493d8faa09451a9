#include <gtest/gtest.h>

#include <cmath>

#include "pptdist/hssh.hpp"
#include "pptdist/random.hpp"
#include "test_util.hpp"

using namespace pptdist;
using testing_util::code_of;

namespace {

EnsembleSpec uniform(std::vector<PureState> detectors) {
  const std::vector<double> p(detectors.size(), 1.0 / static_cast<double>(detectors.size()));
  return {p, std::move(detectors)};
}

std::vector<PureState> three_bells_with(const PureState& beta) {
  std::vector<PureState> out;
  for (int k = 1; k <= 3; ++k) out.push_back(tensor(bell_state(k), beta));
  return out;
}

EnsembleSpec bell_detectors() { return uniform({bell_state(1), bell_state(2), bell_state(3)}); }

}  // namespace

TEST(Majorizes, Examples) {
  EXPECT_TRUE(majorizes({1.0, 0.0}, {0.5, 0.5}));
  EXPECT_FALSE(majorizes({0.5, 0.5}, {1.0, 0.0}));
  EXPECT_TRUE(majorizes({0.55, 0.45}, {0.5, 0.5}));
  EXPECT_TRUE(majorizes({0.6, 0.4}, {0.3, 0.3, 0.4}));
  EXPECT_EQ(code_of([] { majorizes({0.5, 0.5}, {0.5}); }), ErrorCode::SumMismatch);
}

TEST(Majorizes, PartialOrder) {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_spectrum(4, rng), y = random_spectrum(4, rng), z = random_spectrum(4, rng);
    EXPECT_TRUE(majorizes(x, x));
    if (majorizes(x, y) && majorizes(y, x))
      for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(x[i], y[i], 1e-9);
    if (majorizes(x, y) && majorizes(y, z)) EXPECT_TRUE(majorizes(x, z));
    auto shuffled = x;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_TRUE(majorizes(shuffled, x));
    EXPECT_TRUE(majorizes(x, shuffled));
  }
}

TEST(Nielsen, Examples) {
  EXPECT_TRUE(nielsen_possible(bell_state(0), product_basis_state(2, 2, 0, 0)));
  EXPECT_FALSE(nielsen_possible(product_basis_state(2, 2, 0, 0), bell_state(0)));
  EXPECT_FALSE(nielsen_possible(two_qubit_resource(0.75), bell_state(0)));
  EXPECT_TRUE(nielsen_possible(maximally_entangled(3), two_qubit_resource(0.75)));
}

TEST(Nielsen, Reflexive) {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = haar_state(BipartiteSpace::pair(3, 4), rng);
    EXPECT_TRUE(nielsen_possible(psi, psi));
    EXPECT_TRUE(nielsen_possible(psi, rotate_locally(psi, rng)));
  }
}

TEST(EnsemblePossible, Examples) {
  const auto prod = uniform({product_basis_state(2, 2, 0, 0), product_basis_state(2, 2, 1, 0)});
  EXPECT_TRUE(ensemble_possible(product_basis_state(2, 2, 0, 1), prod));
  EXPECT_TRUE(ensemble_possible(bell_state(0), EnsembleSpec({1.0}, {product_basis_state(2, 2, 0, 0)})));
  EXPECT_FALSE(ensemble_possible(three_bell_flagged_state(0.7), EnsembleSpec({1.0}, {bell_state(0)})));
  EXPECT_TRUE(ensemble_possible(three_bell_flagged_state(0.6), EnsembleSpec({1.0}, {bell_state(0)})));
}

TEST(EnsembleSpecType, Errors) {
  EXPECT_EQ(code_of([] { EnsembleSpec({0.5}, {bell_state(0), bell_state(1)}); }), ErrorCode::BadEnsemble);
  EXPECT_EQ(code_of([] { EnsembleSpec({1.5, -0.5}, {bell_state(0), bell_state(1)}); }), ErrorCode::BadEnsemble);
  EXPECT_EQ(code_of([] { EnsembleSpec({0.5, 0.4}, {bell_state(0), bell_state(1)}); }), ErrorCode::BadEnsemble);
  EXPECT_EQ(code_of([] { EnsembleSpec({0.5, 0.5}, {bell_state(0), maximally_entangled(3)}); }), ErrorCode::BadEnsemble);
}

TEST(HsshDetect, Examples) {
  const auto beta = two_qubit_resource(0.7);
  EXPECT_TRUE(hssh_detect(three_bells_with(beta), bell_detectors()));

  const auto prod = uniform({product_basis_state(2, 2, 0, 0), product_basis_state(2, 2, 0, 0), product_basis_state(2, 2, 1, 1)});
  EXPECT_FALSE(hssh_detect(three_bells_with(beta), prod));

  Rng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ens = random_detector_ensemble(rng());
    EXPECT_FALSE(hssh_detect(ququad_set(), ens));
  }
}

TEST(HsshDetect, Errors) {
  EXPECT_EQ(code_of([] { hssh_detect({bell_state(0), bell_state(1)}, bell_detectors()); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] {
              hssh_detect({bell_state(0), bell_state(0), bell_state(1)}, bell_detectors());
            }),
            ErrorCode::NotOrthogonal);
  EXPECT_EQ(code_of([] {
              hssh_detect(three_bells_with(two_qubit_resource(0.7)), bell_detectors(), BipartiteSpace::pair(2, 2));
            }),
            ErrorCode::DimensionMismatch);
}

TEST(HsshDetect, ExplicitCutMatchesDefault) {
  const auto states = three_bells_with(two_qubit_resource(0.8));
  const auto ens = bell_detectors();
  const auto cut = flagged_superposition(states, ens).space();
  EXPECT_EQ(hssh_detect(states, ens, cut), hssh_detect(states, ens));
}

TEST(HsshDetect, MonotoneInLambda) {
  bool seen = false;
  for (double l : {0.6, 0.67, 0.7, 0.8, 0.9, 1.0}) {
    const bool detected = hssh_detect(three_bells_with(two_qubit_resource(l)), bell_detectors());
    if (seen) EXPECT_TRUE(detected) << "lambda0 " << l;
    seen = seen || detected;
  }
  EXPECT_TRUE(seen);
}

TEST(ThreeBellLowerBound, Examples) {
  auto r = three_bell_lower_bound(0.7);
  EXPECT_NEAR(r.lambda_max, 0.525, 1e-12);
  EXPECT_TRUE(r.excluded);
  r = three_bell_lower_bound(2.0 / 3);
  EXPECT_NEAR(r.lambda_max, 0.5, 1e-12);
  EXPECT_FALSE(r.excluded);
  r = three_bell_lower_bound(0.5);
  EXPECT_NEAR(r.lambda_max, 0.375, 1e-12);
  EXPECT_FALSE(r.excluded);
  EXPECT_EQ(code_of([] { three_bell_lower_bound(0.4); }), ErrorCode::BadRange);
  EXPECT_EQ(code_of([] { three_bell_lower_bound(1.1); }), ErrorCode::BadRange);
}

TEST(ThreeBellLowerBound, ThreeQuartersOfLambda) {
  for (int i = 0; i <= 20; ++i) {
    const double l = 0.5 + 0.025 * i;
    EXPECT_NEAR(three_bell_lower_bound(l).lambda_max, 0.75 * l, 1e-12);
  }
}

TEST(Catalysis, Examples) {
  const auto ens = uniform({bell_state(0), bell_state(0), bell_state(0), bell_state(0)});
  EXPECT_TRUE(catalysis_transform_check(ens));
  EXPECT_EQ(code_of([] { catalysis_details(bell_detectors()); }), ErrorCode::BadEnsemble);
}

TEST(Catalysis, RandomEnsembles) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = catalysis_details(random_detector_ensemble(seed));
    EXPECT_TRUE(c.agree()) << "seed " << seed;
    EXPECT_TRUE(c.plain) << "seed " << seed;
  }
}

TEST(Catalysis, MaximallyEntangledCatalystIsInert) {
  Rng rng(64);
  const auto phi = maximally_entangled(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto source = haar_state(BipartiteSpace::pair(3, 3), rng);
    std::vector<PureState> dets;
    for (int k = 0; k < 3; ++k) dets.push_back(haar_state(BipartiteSpace::pair(2, 3), rng));
    const EnsembleSpec ens({0.2, 0.3, 0.5}, dets);
    EXPECT_EQ(ensemble_possible(source, ens), ensemble_possible(tensor(source, phi), ens.tensored(phi)));
  }
}

TEST(CopiesForMaximalEntanglement, Examples) {
  EXPECT_EQ(copies_for_maximal_entanglement(bell_state(0), 2), 1);
  EXPECT_EQ(copies_for_maximal_entanglement(bell_state(0), 4), 2);
  EXPECT_FALSE(copies_for_maximal_entanglement(product_basis_state(2, 2, 0, 0), 2).has_value());
  const auto m = copies_for_maximal_entanglement(two_qubit_resource(0.6), 2);
  ASSERT_TRUE(m.has_value());
  EXPECT_GT(*m, 1);
  // The answer is the first m whose spectrum is majorized by the uniform one.
  std::vector<double> power{1.0};
  for (int k = 1; k < *m; ++k) {
    std::vector<double> next;
    for (double a : power)
      for (double b : {0.6, 0.4}) next.push_back(a * b);
    power = next;
    EXPECT_FALSE(majorizes({0.5, 0.5}, power));
  }
  EXPECT_FALSE(copies_for_maximal_entanglement(two_qubit_resource(0.6), 2, 1).has_value());
  EXPECT_EQ(code_of([] { copies_for_maximal_entanglement(bell_state(0), 1); }), ErrorCode::BadDimension);
}
