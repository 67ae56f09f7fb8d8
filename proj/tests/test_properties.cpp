#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace chanvar;
using testutil::bell_phi_plus;
using testutil::identity_channel;
using testutil::pauli_x;

TEST_CASE("nonnegativity and the zero-condition cross check", "[properties]") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const KrausChannel ch = random_channel(2, 2, rng);
    const DensityMatrix rho = random_state(2, rng);
    REQUIRE(nonnegativity_deviation(ch.map(), rho) <= 1e-10);
    REQUIRE(zero_condition_mismatch(ch.map(), rho, 1e-9) == 0.0);
    REQUIRE(completeness_identity_deviation(ch, rho) <= 1e-10);
  }
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  REQUIRE(zero_condition_mismatch(identity_channel(2).map(), mixed, 1e-9) == 0.0);
  REQUIRE(zero_condition_mismatch(standard_channel(ChannelKind::BitFlip, 0.5).map(), mixed,
                                  1e-9) == 0.0);
}

TEST_CASE("linearity holds for weighted map combinations", "[properties]") {
  std::mt19937_64 rng(67);
  const DensityMatrix rho = random_state(2, rng);

  const KrausMap pd = standard_channel(ChannelKind::PhaseDamping, 0.4).map();
  const double whole = channel_uncertainty(combine_maps(0.5, pd, 0.5, pd), rho).value;
  REQUIRE_THAT(whole, Catch::Matchers::WithinAbs(channel_uncertainty(pd, rho).value, 1e-12));

  for (int t = 0; t < 20; ++t) {
    const KrausChannel m1 = random_channel(2, 2, rng);
    const KrausChannel m2 = random_channel(2, 3, rng);
    const DensityMatrix r = random_state(2, rng);
    REQUIRE(linearity_deviation(0.7, m1.map(), 1.9, m2.map(), r) <= 1e-10);
  }
}

TEST_CASE("uncertainty is concave in the state", "[properties]") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const KrausChannel ch = random_channel(2, 2, rng);
    std::vector<DensityMatrix> states = {random_state(2, rng), random_state(2, rng)};
    std::vector<double> weights = {0.3, 0.7};
    REQUIRE(concavity_violation(ch.map(), weights, states) <= 1e-10);
  }
  const KrausChannel ch = standard_channel(ChannelKind::BitFlip, 0.3);
  std::vector<DensityMatrix> states = {DensityMatrix::maximally_mixed(2)};
  REQUIRE_THROWS_AS(concavity_violation(ch.map(), {0.5}, states), std::invalid_argument);
  REQUIRE_THROWS_AS(concavity_violation(ch.map(), {-1.0, 2.0},
                                        {states[0], DensityMatrix::maximally_mixed(2)}),
                    std::invalid_argument);
}

TEST_CASE("unitary conjugation leaves the uncertainty unchanged", "[properties]") {
  std::mt19937_64 rng(73);
  const KrausChannel bf = standard_channel(ChannelKind::BitFlip, 0.3);
  for (int t = 0; t < 5; ++t) {
    REQUIRE(unitary_invariance_deviation(bf, pauli_x(), random_state(2, rng)) <= 1e-10);
  }
  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(3, 2, rng);
    REQUIRE(unitary_invariance_deviation(ch, random_unitary(3, rng), random_state(3, rng)) <=
            1e-10);
  }
  REQUIRE_THROWS_AS(
      unitary_invariance_deviation(bf, (2.0 * cmat::Identity(2, 2)).eval(),
                                   DensityMatrix::maximally_mixed(2)),
      std::invalid_argument);
}

TEST_CASE("lifted channels see only their own marginal", "[properties]") {
  const KrausChannel ad = standard_channel(ChannelKind::AmplitudeDamping, 0.5);
  const DensityMatrix bell = bell_phi_plus();
  REQUIRE(ancillary_deviation(ad, bell, 2, 2, Side::Left) <= 1e-10);
  REQUIRE(ancillary_deviation(ad, bell, 2, 2, Side::Right) <= 1e-10);

  const double root_half = std::sqrt(0.5);
  const double want = 1.0 - 0.25 * (1.0 + root_half) * (1.0 + root_half);
  const double lifted = channel_uncertainty(lift_channel(ad, Side::Left, 2), bell).value;
  REQUIRE_THAT(lifted, Catch::Matchers::WithinAbs(want, 1e-12));
  const double reduced =
      channel_uncertainty(ad, DensityMatrix::maximally_mixed(2)).value;
  REQUIRE_THAT(reduced, Catch::Matchers::WithinAbs(want, 1e-12));

  std::mt19937_64 rng(79);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(2, 2, rng);
    const DensityMatrix rho_ab = random_density(4, rng);
    REQUIRE(ancillary_deviation(ch, rho_ab, 2, 2, Side::Left) <= 1e-10);
    REQUIRE(ancillary_deviation(ch, rho_ab, 2, 2, Side::Right) <= 1e-10);
  }
}

TEST_CASE("sum of lifted channels adds the marginal uncertainties", "[properties]") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel a = random_channel(2, 2, rng);
    const KrausChannel b = random_channel(2, 2, rng);
    const DensityMatrix rho_ab = random_density(4, rng);
    REQUIRE(additivity_deviation(a, b, rho_ab) <= 1e-10);
  }
  REQUIRE_THROWS_AS(additivity_deviation(identity_channel(2), identity_channel(2),
                                         DensityMatrix::maximally_mixed(2)),
                    std::invalid_argument);
}

TEST_CASE("Kraus mixing leaves the uncertainty unchanged", "[properties]") {
  std::mt19937_64 rng(89);
  const KrausChannel bf = standard_channel(ChannelKind::BitFlip, 0.5);
  const double s = 1.0 / std::sqrt(2.0);
  cmat had(2, 2);
  had << s, s, s, -s;
  REQUIRE(mixing_invariance_deviation(bf, had, random_state(2, rng)) <= 1e-10);

  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(2, 3, rng);
    REQUIRE(mixing_invariance_deviation(ch, random_unitary(3, rng), random_state(2, rng)) <=
            1e-10);
  }
}

TEST_CASE("check ids and names round-trip", "[properties]") {
  for (CheckId id : property_checks()) REQUIRE(check_id_from_string(check_id_name(id)) == id);
  for (CheckId id : bound_checks()) REQUIRE(check_id_from_string(check_id_name(id)) == id);
  REQUIRE(property_checks().size() == 7);
  REQUIRE(bound_checks().size() == 9);
  REQUIRE_THROWS_AS(check_id_from_string("no-such-check"), std::invalid_argument);
}

TEST_CASE("sampling is deterministic in (id, seed, trial)", "[properties]") {
  const CheckInstance a = sample_check_instance(CheckId::BoundThm2, 42, 7);
  const CheckInstance b = sample_check_instance(CheckId::BoundThm2, 42, 7);
  REQUIRE(a.channels.size() == b.channels.size());
  for (std::size_t i = 0; i < a.channels.size(); ++i)
    for (std::size_t k = 0; k < a.channels[i].size(); ++k)
      REQUIRE((a.channels[i].ops()[k] - b.channels[i].ops()[k]).norm() == 0.0);
  REQUIRE((a.states[0].rho() - b.states[0].rho()).norm() == 0.0);

  const CheckInstance c = sample_check_instance(CheckId::BoundThm2, 42, 8);
  REQUIRE((a.channels[0].ops()[0] - c.channels[0].ops()[0]).norm() > 0.0);

  const double dev_a = evaluate_check(CheckId::BoundThm2, a, 1e-9);
  const double dev_b = evaluate_check(CheckId::BoundThm2, b, 1e-9);
  REQUIRE(dev_a == dev_b);
}

TEST_CASE("sampled instances carry what their check needs", "[properties]") {
  REQUIRE(sample_check_instance(CheckId::UnitaryInvariance, 0, 0).unitary.has_value());
  REQUIRE(sample_check_instance(CheckId::MixingInvariance, 0, 0).unitary.has_value());
  const CheckInstance biv = sample_check_instance(CheckId::AncillaryIndependence, 0, 0);
  REQUIRE(biv.dim_a == 2);
  REQUIRE(biv.dim_b == 2);
  REQUIRE(biv.states[0].dim() == 4);
  const CheckInstance lin = sample_check_instance(CheckId::Linearity, 0, 0);
  REQUIRE(lin.weights.size() == 2);
  for (CheckId id : bound_checks()) {
    const CheckInstance inst = sample_check_instance(id, 0, 0);
    if (id == CheckId::BoundThm1 || id == CheckId::BoundThm2) {
      REQUIRE(inst.channels.size() == 2);
    } else {
      REQUIRE(inst.channels.size() == 3);
    }
    if (inst.params) REQUIRE_NOTHROW(validate_params(*inst.params));
  }
}

TEST_CASE("the randomized suite passes on a short run", "[properties]") {
  SuiteConfig cfg;
  cfg.seed = 1;
  cfg.trials = 25;
  const std::vector<CheckOutcome> outs = check_properties(cfg);
  REQUIRE(outs.size() == 16);
  for (const CheckOutcome& o : outs) {
    INFO(o.name << " worst deviation " << o.worst);
    REQUIRE(o.pass);
    REQUIRE(o.trials == 25);
    REQUIRE(o.fail_trial == -1);
    REQUIRE(o.worst <= cfg.tol);
  }
}

TEST_CASE("suite sections can run separately", "[properties]") {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.run_bounds = false;
  REQUIRE(check_properties(cfg).size() == 7);
  cfg.run_bounds = true;
  cfg.run_properties = false;
  REQUIRE(check_properties(cfg).size() == 9);
}
