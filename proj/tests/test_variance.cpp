#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace chanvar;
using testutil::identity_channel;
using testutil::pauli_x;
using testutil::pauli_z;
using testutil::proj0;

TEST_CASE("expectation values on reference inputs", "[variance]") {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_state(2, rng);
  REQUIRE(std::abs(expectation(cmat::Identity(2, 2), rho) - cplx(1.0, 0.0)) <= 1e-12);

  const DensityMatrix zero_state = DensityMatrix::from_matrix(proj0());
  REQUIRE(std::abs(expectation(pauli_z(), zero_state) - cplx(1.0, 0.0)) <= 1e-15);

  REQUIRE(std::abs(expectation(pauli_x(), DensityMatrix::maximally_mixed(2))) <= 1e-15);

  REQUIRE_THROWS_AS(expectation(cmat::Identity(3, 3), rho), std::invalid_argument);
}

TEST_CASE("centered operators on reference inputs", "[variance]") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const CenteredKraus c_id = centered_kraus(cmat::Identity(2, 2), mixed);
  REQUIRE(c_id.op.norm() <= 1e-15);
  REQUIRE(std::abs(c_id.mean - cplx(1.0, 0.0)) <= 1e-15);

  const CenteredKraus c_z = centered_kraus(pauli_z(), mixed);
  REQUIRE((c_z.op - pauli_z() / std::sqrt(2.0)).norm() <= 1e-15);
  REQUIRE(std::abs(c_z.mean) <= 1e-15);

  const DensityMatrix zero_state = DensityMatrix::from_matrix(proj0());
  const CenteredKraus c_z0 = centered_kraus(pauli_z(), zero_state);
  REQUIRE(c_z0.op.norm() <= 1e-15);
}

TEST_CASE("centering is linear in the operator", "[variance]") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(3, rng);
    const cmat k = random_gaussian_matrix(3, 3, rng);
    const cmat l = random_gaussian_matrix(3, 3, rng);
    const cmat sum_c = centered_kraus((k + l).eval(), rho).op;
    const cmat c_sum = centered_kraus(k, rho).op + centered_kraus(l, rho).op;
    REQUIRE((sum_c - c_sum).norm() <= 1e-12);
  }
}

TEST_CASE("absolute variance of single operators", "[variance]") {
  std::mt19937_64 rng(19);
  const DensityMatrix rho = random_state(2, rng);
  const cplx c(1.7, -2.3);
  REQUIRE(rho_abs_variance((c * cmat::Identity(2, 2)).eval(), rho) <= 1e-12);

  const DensityMatrix zero_state = DensityMatrix::from_matrix(proj0());
  REQUIRE_THAT(rho_abs_variance(pauli_x(), zero_state), Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE(rho_abs_variance(pauli_z(), zero_state) <= 1e-15);
}

TEST_CASE("Hermitian operators reduce to the textbook variance", "[variance]") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const cmat g = random_gaussian_matrix(3, 3, rng);
    const cmat a = 0.5 * (g + g.adjoint());
    const DensityMatrix rho = random_state(3, rng);
    const double mean = (rho.rho() * a).trace().real();
    const double second = (rho.rho() * a * a).trace().real();
    REQUIRE_THAT(rho_abs_variance(a, rho),
                 Catch::Matchers::WithinAbs(second - mean * mean, 1e-10));
  }
}

TEST_CASE("parallelogram identity for centered variances", "[variance]") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(2, rng);
    const cmat k = random_gaussian_matrix(2, 2, rng);
    const cmat l = random_gaussian_matrix(2, 2, rng);
    const double plus = rho_abs_variance((k + l).eval(), rho);
    const double minus = rho_abs_variance((k - l).eval(), rho);
    const double parts = 2.0 * rho_abs_variance(k, rho) + 2.0 * rho_abs_variance(l, rho);
    REQUIRE_THAT(plus + minus, Catch::Matchers::WithinAbs(parts, 1e-10));
  }
}

TEST_CASE("channel uncertainty closed forms at the maximally mixed state", "[variance]") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  std::mt19937_64 rng(47);
  for (int t = 0; t < 5; ++t) {
    REQUIRE(channel_uncertainty(identity_channel(2), random_state(2, rng)).value <= 1e-14);
  }
  for (int i = 0; i <= 10; ++i) {
    const double q = static_cast<double>(i) / 10.0;
    const double root = std::sqrt(1.0 - q);
    const double bf_want = 1.0 - q;
    const double ad_want = 1.0 - 0.25 * (1.0 + root) * (1.0 + root);
    const double pd_want = ad_want - 0.25 * q;
    REQUIRE_THAT(channel_uncertainty(standard_channel(ChannelKind::BitFlip, q), mixed).value,
                 Catch::Matchers::WithinAbs(bf_want, 1e-12));
    REQUIRE_THAT(
        channel_uncertainty(standard_channel(ChannelKind::AmplitudeDamping, q), mixed).value,
        Catch::Matchers::WithinAbs(ad_want, 1e-12));
    REQUIRE_THAT(channel_uncertainty(standard_channel(ChannelKind::PhaseDamping, q), mixed).value,
                 Catch::Matchers::WithinAbs(pd_want, 1e-12));
  }
}

TEST_CASE("uncertainty of complete channels matches the mean-square identity", "[variance]") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 30; ++t) {
    const Index dim = 2 + (t % 2);
    const KrausChannel ch = random_channel(dim, 1 + (t % 3), rng);
    const DensityMatrix rho = random_state(dim, rng);
    const UncertaintyValue u = channel_uncertainty(ch, rho);

    double mean_sq = 0.0;
    for (const cmat& k : ch.ops()) mean_sq += std::norm(expectation(k, rho));
    REQUIRE_THAT(u.value, Catch::Matchers::WithinAbs(1.0 - mean_sq, 1e-10));

    double sum = 0.0;
    for (double v : u.per_kraus) {
      REQUIRE(v >= 0.0);
      sum += v;
    }
    REQUIRE(u.value == sum);
    REQUIRE(u.per_kraus.size() == ch.size());
  }
}

TEST_CASE("channel uncertainty rejects mismatched dimensions", "[variance]") {
  std::mt19937_64 rng(59);
  REQUIRE_THROWS_AS(channel_uncertainty(identity_channel(3), random_state(2, rng)),
                    std::invalid_argument);
}
