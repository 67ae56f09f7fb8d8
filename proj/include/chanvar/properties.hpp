#pragma once

#include "chanvar/bounds.hpp"
#include "chanvar/channel.hpp"
#include "chanvar/linalg.hpp"
#include "chanvar/random.hpp"
#include "chanvar/state.hpp"
#include "chanvar/variance.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chanvar {

// Deviation functions: each returns a non-negative number that is 0 (up to
// floating point) when the property holds, suitable for comparison against
// an absolute tolerance.

/// Uncertainty must be non-negative and must agree with the trace form
/// Tr(rho K^dag K) - |Tr(rho K)|^2 evaluated without centering. Also checks
/// the zero characterization: the value is below tol exactly when every
/// operator satisfies K sqrt(rho) = <K> sqrt(rho); with residuals r_i this
/// reads value <= tol  <=>  max_i ||r_i||^2 <= tol, up to a factor of the
/// list length (value is the sum of the ||r_i||^2).
inline double nonnegativity_deviation(const KrausMap& map, const DensityMatrix& rho) {
  const UncertaintyValue u = channel_uncertainty(map, rho);
  double dev = std::max(0.0, -u.value);
  double trace_form = 0.0;
  for (const cmat& k : map.ops) {
    const cplx mean = expectation(k, rho);
    trace_form += (rho.rho() * (k.adjoint() * k)).trace().real() - std::norm(mean);
  }
  dev = std::max(dev, std::abs(trace_form - u.value));
  return dev;
}

/// Zero-condition cross check at a given tolerance: value <= tol must match
/// max_i ||K_i sqrt(rho) - <K_i> sqrt(rho)||^2 <= tol within a factor of the
/// operator count. Returns 0 when consistent, 1 when the two sides disagree.
inline double zero_condition_mismatch(const KrausMap& map, const DensityMatrix& rho, double tol) {
  const UncertaintyValue u = channel_uncertainty(map, rho);
  double max_res = 0.0;
  for (const cmat& k : map.ops) {
    const CenteredKraus c = centered_kraus(k, rho);
    max_res = std::max(max_res, c.op.squaredNorm());
  }
  const double m = static_cast<double>(map.size());
  const bool value_zero = u.value <= tol;
  if (value_zero && max_res > tol) return 1.0;            // sum below tol forces each term below
  if (max_res <= tol && u.value > m * tol) return 1.0;    // each term small forces sum below m*tol
  return 0.0;
}

/// For complete channels the value must equal 1 - sum_i |<K_i>|^2.
inline double completeness_identity_deviation(const KrausChannel& ch, const DensityMatrix& rho) {
  const UncertaintyValue u = channel_uncertainty(ch, rho);
  double mean_sq = 0.0;
  for (const cmat& k : ch.ops()) mean_sq += std::norm(expectation(k, rho));
  return std::abs(u.value - (1.0 - mean_sq));
}

/// |V(l1 m1 + l2 m2) - l1 V(m1) - l2 V(m2)| through combine_maps.
inline double linearity_deviation(double l1, const KrausMap& m1, double l2, const KrausMap& m2,
                                  const DensityMatrix& rho) {
  const double combined = channel_uncertainty(combine_maps(l1, m1, l2, m2), rho).value;
  const double parts = l1 * channel_uncertainty(m1, rho).value + l2 * channel_uncertainty(m2, rho).value;
  return std::abs(combined - parts);
}

/// Amount by which the mixture's uncertainty falls short of the weighted sum
/// (0 when concavity holds). Weights must be a convex combination.
inline double concavity_violation(const KrausMap& map, const std::vector<double>& weights,
                                  const std::vector<DensityMatrix>& states) {
  if (weights.size() != states.size() || states.empty())
    throw std::invalid_argument("concavity_violation: weights and states must pair up");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("concavity_violation: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("concavity_violation: weights must sum to 1");
  cmat mix = cmat::Zero(states.front().dim(), states.front().dim());
  double parts = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    mix += weights[j] * states[j].rho();
    parts += weights[j] * channel_uncertainty(map, states[j]).value;
  }
  const double mixed = channel_uncertainty(map, DensityMatrix::from_matrix(mix)).value;
  return std::max(0.0, parts - mixed);
}

/// |V_{U rho U^dag}({U K_i U^dag}) - V_rho({K_i})|.
inline double unitary_invariance_deviation(const KrausChannel& ch, const cmat& u,
                                           const DensityMatrix& rho) {
  if (unitarity_error(u) > 1e-10)
    throw std::invalid_argument("unitary_invariance_deviation: matrix is not unitary");
  std::vector<cmat> rotated;
  rotated.reserve(ch.size());
  for (const cmat& k : ch.ops()) rotated.push_back(u * k * u.adjoint());
  const DensityMatrix rho_u = DensityMatrix::from_matrix((u * rho.rho() * u.adjoint()).eval());
  const double before = channel_uncertainty(ch, rho).value;
  const double after = channel_uncertainty(KrausMap::from_ops(std::move(rotated)), rho_u).value;
  return std::abs(before - after);
}

/// One-sided lift against the reduced state: the uncertainty of K (x) I in
/// rho_ab equals the uncertainty of K in the kept marginal (and mirrored).
inline double ancillary_deviation(const KrausChannel& ch, const DensityMatrix& rho_ab,
                                  Index dim_a, Index dim_b, Side side) {
  if (rho_ab.dim() != dim_a * dim_b)
    throw std::invalid_argument("ancillary_deviation: dimension mismatch");
  const Index lift_dim = side == Side::Left ? dim_b : dim_a;
  const Subsystem keep = side == Side::Left ? Subsystem::A : Subsystem::B;
  if (ch.dim() != (side == Side::Left ? dim_a : dim_b))
    throw std::invalid_argument("ancillary_deviation: channel does not fit its factor");
  const KrausChannel lifted = lift_channel(ch, side, lift_dim);
  const double whole = channel_uncertainty(lifted, rho_ab).value;
  const DensityMatrix marginal =
      DensityMatrix::from_matrix(partial_trace(rho_ab.rho(), dim_a, dim_b, keep));
  const double reduced = channel_uncertainty(ch, marginal).value;
  return std::abs(whole - reduced);
}

/// The sum map (Phi_a lifted left) + (Phi_b lifted right) must carry the sum
/// of the marginal uncertainties.
inline double additivity_deviation(const KrausChannel& ch_a, const KrausChannel& ch_b,
                                   const DensityMatrix& rho_ab) {
  const Index da = ch_a.dim(), db = ch_b.dim();
  if (rho_ab.dim() != da * db)
    throw std::invalid_argument("additivity_deviation: dimension mismatch");
  const KrausChannel la = lift_channel(ch_a, Side::Left, db);
  const KrausChannel lb = lift_channel(ch_b, Side::Right, da);
  const double whole =
      channel_uncertainty(combine_maps(1.0, la.map(), 1.0, lb.map()), rho_ab).value;
  const double part_a = channel_uncertainty(
      ch_a, DensityMatrix::from_matrix(partial_trace(rho_ab.rho(), da, db, Subsystem::A))).value;
  const double part_b = channel_uncertainty(
      ch_b, DensityMatrix::from_matrix(partial_trace(rho_ab.rho(), da, db, Subsystem::B))).value;
  return std::abs(whole - (part_a + part_b));
}

/// |V(mixed Kraus list) - V(original)|: the value depends on the channel,
/// not its operator-sum representation.
inline double mixing_invariance_deviation(const KrausChannel& ch, const cmat& u,
                                          const DensityMatrix& rho) {
  const double before = channel_uncertainty(ch, rho).value;
  const double after = channel_uncertainty(mix_kraus(ch, u), rho).value;
  return std::abs(before - after);
}

// Randomized check suite. Every check draws its instance deterministically
// from (base seed, check id, trial), so any failure can be regenerated and
// replayed in isolation.

enum class CheckId {
  NonNegativity,
  Linearity,
  Concavity,
  UnitaryInvariance,
  AncillaryIndependence,
  Additivity,
  MixingInvariance,
  BoundThm1,
  BoundThm2,
  BoundThm3LB1,
  BoundThm3LB2,
  BoundThm3LB3,
  BoundThm4LB1,
  BoundThm4LB2,
  BoundThm4LB3,
  BoundCombined,
};

inline const char* check_id_name(CheckId id) {
  switch (id) {
    case CheckId::NonNegativity: return "nonnegativity";
    case CheckId::Linearity: return "linearity";
    case CheckId::Concavity: return "concavity";
    case CheckId::UnitaryInvariance: return "unitary-invariance";
    case CheckId::AncillaryIndependence: return "ancillary-independence";
    case CheckId::Additivity: return "additivity";
    case CheckId::MixingInvariance: return "mixing-invariance";
    case CheckId::BoundThm1: return "bound-thm1";
    case CheckId::BoundThm2: return "bound-thm2";
    case CheckId::BoundThm3LB1: return "bound-thm3-LB1";
    case CheckId::BoundThm3LB2: return "bound-thm3-LB2";
    case CheckId::BoundThm3LB3: return "bound-thm3-LB3";
    case CheckId::BoundThm4LB1: return "bound-thm4-LB1";
    case CheckId::BoundThm4LB2: return "bound-thm4-LB2";
    case CheckId::BoundThm4LB3: return "bound-thm4-LB3";
    case CheckId::BoundCombined: return "bound-combined";
  }
  throw std::invalid_argument("check_id_name: unknown id");
}

inline CheckId check_id_from_string(std::string_view s) {
  for (int k = static_cast<int>(CheckId::NonNegativity);
       k <= static_cast<int>(CheckId::BoundCombined); ++k) {
    const CheckId id = static_cast<CheckId>(k);
    if (s == check_id_name(id)) return id;
  }
  throw std::invalid_argument("unknown check id: " + std::string(s));
}

inline std::vector<CheckId> property_checks() {
  return {CheckId::NonNegativity,     CheckId::Linearity, CheckId::Concavity,
          CheckId::UnitaryInvariance, CheckId::AncillaryIndependence,
          CheckId::Additivity,        CheckId::MixingInvariance};
}

inline std::vector<CheckId> bound_checks() {
  return {CheckId::BoundThm1,    CheckId::BoundThm2,    CheckId::BoundThm3LB1,
          CheckId::BoundThm3LB2, CheckId::BoundThm3LB3, CheckId::BoundThm4LB1,
          CheckId::BoundThm4LB2, CheckId::BoundThm4LB3, CheckId::BoundCombined};
}

/// One concrete sampled input set for a check, fully determined by
/// (seed, check id, trial).
struct CheckInstance {
  std::vector<KrausChannel> channels;
  std::vector<DensityMatrix> states;
  std::vector<double> weights;
  std::optional<cmat> unitary;
  std::optional<BoundParams> params;
  Index dim_a = 0, dim_b = 0;  // set for bipartite checks
};

namespace detail {

inline BoundParams sample_params(BoundVariant v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 5.0);
  double a = u(rng), b = u(rng);
  while (a == b) b = u(rng);  // LB3 needs a strict pair
  const double hi = std::max(a, b), lo = std::min(a, b);
  BoundParams p;
  p.variant = v;
  switch (v) {
    case BoundVariant::LB1: p.M = hi; p.L = lo; break;
    case BoundVariant::LB2: p.M = lo; p.L = hi; break;
    case BoundVariant::LB3: p.M = lo; p.L = hi; break;
  }
  return p;
}

}  // namespace detail

inline CheckInstance sample_check_instance(CheckId id, std::uint64_t seed, std::uint64_t trial) {
  std::mt19937_64 rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(id), trial));
  std::uniform_int_distribution<int> dim23(2, 3);
  std::uniform_int_distribution<int> ops13(1, 3);
  std::uniform_int_distribution<int> ops24(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckInstance inst;
  switch (id) {
    case CheckId::NonNegativity: {
      const Index d = dim23(rng);
      inst.channels.push_back(random_channel(d, ops13(rng), rng));
      inst.states.push_back(random_state(d, rng));
      break;
    }
    case CheckId::Linearity: {
      const Index d = dim23(rng);
      inst.channels.push_back(random_channel(d, ops13(rng), rng));
      inst.channels.push_back(random_channel(d, ops13(rng), rng));
      inst.weights = {2.0 * unit(rng), 2.0 * unit(rng)};
      inst.states.push_back(random_state(d, rng));
      break;
    }
    case CheckId::Concavity: {
      const Index d = dim23(rng);
      inst.channels.push_back(random_channel(d, ops13(rng), rng));
      std::uniform_int_distribution<int> k23(2, 3);
      const int k = k23(rng);
      double wsum = 0.0;
      for (int j = 0; j < k; ++j) {
        inst.states.push_back(random_state(d, rng));
        inst.weights.push_back(unit(rng) + 1e-3);
        wsum += inst.weights.back();
      }
      for (double& w : inst.weights) w /= wsum;
      break;
    }
    case CheckId::UnitaryInvariance: {
      const Index d = dim23(rng);
      inst.channels.push_back(random_channel(d, ops13(rng), rng));
      inst.unitary = random_unitary(d, rng);
      inst.states.push_back(random_state(d, rng));
      break;
    }
    case CheckId::AncillaryIndependence: {
      inst.dim_a = 2;
      inst.dim_b = 2;
      inst.channels.push_back(random_channel(2, ops13(rng), rng));
      inst.states.push_back(random_density(4, rng));
      break;
    }
    case CheckId::Additivity: {
      inst.dim_a = 2;
      inst.dim_b = 2;
      inst.channels.push_back(random_channel(2, ops13(rng), rng));
      inst.channels.push_back(random_channel(2, ops13(rng), rng));
      inst.states.push_back(random_density(4, rng));
      break;
    }
    case CheckId::MixingInvariance: {
      const int m = ops24(rng);
      inst.channels.push_back(random_channel(2, m, rng));
      inst.unitary = random_unitary(m, rng);
      inst.states.push_back(random_state(2, rng));
      break;
    }
    case CheckId::BoundThm1:
    case CheckId::BoundThm2: {
      inst.channels.push_back(random_channel(2, 2, rng));
      inst.channels.push_back(random_channel(2, 2, rng));
      inst.states.push_back(random_state(2, rng));
      break;
    }
    case CheckId::BoundThm3LB1:
    case CheckId::BoundThm4LB1:
    case CheckId::BoundThm3LB2:
    case CheckId::BoundThm4LB2:
    case CheckId::BoundThm3LB3:
    case CheckId::BoundThm4LB3:
    case CheckId::BoundCombined: {
      for (int t = 0; t < 3; ++t) inst.channels.push_back(random_channel(2, 2, rng));
      inst.states.push_back(random_state(2, rng));
      if (id == CheckId::BoundThm3LB1 || id == CheckId::BoundThm4LB1)
        inst.params = detail::sample_params(BoundVariant::LB1, rng);
      else if (id == CheckId::BoundThm3LB2 || id == CheckId::BoundThm4LB2)
        inst.params = detail::sample_params(BoundVariant::LB2, rng);
      else if (id == CheckId::BoundThm3LB3 || id == CheckId::BoundThm4LB3)
        inst.params = detail::sample_params(BoundVariant::LB3, rng);
      break;
    }
  }
  return inst;
}

/// Deviation of one sampled instance; 0 means the property held exactly.
/// `tol` only feeds the zero-condition consistency branch.
inline double evaluate_check(CheckId id, const CheckInstance& inst, double tol) {
  switch (id) {
    case CheckId::NonNegativity: {
      double dev = nonnegativity_deviation(inst.channels[0].map(), inst.states[0]);
      dev = std::max(dev, completeness_identity_deviation(inst.channels[0], inst.states[0]));
      dev = std::max(dev, zero_condition_mismatch(inst.channels[0].map(), inst.states[0], tol));
      return dev;
    }
    case CheckId::Linearity:
      return linearity_deviation(inst.weights[0], inst.channels[0].map(), inst.weights[1],
                                 inst.channels[1].map(), inst.states[0]);
    case CheckId::Concavity:
      return concavity_violation(inst.channels[0].map(), inst.weights, inst.states);
    case CheckId::UnitaryInvariance:
      return unitary_invariance_deviation(inst.channels[0], *inst.unitary, inst.states[0]);
    case CheckId::AncillaryIndependence: {
      const double left =
          ancillary_deviation(inst.channels[0], inst.states[0], inst.dim_a, inst.dim_b, Side::Left);
      const double right =
          ancillary_deviation(inst.channels[0], inst.states[0], inst.dim_a, inst.dim_b, Side::Right);
      return std::max(left, right);
    }
    case CheckId::Additivity:
      return additivity_deviation(inst.channels[0], inst.channels[1], inst.states[0]);
    case CheckId::MixingInvariance:
      return mixing_invariance_deviation(inst.channels[0], *inst.unitary, inst.states[0]);
    case CheckId::BoundThm1:
      return std::max(0.0, -product_bound_thm1(inst.channels[0], inst.channels[1], inst.states[0]).gap);
    case CheckId::BoundThm2:
      return std::max(0.0, -sum_bound_thm2(inst.channels[0], inst.channels[1], inst.states[0]).gap);
    case CheckId::BoundThm3LB1:
    case CheckId::BoundThm3LB2:
    case CheckId::BoundThm3LB3:
      return std::max(0.0, -sum_bound_thm3(inst.channels, inst.states[0], *inst.params).gap);
    case CheckId::BoundThm4LB1:
    case CheckId::BoundThm4LB2:
    case CheckId::BoundThm4LB3:
      return std::max(0.0, -sum_bound_thm4(inst.channels, inst.states[0], *inst.params).gap);
    case CheckId::BoundCombined:
      return std::max(0.0, -combined_bound(inst.channels, inst.states[0]).gap);
  }
  throw std::invalid_argument("evaluate_check: unknown id");
}

struct CheckOutcome {
  CheckId id = CheckId::NonNegativity;
  std::string name;
  int trials = 0;
  bool pass = true;
  double worst = 0.0;      // largest deviation seen
  int fail_trial = -1;     // first failing trial, -1 if none
  double fail_deviation = 0.0;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  int trials = 200;
  double tol = 1e-9;
  bool run_properties = true;
  bool run_bounds = true;
};

inline CheckOutcome run_check(CheckId id, const SuiteConfig& cfg) {
  CheckOutcome out;
  out.id = id;
  out.name = check_id_name(id);
  out.trials = cfg.trials;
  for (int t = 0; t < cfg.trials; ++t) {
    const CheckInstance inst = sample_check_instance(id, cfg.seed, static_cast<std::uint64_t>(t));
    const double dev = evaluate_check(id, inst, cfg.tol);
    out.worst = std::max(out.worst, dev);
    if (dev > cfg.tol && out.fail_trial < 0) {
      out.pass = false;
      out.fail_trial = t;
      out.fail_deviation = dev;
    }
  }
  return out;
}

/// Runs the full randomized suite; deterministic for a given config.
inline std::vector<CheckOutcome> check_properties(const SuiteConfig& cfg) {
  std::vector<CheckOutcome> outs;
  if (cfg.run_properties)
    for (CheckId id : property_checks()) outs.push_back(run_check(id, cfg));
  if (cfg.run_bounds)
    for (CheckId id : bound_checks()) outs.push_back(run_check(id, cfg));
  return outs;
}

}  // namespace chanvar
