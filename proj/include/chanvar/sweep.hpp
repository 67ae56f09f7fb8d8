#pragma once

#include "chanvar/bounds.hpp"
#include "chanvar/channel.hpp"
#include "chanvar/io.hpp"
#include "chanvar/state.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chanvar {

enum class SweepVar { Theta, Q };

/// Grid evaluation plan over the worked example family: channels of the
/// named kinds sharing one damping parameter q, and the planar Bloch-circle
/// state r = (sqrt(3)/3 cos(theta), sqrt(3)/3 sin(theta), 0).
struct SweepSpec {
  std::string name = "custom";        // preset name when applicable
  std::string theorem = "1";          // "1" | "2" | "3" | "4" | "combined"
  std::vector<ChannelKind> kinds;
  SweepVar sweep_var = SweepVar::Theta;
  bool grid_2d = false;               // theta x q surface (theta outer, q inner)
  double fixed_value = 0.0;           // value of the non-swept variable; unused for 2-D
  int grid_points = 201;              // per axis
  std::optional<BoundParams> params;  // required for theorems 3 and 4
};

struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline DensityMatrix bloch_circle_state(double theta) {
  const double r = std::sqrt(3.0) / 3.0;
  return DensityMatrix::from_bloch(r * std::cos(theta), r * std::sin(theta), 0.0);
}

inline void validate_sweep_spec(const SweepSpec& s) {
  if (s.grid_points < 2) throw std::invalid_argument("sweep: grid_points must be at least 2");
  const bool pair_theorem = s.theorem == "1" || s.theorem == "2";
  const bool multi_theorem = s.theorem == "3" || s.theorem == "4" || s.theorem == "combined";
  if (!pair_theorem && !multi_theorem)
    throw std::invalid_argument("sweep: theorem must be 1, 2, 3, 4, or combined");
  if (pair_theorem && s.kinds.size() != 2)
    throw std::invalid_argument("sweep: theorems 1 and 2 take exactly two channels");
  if (multi_theorem && s.kinds.size() < 3)
    throw std::invalid_argument("sweep: multi-channel bounds take at least three channels");
  const bool needs_params = s.theorem == "3" || s.theorem == "4";
  if (needs_params && !s.params)
    throw std::invalid_argument("sweep: theorems 3 and 4 need M, L, and a variant");
  if (!needs_params && s.params)
    throw std::invalid_argument("sweep: M, L, and variant apply only to theorems 3 and 4");
  if (s.params) validate_params(*s.params);
  if (!s.grid_2d) {
    if (s.sweep_var == SweepVar::Theta) {
      if (!(s.fixed_value >= 0.0 && s.fixed_value <= 1.0))
        throw std::invalid_argument("sweep: fixed q must lie in [0,1]");
    } else {
      if (!(s.fixed_value >= 0.0 && s.fixed_value <= 2.0 * std::numbers::pi))
        throw std::invalid_argument("sweep: fixed theta must lie in [0,2*pi]");
    }
  }
}

namespace detail {

struct SweepPoint {
  double lhs = 0.0;
  double bound = 0.0;
};

inline SweepPoint evaluate_sweep_point(const SweepSpec& s, double theta, double q) {
  std::vector<KrausChannel> chs;
  chs.reserve(s.kinds.size());
  for (ChannelKind k : s.kinds) chs.push_back(standard_channel(k, q));
  const DensityMatrix rho = bloch_circle_state(theta);
  BoundReport r;
  if (s.theorem == "1")
    r = product_bound_thm1(chs[0], chs[1], rho);
  else if (s.theorem == "2")
    r = sum_bound_thm2(chs[0], chs[1], rho);
  else if (s.theorem == "3")
    r = sum_bound_thm3(chs, rho, *s.params);
  else if (s.theorem == "4")
    r = sum_bound_thm4(chs, rho, *s.params);
  else
    r = combined_bound(chs, rho);
  return {r.lhs, r.bound};
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& s) {
  validate_sweep_spec(s);
  const double two_pi = 2.0 * std::numbers::pi;
  const auto grid = [&](double hi, int i) {
    return hi * static_cast<double>(i) / static_cast<double>(s.grid_points - 1);
  };
  const std::string lhs_name = (s.theorem == "1") ? "product" : "sum";
  const std::string bound_name =
      (s.theorem == "combined") ? "combined_bound" : ("thm" + s.theorem + "_bound");

  SweepResult out;
  if (s.grid_2d) {
    out.columns = {"theta", "q", lhs_name, bound_name};
    out.rows.reserve(static_cast<std::size_t>(s.grid_points) * s.grid_points);
    for (int i = 0; i < s.grid_points; ++i) {
      const double theta = grid(two_pi, i);
      for (int j = 0; j < s.grid_points; ++j) {
        const double q = grid(1.0, j);
        const detail::SweepPoint p = detail::evaluate_sweep_point(s, theta, q);
        out.rows.push_back({theta, q, p.lhs, p.bound});
      }
    }
    return out;
  }

  const bool sweep_theta = s.sweep_var == SweepVar::Theta;
  out.columns = {sweep_theta ? "theta" : "q", lhs_name, bound_name};
  out.rows.reserve(static_cast<std::size_t>(s.grid_points));
  for (int i = 0; i < s.grid_points; ++i) {
    const double x = grid(sweep_theta ? two_pi : 1.0, i);
    const double theta = sweep_theta ? x : s.fixed_value;
    const double q = sweep_theta ? s.fixed_value : x;
    const detail::SweepPoint p = detail::evaluate_sweep_point(s, theta, q);
    out.rows.push_back({x, p.lhs, p.bound});
  }
  return out;
}

inline void write_csv(const SweepResult& r, std::ostream& os) {
  write_csv(r.columns, r.rows, os);
}

/// The six reference configurations behind the shipped example curves.
inline SweepSpec preset_spec(const std::string& name) {
  const double pi = std::numbers::pi;
  SweepSpec s;
  s.name = name;
  if (name == "fig1a") {
    s.theorem = "1";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip};
    s.sweep_var = SweepVar::Theta;
    s.fixed_value = 0.2;
  } else if (name == "fig1b") {
    s.theorem = "1";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip};
    s.sweep_var = SweepVar::Q;
    s.fixed_value = pi / 3.0;
  } else if (name == "fig1c") {
    s.theorem = "2";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip};
    s.sweep_var = SweepVar::Theta;
    s.fixed_value = 0.8;
  } else if (name == "fig1d") {
    s.theorem = "2";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip};
    s.sweep_var = SweepVar::Q;
    s.fixed_value = 3.0 * pi / 5.0;
  } else if (name == "fig2a") {
    s.theorem = "combined";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip, ChannelKind::PhaseDamping};
    s.grid_2d = true;
    s.grid_points = 41;
  } else if (name == "fig2b") {
    s.theorem = "combined";
    s.kinds = {ChannelKind::AmplitudeDamping, ChannelKind::BitFlip, ChannelKind::PhaseDamping};
    s.sweep_var = SweepVar::Theta;
    s.fixed_value = 0.1;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return s;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1a", "fig1b", "fig1c",
                                                 "fig1d", "fig2a", "fig2b"};
  return names;
}

}  // namespace chanvar
