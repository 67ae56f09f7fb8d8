#pragma once

#include "chanvar/linalg.hpp"
#include "chanvar/state.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chanvar {

/// Ordered list of Kraus operators of one common square dimension.
/// No completeness requirement; this is the general operator-sum form.
struct KrausMap {
  std::vector<cmat> ops;

  static KrausMap from_ops(std::vector<cmat> ops) {
    if (ops.empty()) throw std::invalid_argument("KrausMap: empty operator list");
    require_square(ops.front(), "KrausMap");
    const Index d = ops.front().rows();
    for (const cmat& k : ops) {
      require_square(k, "KrausMap");
      require_finite(k, "KrausMap");
      if (k.rows() != d) throw std::invalid_argument("KrausMap: mixed operator dimensions");
    }
    KrausMap m;
    m.ops = std::move(ops);
    return m;
  }

  Index dim() const { return ops.front().rows(); }
  std::size_t size() const { return ops.size(); }
};

struct ChannelVerdict {
  double residual = 0.0;  // || sum_i K_i^dag K_i - I ||_F
  bool pass = false;
};

inline ChannelVerdict validate_channel(const KrausMap& map, double tol = 1e-8) {
  const Index d = map.dim();
  cmat acc = cmat::Zero(d, d);
  for (const cmat& k : map.ops) acc += k.adjoint() * k;
  ChannelVerdict v;
  v.residual = (acc - cmat::Identity(d, d)).norm();
  v.pass = v.residual <= tol;
  return v;
}

/// Trace-preserving map: sum_i K_i^dag K_i = I within tolerance.
class KrausChannel {
 public:
  static constexpr double kTol = 1e-8;

  static KrausChannel create(KrausMap map, double tol = kTol) {
    ChannelVerdict v = validate_channel(map, tol);
    if (!v.pass)
      throw std::invalid_argument("KrausChannel: completeness residual " +
                                  std::to_string(v.residual) + " exceeds tolerance");
    return KrausChannel(std::move(map));
  }

  const KrausMap& map() const { return map_; }
  const std::vector<cmat>& ops() const { return map_.ops; }
  Index dim() const { return map_.dim(); }
  std::size_t size() const { return map_.size(); }

 private:
  explicit KrausChannel(KrausMap map) : map_(std::move(map)) {}

  KrausMap map_;
};

enum class ChannelKind { AmplitudeDamping, BitFlip, PhaseDamping };

inline const char* channel_kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::AmplitudeDamping: return "AD";
    case ChannelKind::BitFlip: return "BF";
    case ChannelKind::PhaseDamping: return "PD";
  }
  throw std::invalid_argument("channel_kind_name: unknown kind");
}

inline ChannelKind channel_kind_from_string(std::string_view s) {
  if (s == "AD") return ChannelKind::AmplitudeDamping;
  if (s == "BF") return ChannelKind::BitFlip;
  if (s == "PD") return ChannelKind::PhaseDamping;
  throw std::invalid_argument("channel kind must be one of AD, BF, PD");
}

/// Qubit amplitude damping, bit flip, phase damping with parameter q in [0,1].
inline KrausChannel standard_channel(ChannelKind kind, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("standard_channel: q must lie in [0,1]");
  std::vector<cmat> ops;
  switch (kind) {
    case ChannelKind::AmplitudeDamping: {
      cmat a1 = cmat::Zero(2, 2), a2 = cmat::Zero(2, 2);
      a1(0, 0) = 1.0;
      a1(1, 1) = std::sqrt(1.0 - q);
      a2(0, 1) = std::sqrt(q);
      ops = {a1, a2};
      break;
    }
    case ChannelKind::BitFlip: {
      cmat b1 = std::sqrt(q) * cmat::Identity(2, 2);
      cmat b2 = cmat::Zero(2, 2);
      b2(0, 1) = std::sqrt(1.0 - q);
      b2(1, 0) = std::sqrt(1.0 - q);
      ops = {b1, b2};
      break;
    }
    case ChannelKind::PhaseDamping: {
      cmat c1 = cmat::Zero(2, 2), c2 = cmat::Zero(2, 2);
      c1(0, 0) = 1.0;
      c1(1, 1) = std::sqrt(1.0 - q);
      c2(1, 1) = std::sqrt(q);
      ops = {c1, c2};
      break;
    }
  }
  return KrausChannel::create(KrausMap::from_ops(std::move(ops)));
}

/// Equivalent Kraus list K'_i = sum_j u_ij K_j for a unitary u of size len(ops).
/// Represents the same map; downstream values must not change.
inline KrausChannel mix_kraus(const KrausChannel& ch, const cmat& u, double tol = 1e-10) {
  const auto n = static_cast<Index>(ch.size());
  if (u.rows() != n || u.cols() != n)
    throw std::invalid_argument("mix_kraus: unitary size must equal the Kraus list length");
  if (unitarity_error(u) > tol)
    throw std::invalid_argument("mix_kraus: matrix is not unitary within tolerance");
  std::vector<cmat> out(static_cast<std::size_t>(n), cmat::Zero(ch.dim(), ch.dim()));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i)] += u(i, j) * ch.ops()[static_cast<std::size_t>(j)];
  return KrausChannel::create(KrausMap::from_ops(std::move(out)));
}

inline cmat apply_map(const KrausMap& map, const cmat& x) {
  require_square(x, "apply_map");
  if (x.rows() != map.dim()) throw std::invalid_argument("apply_map: dimension mismatch");
  cmat out = cmat::Zero(x.rows(), x.cols());
  for (const cmat& k : map.ops) out += k * x * k.adjoint();
  return out;
}

inline cmat apply_channel(const KrausMap& map, const DensityMatrix& rho) {
  return apply_map(map, rho.rho());
}

inline cmat apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  return apply_map(ch.map(), rho.rho());
}

/// Operator list of l1*Phi1 + l2*Phi2: {sqrt(l1) K_i} ++ {sqrt(l2) L_j}.
/// Weights must be non-negative; the result is a general map, complete only
/// when l1 + l2 = 1 and both inputs are channels.
inline KrausMap combine_maps(double l1, const KrausMap& m1, double l2, const KrausMap& m2) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0))
    throw std::invalid_argument("combine_maps: weights must be non-negative");
  if (m1.dim() != m2.dim()) throw std::invalid_argument("combine_maps: dimension mismatch");
  std::vector<cmat> ops;
  ops.reserve(m1.size() + m2.size());
  const double s1 = std::sqrt(l1), s2 = std::sqrt(l2);
  for (const cmat& k : m1.ops) ops.push_back(s1 * k);
  for (const cmat& k : m2.ops) ops.push_back(s2 * k);
  return KrausMap::from_ops(std::move(ops));
}

enum class Side { Left, Right };

/// Tensor the channel with an identity factor: K_i (x) I (left) or I (x) K_i (right).
inline KrausChannel lift_channel(const KrausChannel& ch, Side side, Index other_dim) {
  if (other_dim <= 0) throw std::invalid_argument("lift_channel: other_dim must be positive");
  const cmat eye = cmat::Identity(other_dim, other_dim);
  std::vector<cmat> ops;
  ops.reserve(ch.size());
  for (const cmat& k : ch.ops())
    ops.push_back(side == Side::Left ? tensor(k, eye) : tensor(eye, k));
  return KrausChannel::create(KrausMap::from_ops(std::move(ops)));
}

/// Zero-pad both lists to a common length. Zero operators are inert
/// everywhere downstream: they center to zero and contribute nothing.
inline void pad_to_common_length(KrausMap& a, KrausMap& b) {
  const std::size_t n = std::max(a.size(), b.size());
  const cmat za = cmat::Zero(a.dim(), a.dim());
  const cmat zb = cmat::Zero(b.dim(), b.dim());
  while (a.ops.size() < n) a.ops.push_back(za);
  while (b.ops.size() < n) b.ops.push_back(zb);
}

inline std::size_t pad_to_common_length(std::vector<KrausMap>& maps) {
  std::size_t n = 0;
  for (const KrausMap& m : maps) n = std::max(n, m.size());
  for (KrausMap& m : maps) {
    const cmat z = cmat::Zero(m.dim(), m.dim());
    while (m.ops.size() < n) m.ops.push_back(z);
  }
  return n;
}

}  // namespace chanvar
