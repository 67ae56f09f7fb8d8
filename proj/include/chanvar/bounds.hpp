#pragma once

#include "chanvar/channel.hpp"
#include "chanvar/linalg.hpp"
#include "chanvar/state.hpp"
#include "chanvar/variance.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chanvar {

/// Hard cap on the permutation search space size; larger searches throw.
inline constexpr std::uint64_t kPermutationCap = 1000000;

/// Absolute slack used when checking that a computed bound respects its lhs.
inline constexpr double kBoundSlack = 1e-9;

enum class BoundVariant { LB1, LB2, LB3 };

inline const char* variant_name(BoundVariant v) {
  switch (v) {
    case BoundVariant::LB1: return "LB1";
    case BoundVariant::LB2: return "LB2";
    case BoundVariant::LB3: return "LB3";
  }
  throw std::invalid_argument("variant_name: unknown variant");
}

inline BoundVariant variant_from_string(std::string_view s) {
  if (s == "LB1") return BoundVariant::LB1;
  if (s == "LB2") return BoundVariant::LB2;
  if (s == "LB3") return BoundVariant::LB3;
  throw std::invalid_argument("variant must be one of LB1, LB2, LB3");
}

/// Weight pair for the three-branch family of norm lower bounds.
/// Admissible ranges: LB1 needs M >= L > 0, LB2 needs L >= M > 0,
/// LB3 needs L > M > 0.
struct BoundParams {
  double M = 1.0;
  double L = 1.0;
  BoundVariant variant = BoundVariant::LB1;
};

inline void validate_params(const BoundParams& p) {
  if (!std::isfinite(p.M) || !std::isfinite(p.L))
    throw std::invalid_argument("BoundParams: weights must be finite");
  bool ok = false;
  switch (p.variant) {
    case BoundVariant::LB1: ok = p.M >= p.L && p.L > 0.0; break;
    case BoundVariant::LB2: ok = p.L >= p.M && p.M > 0.0; break;
    case BoundVariant::LB3: ok = p.L > p.M && p.M > 0.0; break;
  }
  if (!ok)
    throw std::invalid_argument(std::string("BoundParams: (M, L) outside the admissible range for ") +
                                variant_name(p.variant));
}

/// Squared Frobenius norm of the sum of a matrix list.
inline double total_sq(const std::vector<cmat>& us) {
  cmat acc = cmat::Zero(us.front().rows(), us.front().cols());
  for (const cmat& u : us) acc += u;
  return acc.squaredNorm();
}

/// Lower bound on sum_t ||u_t||^2 from pairwise sums and differences.
/// The three variants trade the same ingredients against each other under
/// their respective (M, L) ranges; LB3 has no total-sum term.
inline double norm_ineq_rhs(const std::vector<cmat>& us, const BoundParams& p) {
  validate_params(p);
  if (us.size() < 3) throw std::invalid_argument("norm_ineq_rhs: needs at least three matrices");
  const Index rows = us.front().rows(), cols = us.front().cols();
  for (const cmat& u : us)
    if (u.rows() != rows || u.cols() != cols)
      throw std::invalid_argument("norm_ineq_rhs: shape mismatch");

  const double n = static_cast<double>(us.size());
  double plus_rt = 0.0, minus_rt = 0.0, plus_sq = 0.0, minus_sq = 0.0;
  for (std::size_t t = 0; t + 1 < us.size(); ++t)
    for (std::size_t s = t + 1; s < us.size(); ++s) {
      const double dp = (us[t] + us[s]).norm();
      const double dm = (us[t] - us[s]).norm();
      plus_rt += dp;
      minus_rt += dm;
      plus_sq += dp * dp;
      minus_sq += dm * dm;
    }
  const double c = 1.0 / (p.M * n + (n - 2.0) * p.L);
  switch (p.variant) {
    case BoundVariant::LB1:
      return c * (2.0 * p.L / (n * (n - 1.0)) * plus_rt * plus_rt + p.M * minus_sq +
                  (p.M - p.L) * total_sq(us));
    case BoundVariant::LB2:
      return c * (2.0 * p.M / (n * (n - 1.0)) * minus_rt * minus_rt + p.L * plus_sq +
                  (p.M - p.L) * total_sq(us));
    case BoundVariant::LB3:
      return c * ((p.M - p.L) / ((n - 1.0) * (n - 1.0)) * plus_rt * plus_rt + p.L * plus_sq +
                  p.M * minus_sq);
  }
  throw std::invalid_argument("norm_ineq_rhs: unknown variant");
}

/// One permutation per channel in zero-based one-line notation; the first
/// channel's permutation is always the identity (any common relabeling is
/// absorbed there). `signs` is used only by the pair-sum bound.
struct PermutationAssignment {
  std::vector<std::vector<int>> per_channel;
  std::vector<int> signs;
};

struct BoundReport {
  std::string kind;             // "thm1" | "thm2" | "thm3" | "thm4" | "combined"
  double lhs = 0.0;
  double bound = 0.0;
  double gap = 0.0;             // lhs - bound; negative beyond 1e-9 means a bug
  std::optional<double> ratio;  // product bound only: lhs/bound, 0/0 reported as 1
  std::optional<BoundParams> params;
  PermutationAssignment maximizer;
  std::string winner;           // combined only: which constituent attains the max
  std::vector<std::pair<std::string, double>> components;  // combined only
};

namespace detail {

inline std::uint64_t factorial_capped(int n, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int k = 2; k <= n; ++k) {
    if (r > cap / static_cast<std::uint64_t>(k)) return cap + 1;
    r *= static_cast<std::uint64_t>(k);
  }
  return r;
}

inline std::uint64_t pow_capped(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base == 0) return 0;
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;  // lexicographic order
}

inline std::vector<int> identity_permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace detail

/// Product-form lower bound: pairs the descending entry moduli of the
/// centered operators of one channel against those of the other, sums the
/// products, squares, and accumulates over all operator pairs.
inline BoundReport product_bound_thm1(const KrausChannel& ch1, const KrausChannel& ch2,
                                      const DensityMatrix& rho) {
  if (ch1.dim() != rho.dim() || ch2.dim() != rho.dim())
    throw std::invalid_argument("product_bound_thm1: dimension mismatch");
  const UncertaintyValue u1 = channel_uncertainty(ch1, rho);
  const UncertaintyValue u2 = channel_uncertainty(ch2, rho);

  std::vector<SortedAbsVector> a, b;
  a.reserve(ch1.size());
  b.reserve(ch2.size());
  for (const cmat& k : ch1.ops()) a.push_back(sorted_abs_vec(centered_kraus(k, rho).op.adjoint().eval()));
  for (const cmat& l : ch2.ops()) b.push_back(sorted_abs_vec(centered_kraus(l, rho).op));

  double bound = 0.0;
  for (const SortedAbsVector& ai : a)
    for (const SortedAbsVector& bj : b) {
      double s = 0.0;
      for (std::size_t m = 0; m < ai.values.size(); ++m) s += ai.values[m] * bj.values[m];
      bound += s * s;
    }

  BoundReport r;
  r.kind = "thm1";
  r.lhs = u1.value * u2.value;
  r.bound = bound;
  r.gap = r.lhs - r.bound;
  if (r.bound > 0.0)
    r.ratio = r.lhs / r.bound;
  else
    r.ratio = (r.lhs == 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
  r.maximizer.per_channel = {};  // no permutation freedom in this bound
  return r;
}

/// Pair-sum lower bound: over all pairings of the two Kraus lists, takes per
/// index the better of the variance of the operator sum and of the
/// difference, halves the total, and maximizes over pairings. Ties between
/// sum and difference report '+'.
inline BoundReport sum_bound_thm2(const KrausChannel& ch1, const KrausChannel& ch2,
                                  const DensityMatrix& rho) {
  if (ch1.dim() != rho.dim() || ch2.dim() != rho.dim())
    throw std::invalid_argument("sum_bound_thm2: dimension mismatch");
  KrausMap m1 = ch1.map(), m2 = ch2.map();
  pad_to_common_length(m1, m2);
  const int n = static_cast<int>(m1.size());
  if (detail::factorial_capped(n, kPermutationCap) > kPermutationCap)
    throw std::invalid_argument("sum_bound_thm2: permutation search space exceeds the cap");

  const UncertaintyValue u1 = channel_uncertainty(m1, rho);
  const UncertaintyValue u2 = channel_uncertainty(m2, rho);

  std::vector<cmat> c1(static_cast<std::size_t>(n)), c2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    c1[static_cast<std::size_t>(i)] = centered_kraus(m1.ops[static_cast<std::size_t>(i)], rho).op;
    c2[static_cast<std::size_t>(i)] = centered_kraus(m2.ops[static_cast<std::size_t>(i)], rho).op;
  }
  Eigen::MatrixXd vplus(n, n), vminus(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      vplus(i, j) = (c1[static_cast<std::size_t>(i)] + c2[static_cast<std::size_t>(j)]).squaredNorm();
      vminus(i, j) = (c1[static_cast<std::size_t>(i)] - c2[static_cast<std::size_t>(j)]).squaredNorm();
    }

  double best = -1.0;
  std::vector<int> best_perm;
  std::vector<int> best_signs;
  for (const std::vector<int>& perm : detail::all_permutations(n)) {
    double val = 0.0;
    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
      const double vp = vplus(i, perm[static_cast<std::size_t>(i)]);
      const double vm = vminus(i, perm[static_cast<std::size_t>(i)]);
      if (vm > vp) {
        val += vm;
        signs[static_cast<std::size_t>(i)] = -1;
      } else {
        val += vp;
      }
    }
    val *= 0.5;
    if (val > best) {  // strict: first maximizer in lexicographic order wins
      best = val;
      best_perm = perm;
      best_signs = std::move(signs);
    }
  }

  BoundReport r;
  r.kind = "thm2";
  r.lhs = u1.value + u2.value;
  r.bound = best;
  r.gap = r.lhs - r.bound;
  r.maximizer.per_channel = {detail::identity_permutation(n), best_perm};
  r.maximizer.signs = best_signs;
  return r;
}

namespace detail {

/// Precomputed tables for the multi-channel permutation search.
struct MultiSearch {
  int n = 0;                                   // common (padded) Kraus length
  std::size_t nch = 0;                         // number of channels, >= 3
  std::vector<std::vector<cmat>> centered;     // [channel][index]
  std::vector<double> chan_values;             // per-channel uncertainty
  struct PairTable {
    std::size_t t, s;
    Eigen::MatrixXd plus_sq, minus_sq, plus_rt, minus_rt;
  };
  std::vector<PairTable> pairs;
  std::vector<double> tuple_total_sq;          // ||sum_t c_t(a_t)||^2 over all tuples
  bool has_total = false;
};

inline MultiSearch prepare_multi_search(const std::vector<KrausChannel>& channels,
                                        const DensityMatrix& rho, bool need_total,
                                        const char* what) {
  if (channels.size() < 3)
    throw std::invalid_argument(std::string(what) + ": needs at least three channels");
  for (const KrausChannel& ch : channels)
    if (ch.dim() != rho.dim())
      throw std::invalid_argument(std::string(what) + ": dimension mismatch");

  std::vector<KrausMap> maps;
  maps.reserve(channels.size());
  for (const KrausChannel& ch : channels) maps.push_back(ch.map());
  const std::size_t n = pad_to_common_length(maps);

  MultiSearch ms;
  ms.n = static_cast<int>(n);
  ms.nch = channels.size();

  const std::uint64_t space =
      pow_capped(factorial_capped(ms.n, kPermutationCap), ms.nch - 1, kPermutationCap);
  if (space > kPermutationCap)
    throw std::invalid_argument(std::string(what) + ": permutation search space exceeds the cap");

  ms.centered.resize(ms.nch);
  ms.chan_values.assign(ms.nch, 0.0);
  for (std::size_t t = 0; t < ms.nch; ++t) {
    ms.centered[t].reserve(n);
    for (const cmat& k : maps[t].ops) {
      ms.centered[t].push_back(centered_kraus(k, rho).op);
      ms.chan_values[t] += ms.centered[t].back().squaredNorm();
    }
  }

  for (std::size_t t = 0; t + 1 < ms.nch; ++t)
    for (std::size_t s = t + 1; s < ms.nch; ++s) {
      MultiSearch::PairTable pt;
      pt.t = t;
      pt.s = s;
      pt.plus_sq.resize(ms.n, ms.n);
      pt.minus_sq.resize(ms.n, ms.n);
      pt.plus_rt.resize(ms.n, ms.n);
      pt.minus_rt.resize(ms.n, ms.n);
      for (int a = 0; a < ms.n; ++a)
        for (int b = 0; b < ms.n; ++b) {
          const double vp =
              (ms.centered[t][static_cast<std::size_t>(a)] + ms.centered[s][static_cast<std::size_t>(b)])
                  .squaredNorm();
          const double vm =
              (ms.centered[t][static_cast<std::size_t>(a)] - ms.centered[s][static_cast<std::size_t>(b)])
                  .squaredNorm();
          pt.plus_sq(a, b) = vp;
          pt.minus_sq(a, b) = vm;
          pt.plus_rt(a, b) = std::sqrt(vp);
          pt.minus_rt(a, b) = std::sqrt(vm);
        }
      ms.pairs.push_back(std::move(pt));
    }

  if (need_total) {
    const std::uint64_t tuples =
        pow_capped(static_cast<std::uint64_t>(ms.n), ms.nch, 4u * kPermutationCap);
    if (tuples > 4u * kPermutationCap)
      throw std::invalid_argument(std::string(what) + ": tuple table exceeds the cap");
    ms.tuple_total_sq.resize(tuples);
    std::vector<int> digit(ms.nch, 0);
    // prefix[k] = sum of the first k+1 channels' picks; updated incrementally
    std::vector<cmat> prefix(ms.nch);
    prefix[0] = ms.centered[0][0];
    for (std::size_t k = 1; k < ms.nch; ++k) prefix[k] = prefix[k - 1] + ms.centered[k][0];
    for (std::uint64_t idx = 0;; ++idx) {
      ms.tuple_total_sq[idx] = prefix[ms.nch - 1].squaredNorm();
      std::size_t k = ms.nch;
      while (k > 0 && digit[k - 1] == ms.n - 1) {
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
      ++digit[k - 1];
      for (std::size_t j = k - 1; j < ms.nch; ++j) {
        if (j == 0)
          prefix[0] = ms.centered[0][static_cast<std::size_t>(digit[0])];
        else
          prefix[j] = prefix[j - 1] + ms.centered[j][static_cast<std::size_t>(digit[j])];
      }
    }
    ms.has_total = true;
  }
  return ms;
}

/// Coefficients of the shared bound shape
///   c * (head_coef * head^2 + plus_coef * S+ + minus_coef * S- + total_coef * T)
/// where `head` sums square roots of the plus (LB1, LB3) or minus (LB2) terms.
struct VariantCoefs {
  double c, head_coef, plus_coef, minus_coef, total_coef;
  bool head_on_plus;
};

inline VariantCoefs variant_coefs(const BoundParams& p, std::size_t nch) {
  const double n = static_cast<double>(nch);
  VariantCoefs vc{};
  vc.c = 1.0 / (p.M * n + (n - 2.0) * p.L);
  switch (p.variant) {
    case BoundVariant::LB1:
      vc.head_coef = 2.0 * p.L / (n * (n - 1.0));
      vc.head_on_plus = true;
      vc.plus_coef = 0.0;
      vc.minus_coef = p.M;
      vc.total_coef = p.M - p.L;
      break;
    case BoundVariant::LB2:
      vc.head_coef = 2.0 * p.M / (n * (n - 1.0));
      vc.head_on_plus = false;
      vc.plus_coef = p.L;
      vc.minus_coef = 0.0;
      vc.total_coef = p.M - p.L;
      break;
    case BoundVariant::LB3:
      vc.head_coef = (p.M - p.L) / ((n - 1.0) * (n - 1.0));
      vc.head_on_plus = true;
      vc.plus_coef = p.L;
      vc.minus_coef = p.M;
      vc.total_coef = 0.0;
      break;
  }
  return vc;
}

/// Where the square root sits in the head term: per Kraus index (the bound
/// is a sum over indices of a full three-term expression) or once over the
/// stacked aggregates (pairwise terms are first summed over indices).
enum class HeadStyle { PerIndex, Stacked };

inline BoundReport run_multi_search(const std::vector<KrausChannel>& channels,
                                    const DensityMatrix& rho, const BoundParams& params,
                                    HeadStyle style, const char* kind, const char* what) {
  validate_params(params);
  const bool need_total = params.variant != BoundVariant::LB3;
  MultiSearch ms = prepare_multi_search(channels, rho, need_total, what);
  const VariantCoefs vc = variant_coefs(params, ms.nch);

  const std::vector<std::vector<int>> perms = all_permutations(ms.n);
  const std::size_t free_channels = ms.nch - 1;
  std::vector<std::size_t> digit(free_channels, 0);

  // current permutation per channel; channel 0 pinned to the identity
  std::vector<const std::vector<int>*> cur(ms.nch, &perms.front());

  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_digit(free_channels, 0);

  std::vector<int> tuple(ms.nch, 0);
  std::vector<double> pair_head(ms.pairs.size(), 0.0);  // Stacked: per-pair aggregate
  for (;;) {
    for (std::size_t t = 0; t < free_channels; ++t) cur[t + 1] = &perms[digit[t]];

    double value = 0.0;
    double agg_plus = 0.0, agg_minus = 0.0, agg_total = 0.0;
    if (style == HeadStyle::Stacked) std::fill(pair_head.begin(), pair_head.end(), 0.0);
    for (int i = 0; i < ms.n; ++i) {
      tuple[0] = i;
      for (std::size_t t = 1; t < ms.nch; ++t) tuple[t] = (*cur[t])[static_cast<std::size_t>(i)];

      double sum_plus = 0.0, sum_minus = 0.0, head = 0.0;
      for (std::size_t p = 0; p < ms.pairs.size(); ++p) {
        const MultiSearch::PairTable& pt = ms.pairs[p];
        const int a = tuple[pt.t], b = tuple[pt.s];
        const double vp = pt.plus_sq(a, b), vm = pt.minus_sq(a, b);
        sum_plus += vp;
        sum_minus += vm;
        if (style == HeadStyle::PerIndex)
          head += vc.head_on_plus ? pt.plus_rt(a, b) : pt.minus_rt(a, b);
        else
          pair_head[p] += vc.head_on_plus ? vp : vm;
      }
      double total = 0.0;
      if (ms.has_total) {
        std::uint64_t flat = 0;
        for (std::size_t t = 0; t < ms.nch; ++t)
          flat = flat * static_cast<std::uint64_t>(ms.n) + static_cast<std::uint64_t>(tuple[t]);
        total = ms.tuple_total_sq[flat];
      }

      if (style == HeadStyle::PerIndex) {
        value += vc.c * (vc.head_coef * head * head + vc.plus_coef * sum_plus +
                         vc.minus_coef * sum_minus + vc.total_coef * total);
      } else {
        agg_plus += sum_plus;
        agg_minus += sum_minus;
        agg_total += total;
      }
    }
    if (style == HeadStyle::Stacked) {
      double agg_head = 0.0;
      for (const double h : pair_head) agg_head += std::sqrt(h);
      value = vc.c * (vc.head_coef * agg_head * agg_head + vc.plus_coef * agg_plus +
                      vc.minus_coef * agg_minus + vc.total_coef * agg_total);
    }

    if (value > best) {  // strict: first maximizer in lexicographic order wins
      best = value;
      best_digit = digit;
    }

    std::size_t k = free_channels;
    while (k > 0 && digit[k - 1] == perms.size() - 1) {
      digit[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
    ++digit[k - 1];
  }

  BoundReport r;
  r.kind = kind;
  r.lhs = std::accumulate(ms.chan_values.begin(), ms.chan_values.end(), 0.0);
  r.bound = best;
  r.gap = r.lhs - r.bound;
  r.params = params;
  r.maximizer.per_channel.reserve(ms.nch);
  r.maximizer.per_channel.push_back(identity_permutation(ms.n));
  for (std::size_t t = 0; t < free_channels; ++t) r.maximizer.per_channel.push_back(perms[best_digit[t]]);
  return r;
}

}  // namespace detail

/// Multi-channel sum bound with the root taken per Kraus index: each index
/// contributes a full three-term expression before summation. Maximized over
/// per-channel index pairings (first channel pinned to the identity).
inline BoundReport sum_bound_thm3(const std::vector<KrausChannel>& channels,
                                  const DensityMatrix& rho, const BoundParams& params) {
  return detail::run_multi_search(channels, rho, params, detail::HeadStyle::PerIndex, "thm3",
                                  "sum_bound_thm3");
}

/// Multi-channel sum bound with the root taken over stacked aggregates:
/// pairwise terms are summed over Kraus indices first, then combined. Same
/// search space as the per-index form; the two are incomparable in general.
inline BoundReport sum_bound_thm4(const std::vector<KrausChannel>& channels,
                                  const DensityMatrix& rho, const BoundParams& params) {
  return detail::run_multi_search(channels, rho, params, detail::HeadStyle::Stacked, "thm4",
                                  "sum_bound_thm4");
}

/// Parameter triple for the combined bound; defaults follow the reference
/// configuration (M=2, L=1 for the stacked LB1 branch, M=1, L=2 for the
/// stacked LB2 and per-index LB3 branches).
struct CombinedParams {
  BoundParams lb1{2.0, 1.0, BoundVariant::LB1};
  BoundParams lb2{1.0, 2.0, BoundVariant::LB2};
  BoundParams lb3{1.0, 2.0, BoundVariant::LB3};
};

/// Best of three: stacked LB1, stacked LB2, per-index LB3. Ties keep the
/// earlier entry in that order.
inline BoundReport combined_bound(const std::vector<KrausChannel>& channels,
                                  const DensityMatrix& rho, const CombinedParams& cp = {}) {
  if (cp.lb1.variant != BoundVariant::LB1 || cp.lb2.variant != BoundVariant::LB2 ||
      cp.lb3.variant != BoundVariant::LB3)
    throw std::invalid_argument("combined_bound: parameter triple tags its branch variants");
  BoundReport b1 = sum_bound_thm4(channels, rho, cp.lb1);
  BoundReport b2 = sum_bound_thm4(channels, rho, cp.lb2);
  BoundReport b3 = sum_bound_thm3(channels, rho, cp.lb3);

  BoundReport r;
  r.kind = "combined";
  r.lhs = b1.lhs;
  r.components = {{"thm4-LB1", b1.bound}, {"thm4-LB2", b2.bound}, {"thm3-LB3", b3.bound}};
  const BoundReport* win = &b1;
  r.winner = "thm4-LB1";
  if (b2.bound > win->bound) {
    win = &b2;
    r.winner = "thm4-LB2";
  }
  if (b3.bound > win->bound) {
    win = &b3;
    r.winner = "thm3-LB3";
  }
  r.bound = win->bound;
  r.gap = r.lhs - r.bound;
  r.params = win->params;
  r.maximizer = win->maximizer;
  return r;
}

}  // namespace chanvar
