#pragma once

#include "chanvar/channel.hpp"
#include "chanvar/linalg.hpp"
#include "chanvar/state.hpp"

#include <vector>

namespace chanvar {

/// <K>_rho = Tr(rho K).
inline cplx expectation(const cmat& k, const DensityMatrix& rho) {
  if (k.rows() != rho.dim() || k.cols() != rho.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  return (rho.rho() * k).trace();
}

/// Mean-centered operator pushed onto the state: (K - <K> I) sqrt(rho).
/// Centering is linear in K, so sums and differences commute with it.
struct CenteredKraus {
  cmat op;    // (K - mean I) * sqrt_rho
  cplx mean;  // Tr(rho K)
};

inline CenteredKraus centered_kraus(const cmat& k, const DensityMatrix& rho) {
  CenteredKraus c;
  c.mean = expectation(k, rho);
  c.op = (k - c.mean * cmat::Identity(k.rows(), k.cols())) * rho.sqrt_rho();
  return c;
}

/// Absolute variance of one operator in the state rho:
/// Tr(rho K^dag K) - |Tr(rho K)|^2, realized as the squared Frobenius norm
/// of the centered operator. Non-negative by construction.
inline double rho_abs_variance(const cmat& k, const DensityMatrix& rho) {
  const CenteredKraus c = centered_kraus(k, rho);
  return c.op.squaredNorm();
}

struct UncertaintyValue {
  double value = 0.0;              // sum of per_kraus, exactly
  std::vector<double> per_kraus;   // one non-negative term per operator
};

/// Uncertainty of an operator-sum map: the per-operator absolute variances
/// and their total. For a complete channel this equals
/// 1 - sum_i |Tr(rho K_i)|^2.
inline UncertaintyValue channel_uncertainty(const KrausMap& map, const DensityMatrix& rho) {
  if (map.dim() != rho.dim())
    throw std::invalid_argument("channel_uncertainty: dimension mismatch");
  UncertaintyValue u;
  u.per_kraus.reserve(map.size());
  for (const cmat& k : map.ops) {
    const double v = rho_abs_variance(k, rho);
    u.per_kraus.push_back(v);
    u.value += v;
  }
  return u;
}

inline UncertaintyValue channel_uncertainty(const KrausChannel& ch, const DensityMatrix& rho) {
  return channel_uncertainty(ch.map(), rho);
}

}  // namespace chanvar
