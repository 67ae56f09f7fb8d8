#pragma once

#include "chanvar/channel.hpp"
#include "chanvar/linalg.hpp"
#include "chanvar/state.hpp"

#include <cstdint>
#include <random>

namespace chanvar {

/// SplitMix64 finalizer; used to derive independent per-instance seeds.
inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic seed for (base seed, stream, trial); order-independent across
/// streams so any instance can be regenerated in isolation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  return split_mix64(split_mix64(seed ^ split_mix64(stream)) ^ trial);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline cmat random_gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cmat g(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = cplx(re, im);
    }
  return g;
}

/// Haar-distributed unitary via QR with the phase convention fixed.
inline cmat random_unitary(Index dim, std::mt19937_64& rng) {
  if (dim <= 0) throw std::invalid_argument("random_unitary: dim must be positive");
  const cmat g = random_gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ() * cmat::Identity(dim, dim);
  const cmat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : cplx(1.0, 0.0);
  }
  return q;
}

/// Full-rank random state: G G^dag normalized to unit trace.
inline DensityMatrix random_density(Index dim, std::mt19937_64& rng) {
  if (dim <= 0) throw std::invalid_argument("random_density: dim must be positive");
  const cmat g = random_gaussian_matrix(dim, dim, rng);
  cmat w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + w.adjoint());
  return DensityMatrix::from_matrix(w);
}

/// Qubit state drawn uniformly from the Bloch ball (rejection from the cube).
inline DensityMatrix random_bloch_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const double x = u(rng), y = u(rng), z = u(rng);
    if (x * x + y * y + z * z <= 1.0) return DensityMatrix::from_bloch(x, y, z);
  }
}

/// Random state: for qubits, a coin flip between Bloch-ball uniform and the
/// full-rank ensemble; higher dimensions use the full-rank ensemble.
inline DensityMatrix random_state(Index dim, std::mt19937_64& rng) {
  if (dim == 2) {
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng) == 0) return random_bloch_state(rng);
  }
  return random_density(dim, rng);
}

/// Random complete channel: Gaussian blocks G_i whitened by
/// S = (sum_i G_i^dag G_i)^{-1/2}, so completeness holds exactly up to rounding.
inline KrausChannel random_channel(Index dim, int n_ops, std::mt19937_64& rng) {
  if (dim <= 0 || n_ops <= 0) throw std::invalid_argument("random_channel: bad shape");
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<cmat> blocks;
    blocks.reserve(static_cast<std::size_t>(n_ops));
    cmat acc = cmat::Zero(dim, dim);
    for (int i = 0; i < n_ops; ++i) {
      blocks.push_back(random_gaussian_matrix(dim, dim, rng));
      acc += blocks.back().adjoint() * blocks.back();
    }
    Eigen::SelfAdjointEigenSolver<cmat> es(acc);
    if (es.info() != Eigen::Success) continue;
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam(0) <= 1e-12 * lam(lam.size() - 1)) continue;  // ill-conditioned draw
    const cmat inv_root =
        es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    std::vector<cmat> ops;
    ops.reserve(blocks.size());
    for (const cmat& g : blocks) ops.push_back(g * inv_root);
    return KrausChannel::create(KrausMap::from_ops(std::move(ops)));
  }
  throw std::runtime_error("random_channel: repeated ill-conditioned draws");
}

}  // namespace chanvar
