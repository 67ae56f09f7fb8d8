#pragma once

#include "chanvar/linalg.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace chanvar {

/// Validated density matrix with its principal square root cached.
/// Invariants: Hermitian within 1e-10, unit trace within 1e-10, PSD up to
/// the -1e-10 eigenvalue clamp.
class DensityMatrix {
 public:
  static constexpr double kTol = 1e-10;

  static DensityMatrix from_matrix(const cmat& rho, double tol = kTol) {
    require_square(rho, "DensityMatrix");
    require_finite(rho, "DensityMatrix");
    if (hermiticity_error(rho) > tol)
      throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tol)
      throw std::invalid_argument("DensityMatrix: trace differs from 1");
    cmat root = hermitian_sqrt(rho, tol);  // throws on eigenvalue < -tol
    return DensityMatrix(rho, std::move(root));
  }

  /// Qubit state 1/2 (I + r . sigma). Requires |r| <= 1 (tiny slack for rounding).
  static DensityMatrix from_bloch(double rx, double ry, double rz) {
    const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
    if (!(r <= 1.0 + 1e-12))
      throw std::invalid_argument("DensityMatrix: Bloch vector leaves the unit ball");
    cmat rho(2, 2);
    rho(0, 0) = cplx(0.5 * (1.0 + rz), 0.0);
    rho(1, 1) = cplx(0.5 * (1.0 - rz), 0.0);
    rho(0, 1) = cplx(0.5 * rx, -0.5 * ry);
    rho(1, 0) = cplx(0.5 * rx, 0.5 * ry);
    return DensityMatrix(rho, hermitian_sqrt(rho));
  }

  static DensityMatrix from_bloch(const std::array<double, 3>& r) {
    return from_bloch(r[0], r[1], r[2]);
  }

  static DensityMatrix maximally_mixed(Index dim) {
    if (dim <= 0) throw std::invalid_argument("DensityMatrix: dim must be positive");
    cmat rho = cmat::Identity(dim, dim) / static_cast<double>(dim);
    cmat root = cmat::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
    return DensityMatrix(rho, std::move(root));
  }

  const cmat& rho() const { return rho_; }
  const cmat& sqrt_rho() const { return sqrt_rho_; }
  Index dim() const { return rho_.rows(); }

 private:
  DensityMatrix(cmat rho, cmat root) : rho_(std::move(rho)), sqrt_rho_(std::move(root)) {}

  cmat rho_;
  cmat sqrt_rho_;
};

inline DensityMatrix density_from_bloch(double rx, double ry, double rz) {
  return DensityMatrix::from_bloch(rx, ry, rz);
}

inline DensityMatrix density_from_bloch(const std::array<double, 3>& r) {
  return DensityMatrix::from_bloch(r);
}

}  // namespace chanvar
