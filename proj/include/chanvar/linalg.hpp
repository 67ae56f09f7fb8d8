#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace chanvar {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline bool is_finite(const cmat& x) {
  return x.allFinite();
}

inline void require_square(const cmat& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw std::invalid_argument(std::string(what) + ": expected a non-empty square matrix, got " +
                                std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

inline void require_finite(const cmat& x, const char* what) {
  if (!is_finite(x))
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

/// Frobenius norm.
inline double fro_norm(const cmat& x) {
  return x.norm();
}

/// Hilbert-Schmidt inner product Tr(x^dag y). Requires matching shapes.
inline cplx trace_inner(const cmat& x, const cmat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("trace_inner: shape mismatch");
  return (x.conjugate().cwiseProduct(y)).sum();
}

inline double hermiticity_error(const cmat& x) {
  return (x - x.adjoint()).norm();
}

/// Entry moduli of a square matrix, flattened row-major, sorted descending.
/// Ties keep row-major encounter order (stable sort); downstream consumers
/// must not depend on tie order.
struct SortedAbsVector {
  std::vector<double> values;  // length dim*dim, non-increasing
  Index dim = 0;
};

inline SortedAbsVector sorted_abs_vec(const cmat& x) {
  require_square(x, "sorted_abs_vec");
  require_finite(x, "sorted_abs_vec");
  SortedAbsVector out;
  out.dim = x.rows();
  out.values.reserve(static_cast<std::size_t>(out.dim * out.dim));
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c)
      out.values.push_back(std::abs(x(r, c)));
  std::stable_sort(out.values.begin(), out.values.end(), std::greater<double>());
  return out;
}

/// Kronecker product, row-major block convention: row index ia*rows(y)+ib.
inline cmat tensor(const cmat& x, const cmat& y) {
  cmat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index ia = 0; ia < x.rows(); ++ia)
    for (Index ja = 0; ja < x.cols(); ++ja)
      out.block(ia * y.rows(), ja * y.cols(), y.rows(), y.cols()) = x(ia, ja) * y;
  return out;
}

enum class Subsystem { A, B };

/// Partial trace of an operator on C^da (x) C^db; keeps the named factor.
inline cmat partial_trace(const cmat& w, Index dim_a, Index dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0 || w.rows() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  require_square(w, "partial_trace");
  if (keep == Subsystem::A) {
    cmat out = cmat::Zero(dim_a, dim_a);
    for (Index ia = 0; ia < dim_a; ++ia)
      for (Index ja = 0; ja < dim_a; ++ja)
        for (Index ib = 0; ib < dim_b; ++ib)
          out(ia, ja) += w(ia * dim_b + ib, ja * dim_b + ib);
    return out;
  }
  cmat out = cmat::Zero(dim_b, dim_b);
  for (Index ib = 0; ib < dim_b; ++ib)
    for (Index jb = 0; jb < dim_b; ++jb)
      for (Index ia = 0; ia < dim_a; ++ia)
        out(ib, jb) += w(ia * dim_b + ib, ia * dim_b + jb);
  return out;
}

/// Principal square root of a PSD Hermitian matrix.
/// Eigenvalues in [-tol, 0) are clamped to 0; anything below -tol throws.
inline cmat hermitian_sqrt(const cmat& m, double tol = 1e-10) {
  require_square(m, "hermitian_sqrt");
  require_finite(m, "hermitian_sqrt");
  if (hermiticity_error(m) > tol)
    throw std::invalid_argument("hermitian_sqrt: matrix is not Hermitian within tolerance");
  const cmat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -tol)
      throw std::invalid_argument("hermitian_sqrt: negative eigenvalue " + std::to_string(lam(i)));
    if (lam(i) < 0.0) lam(i) = 0.0;
  }
  const cmat root =
      es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (root + root.adjoint());  // kill rounding skew
}

inline double unitarity_error(const cmat& u) {
  require_square(u, "unitarity_error");
  return (u.adjoint() * u - cmat::Identity(u.rows(), u.cols())).norm();
}

}  // namespace chanvar
