#pragma once

#include "chanvar/chanvar.hpp"

namespace testutil {

using chanvar::cmat;
using chanvar::cplx;

inline cmat pauli_x() {
  cmat m = cmat::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline cmat pauli_y() {
  cmat m = cmat::Zero(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

inline cmat pauli_z() {
  cmat m = cmat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline cmat proj0() {
  cmat m = cmat::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

inline cmat proj1() {
  cmat m = cmat::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

inline chanvar::DensityMatrix bell_phi_plus() {
  cmat rho = cmat::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(0, 3) = 0.5;
  rho(3, 0) = 0.5;
  rho(3, 3) = 0.5;
  return chanvar::DensityMatrix::from_matrix(rho);
}

inline chanvar::KrausChannel identity_channel(chanvar::Index dim) {
  return chanvar::KrausChannel::create(
      chanvar::KrausMap::from_ops({cmat::Identity(dim, dim)}));
}

}  // namespace testutil
