#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace pauliconj {

// Single-qubit Pauli transfer matrix, basis order (I, X, Y, Z).
struct LogicalPTM {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();

  double operator()(int r, int c) const { return m(r, c); }
  double fidelity() const { return (m.trace() + 2.0) / 6.0; }
};

inline double average_fidelity(const LogicalPTM& t) { return t.fidelity(); }

// Logical Z rotation by phi: X -> cos(phi) X + sin(phi) Y.
inline Eigen::Matrix4d z_rotation_ptm(double phi) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
  r(1, 1) = std::cos(phi);
  r(1, 2) = -std::sin(phi);
  r(2, 1) = std::sin(phi);
  r(2, 2) = std::cos(phi);
  return r;
}

inline Eigen::Matrix2cd pauli_matrix(int k) {
  using C = std::complex<double>;
  Eigen::Matrix2cd p;
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, C(0, -1), C(0, 1), 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

// Choi matrix (1/4) sum_ij R_ij P_j^T (x) P_i, unit trace for a trace-preserving map.
inline Eigen::Matrix4cd choi_from_ptm(const Eigen::Matrix4d& r) {
  Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (r(i, j) == 0.0) continue;
      Eigen::Matrix4cd k;
      const Eigen::Matrix2cd a = pauli_matrix(j).transpose(), b = pauli_matrix(i);
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) k.block<2, 2>(2 * p, 2 * q) = a(p, q) * b;
      c += r(i, j) * k;
    }
  return c / 4.0;
}

inline double min_choi_eigenvalue(const Eigen::Matrix4d& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi_from_ptm(r), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_completely_positive(const Eigen::Matrix4d& r, double tol = 1e-12) { return min_choi_eigenvalue(r) >= -tol; }

inline Eigen::Matrix4d matrix_power(const Eigen::Matrix4d& r, int k) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Identity(), base = r;
  for (; k > 0; k >>= 1) {
    if (k & 1) out = out * base;
    base = base * base;
  }
  return out;
}

}  // namespace pauliconj
