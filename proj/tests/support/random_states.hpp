#pragma once

// Seeded random inputs for property tests: Ginibre-sampled density
// matrices, Haar-ish one-qubit unitaries and random pure states.

#include <random>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/states.hpp"

namespace testsupport {

using qcorr::cplx;
using qcorr::Mat2;
using qcorr::Mat4;

inline cplx gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return {d(rng), d(rng)};
}

/// rho = G G^dag / Tr(G G^dag) with G complex Gaussian.
inline qcorr::DensityMatrix<4> random_density(std::mt19937_64& rng) {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = gauss(rng);
  Mat4 m = g * g.adjoint();
  m = m * cplx{1.0 / m.trace().real(), 0.0};
  return qcorr::DensityMatrix<4>::from_matrix(m);
}

inline qcorr::Ket<4> random_pure(std::mt19937_64& rng) {
  qcorr::Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = gauss(rng);
  return qcorr::Ket<4>::normalized(v);
}

/// Random Hermitian with entries of order one.
template <int N>
inline qcorr::Matrix<N> random_hermitian(std::mt19937_64& rng) {
  qcorr::Matrix<N> g;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = gauss(rng);
  return (g + g.adjoint()) * cplx{0.5, 0.0};
}

/// One-qubit unitary from Gram-Schmidt on Gaussian columns.
inline Mat2 random_unitary2(std::mt19937_64& rng) {
  qcorr::Vec2 c0{gauss(rng), gauss(rng)};
  qcorr::Vec2 c1{gauss(rng), gauss(rng)};
  const double n0 = c0.norm();
  c0 = c0 * cplx{1.0 / n0, 0.0};
  const cplx overlap = qcorr::inner(c0, c1);
  c1 = c1 + c0 * (-overlap);
  const double n1 = c1.norm();
  c1 = c1 * cplx{1.0 / n1, 0.0};
  Mat2 u;
  for (int i = 0; i < 2; ++i) {
    u(i, 0) = c0[i];
    u(i, 1) = c1[i];
  }
  return u;
}

inline qcorr::DensityMatrix<4> conjugate_by(const qcorr::DensityMatrix<4>& rho,
                                            const Mat4& u) {
  return qcorr::DensityMatrix<4>::from_matrix(u * rho.matrix() * u.adjoint());
}

}  // namespace testsupport
