#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/errors.hpp"

namespace qcorr {

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Spectral decomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors as orthonormal columns of V, input = V diag(w) V^dagger.
template <int N>
struct EigenDecomposition {
  std::array<double, N> eigenvalues;
  Matrix<N> eigenvectors;
};

namespace detail {

template <int N>
inline double off_diagonal_norm(const Matrix<N>& a) {
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q). Updates a <- U^dag a U and
// accumulates v <- v U.
template <int N>
inline void jacobi_rotate(Matrix<N>& a, Matrix<N>& v, int p, int q) {
  const cplx apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i alpha}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  // smaller-magnitude root of t^2 - 2*tau*t - 1 = 0
  const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx upq = -s * phase;          // U(p,q)
  const cplx uqp = s * std::conj(phase);  // U(q,p)

  // columns: B = A U
  for (int i = 0; i < N; ++i) {
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    a(i, p) = aip * c + aiq * uqp;
    a(i, q) = aip * upq + aiq * c;
  }
  // rows: A' = U^dag B
  for (int j = 0; j < N; ++j) {
    const cplx apj = a(p, j);
    const cplx aqj = a(q, j);
    a(p, j) = c * apj + std::conj(uqp) * aqj;
    a(q, j) = std::conj(upq) * apj + c * aqj;
  }
  a(p, q) = cplx{0.0, 0.0};
  a(q, p) = cplx{0.0, 0.0};
  a(p, p) = cplx{a(p, p).real(), 0.0};
  a(q, q) = cplx{a(q, q).real(), 0.0};

  for (int i = 0; i < N; ++i) {
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = vip * c + viq * uqp;
    v(i, q) = vip * upq + viq * c;
  }
}

}  // namespace detail

/// Eigendecomposition via cyclic Jacobi sweeps. The input must be Hermitian
/// within 1e-10 max-abs asymmetry; it is symmetrized before iterating.
template <int N>
inline EigenDecomposition<N> herm_eig(const Matrix<N>& h) {
  if (!h.all_finite()) throw std::invalid_argument("herm_eig: non-finite entries");
  if (h.hermiticity_defect() > kHermiticityTol) {
    throw std::invalid_argument("herm_eig: matrix is not Hermitian within tolerance");
  }

  Matrix<N> a = (h + h.adjoint()) * cplx{0.5, 0.0};
  Matrix<N> v = Matrix<N>::identity();

  constexpr int kMaxSweeps = 100;
  const double stop = 1e-14 * a.frobenius_norm();
  bool converged = detail::off_diagonal_norm(a) <= stop;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (int p = 0; p < N - 1; ++p)
      for (int q = p + 1; q < N; ++q) detail::jacobi_rotate(a, v, p, q);
    converged = detail::off_diagonal_norm(a) <= stop;
  }
  if (!converged) throw numeric_error("herm_eig: Jacobi iteration did not converge");

  std::array<int, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition<N> out;
  for (int k = 0; k < N; ++k) {
    out.eigenvalues[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)],
                                                     order[static_cast<std::size_t>(k)])
                                                       .real();
    for (int i = 0; i < N; ++i)
      out.eigenvectors(i, k) = v(i, order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Singular values by one-sided Jacobi: columns are rotated pairwise until
/// mutually orthogonal, then the singular values are the column norms.
/// Small singular values keep high relative accuracy, which the
/// eigenvalue-then-sqrt route cannot offer.
template <int N>
inline std::array<double, N> svd_singular_values(const Matrix<N>& m) {
  Matrix<N> a = m;
  constexpr int kMaxSweeps = 100;
  // columns this far below the largest act as exact zero singular values
  const double floor2 = 1e-30 * a.frobenius_norm() * a.frobenius_norm();
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        double npp = 0.0, nqq = 0.0;
        cplx g{0.0, 0.0};
        for (int i = 0; i < N; ++i) {
          npp += std::norm(a(i, p));
          nqq += std::norm(a(i, q));
          g += std::conj(a(i, p)) * a(i, q);
        }
        if (npp <= floor2 || nqq <= floor2) continue;
        const double r = std::abs(g);
        if (r <= 1e-15 * std::sqrt(npp * nqq) || r == 0.0) continue;
        converged = false;

        // same rotation as jacobi_rotate, acting on the column Gram matrix
        const cplx phase = g / r;
        const double tau = (nqq - npp) / (2.0 * r);
        const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < N; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = aip * c + aiq * (s * std::conj(phase));
          a(i, q) = aip * (-s * phase) + aiq * c;
        }
      }
    }
  }
  if (!converged) throw numeric_error("svd_singular_values: Jacobi iteration did not converge");

  std::array<double, N> sigma{};
  for (int q = 0; q < N; ++q) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += std::norm(a(i, q));
    sigma[static_cast<std::size_t>(q)] = std::sqrt(s);
  }
  std::sort(sigma.begin(), sigma.end());
  return sigma;
}

/// Hermitian PSD square root: result R with R*R = input. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything lower is rejected.
template <int N>
inline Matrix<N> psd_sqrt(const Matrix<N>& m, double psd_tol = kPsdTol) {
  const EigenDecomposition<N> eig = herm_eig(m);
  Matrix<N> r;
  for (int k = 0; k < N; ++k) {
    double w = eig.eigenvalues[static_cast<std::size_t>(k)];
    if (w < -psd_tol) {
      throw not_positive_semidefinite("psd_sqrt: eigenvalue below -tolerance");
    }
    const double sw = std::sqrt(std::max(w, 0.0));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        r(i, j) += sw * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return (r + r.adjoint()) * cplx{0.5, 0.0};
}

}  // namespace qcorr
