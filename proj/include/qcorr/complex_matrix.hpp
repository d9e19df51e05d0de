#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qcorr {

using cplx = std::complex<double>;

/// Which qubit of a bipartite operator an operation refers to.
/// Qubit A is the left tensor factor; basis order is |00>,|01>,|10>,|11>,
/// i.e. row index = 2*i_A + i_B.
enum class Subsystem { A, B };

/// Dense complex vector of dimension 2 (one qubit) or 4 (two qubits).
template <int N>
class Vec {
  static_assert(N == 2 || N == 4, "only one- and two-qubit dimensions are supported");

 public:
  Vec() : a_{} {}
  Vec(std::initializer_list<cplx> init) : a_{} {
    if (static_cast<int>(init.size()) != N) {
      throw std::invalid_argument("Vec: wrong number of amplitudes");
    }
    int i = 0;
    for (const cplx& v : init) a_[i++] = v;
  }

  static constexpr int dim() { return N; }

  cplx& operator[](int i) { return a_[static_cast<std::size_t>(i)]; }
  const cplx& operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }

  double norm() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  Vec operator*(const cplx& s) const {
    Vec out;
    for (int i = 0; i < N; ++i) out[i] = a_[static_cast<std::size_t>(i)] * s;
    return out;
  }

  Vec operator+(const Vec& o) const {
    Vec out;
    for (int i = 0; i < N; ++i) out[i] = (*this)[i] + o[i];
    return out;
  }

 private:
  std::array<cplx, N> a_;
};

using Vec2 = Vec<2>;
using Vec4 = Vec<4>;

/// <a|b> with the conjugation on the left argument.
template <int N>
inline cplx inner(const Vec<N>& a, const Vec<N>& b) {
  cplx s{0.0, 0.0};
  for (int i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Dense row-major complex matrix of dimension 2 or 4.
template <int N>
class Matrix {
  static_assert(N == 2 || N == 4, "only one- and two-qubit dimensions are supported");

 public:
  Matrix() : e_{} {}

  static constexpr int dim() { return N; }

  static Matrix identity() {
    Matrix m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  cplx& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * N + j)]; }
  const cplx& operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i * N + j)];
  }

  Matrix operator+(const Matrix& o) const {
    Matrix out;
    for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] + o.e_[k];
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    Matrix out;
    for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] - o.e_[k];
    return out;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix out;
    for (int i = 0; i < N; ++i) {
      for (int k = 0; k < N; ++k) {
        const cplx aik = (*this)(i, k);
        if (aik == cplx{0.0, 0.0}) continue;
        for (int j = 0; j < N; ++j) out(i, j) += aik * o(k, j);
      }
    }
    return out;
  }

  Matrix operator*(const cplx& s) const {
    Matrix out;
    for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] * s;
    return out;
  }

  friend Matrix operator*(const cplx& s, const Matrix& m) { return m * s; }

  Matrix adjoint() const {
    Matrix out;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  Matrix conjugate() const {
    Matrix out;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) out(i, j) = std::conj((*this)(i, j));
    return out;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (int i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  /// Largest |a_ij - conj(a_ji)| over all entries.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  double max_abs_diff(const Matrix& o) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < e_.size(); ++k)
      worst = std::max(worst, std::abs(e_[k] - o.e_[k]));
    return worst;
  }

  bool all_finite() const {
    for (const cplx& v : e_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  cplx det() const {
    if constexpr (N == 2) {
      return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    } else {
      // cofactor expansion along the first row
      cplx d{0.0, 0.0};
      for (int c = 0; c < 4; ++c) d += (*this)(0, c) * cofactor3(c);
      return d;
    }
  }

 private:
  cplx cofactor3(int skip_col) const {
    // 3x3 determinant of rows 1..3 with column skip_col removed, signed.
    int cols[3];
    int idx = 0;
    for (int c = 0; c < 4; ++c)
      if (c != skip_col) cols[idx++] = c;
    const auto& m = *this;
    const cplx d3 = m(1, cols[0]) * (m(2, cols[1]) * m(3, cols[2]) - m(2, cols[2]) * m(3, cols[1])) -
                    m(1, cols[1]) * (m(2, cols[0]) * m(3, cols[2]) - m(2, cols[2]) * m(3, cols[0])) +
                    m(1, cols[2]) * (m(2, cols[0]) * m(3, cols[1]) - m(2, cols[1]) * m(3, cols[0]));
    return (skip_col % 2 == 0) ? d3 : -d3;
  }

  std::array<cplx, static_cast<std::size_t>(N) * N> e_;
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

inline Mat2 sigma_x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline Mat2 sigma_y() {
  Mat2 m;
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

inline Mat2 sigma_z() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// Kronecker product with qubit A as the left factor:
/// out[2i+k][2j+l] = a(i,j) * b(k,l).
inline Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec4 tensor(const Vec2& a, const Vec2& b) {
  Vec4 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out[2 * i + k] = a[i] * b[k];
  return out;
}

/// |v><v|
template <int N>
inline Matrix<N> outer(const Vec<N>& v) {
  Matrix<N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = v[i] * std::conj(v[j]);
  return out;
}

/// Reduced operator on the kept qubit. Traces out the other one.
inline Mat2 partial_trace(const Mat4& rho, Subsystem keep) {
  Mat2 out;
  switch (keep) {
    case Subsystem::A:
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int m = 0; m < 2; ++m) out(i, j) += rho(2 * i + m, 2 * j + m);
      return out;
    case Subsystem::B:
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int m = 0; m < 2; ++m) out(i, j) += rho(2 * m + i, 2 * m + j);
      return out;
  }
  throw std::invalid_argument("partial_trace: unknown subsystem tag");
}

/// Transpose of the B factor only: out[(i,j),(k,l)] = rho[(i,l),(k,j)].
inline Mat4 partial_transpose_b(const Mat4& rho) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(2 * i + j, 2 * k + l) = rho(2 * i + l, 2 * k + j);
  return out;
}

/// Exchanges the two qubits: out[(i,j),(k,l)] = rho[(j,i),(l,k)].
inline Mat4 swap_qubits(const Mat4& rho) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(2 * i + j, 2 * k + l) = rho(2 * j + i, 2 * l + k);
  return out;
}

}  // namespace qcorr
