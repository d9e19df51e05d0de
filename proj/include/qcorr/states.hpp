#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/eig.hpp"
#include "qcorr/errors.hpp"

namespace qcorr {

inline constexpr double kKetNormTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kMixtureTol = 1e-12;

/// Normalized pure-state amplitude vector.
template <int N>
class Ket {
 public:
  explicit Ket(const Vec<N>& amplitudes) : a_(amplitudes) {
    if (std::abs(a_.norm() - 1.0) > kKetNormTol) {
      throw std::invalid_argument("Ket: amplitudes are not normalized");
    }
  }

  /// Rescales to unit norm; rejects the zero vector.
  static Ket normalized(const Vec<N>& amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 1e-14)) throw std::invalid_argument("Ket: cannot normalize a zero vector");
    return Ket(amplitudes * cplx{1.0 / n, 0.0});
  }

  static constexpr int dim() { return N; }
  const Vec<N>& amplitudes() const { return a_; }
  cplx operator[](int i) const { return a_[i]; }

 private:
  Vec<N> a_;
};

inline Ket<2> ket0() { return Ket<2>(Vec2{1.0, 0.0}); }
inline Ket<2> ket1() { return Ket<2>(Vec2{0.0, 1.0}); }

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline Ket<2> bloch_ket(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Ket<2>::normalized(Vec2{cplx{c, 0.0}, std::polar(s, phi)});
}

inline Ket<2> ket_plus() { return Ket<2>::normalized(Vec2{1.0, 1.0}); }
inline Ket<2> ket_minus() { return Ket<2>::normalized(Vec2{1.0, -1.0}); }

// |~+> and |~->: circular superpositions (|0> +- i|1>)/sqrt(2)
inline Ket<2> ket_tilde_plus() { return Ket<2>::normalized(Vec2{1.0, cplx{0.0, 1.0}}); }
inline Ket<2> ket_tilde_minus() { return Ket<2>::normalized(Vec2{1.0, cplx{0.0, -1.0}}); }

/// |+>_n = N (|0> + n|1>) with N = 1/sqrt(1+|n|^2).
inline Ket<2> ket_plus_n(cplx n) { return Ket<2>::normalized(Vec2{1.0, n}); }

/// |->_n = N (-conj(n)|0> + |1>), orthogonal to |+>_n.
inline Ket<2> ket_minus_n(cplx n) { return Ket<2>::normalized(Vec2{-std::conj(n), 1.0}); }

inline Ket<4> tensor(const Ket<2>& a, const Ket<2>& b) {
  return Ket<4>(tensor(a.amplitudes(), b.amplitudes()));
}

/// |Phi+> = (|00> + |11>)/sqrt(2)
inline Ket<4> bell_phi_plus() {
  return Ket<4>::normalized(Vec4{1.0, 0.0, 0.0, 1.0});
}

/// N_nk (|+>_n|+>_n + k |->_n|->_n) with N_nk = 1/sqrt(1+k^2).
inline Ket<4> phi_nk(cplx n, double k) {
  const Vec4 plus = tensor(ket_plus_n(n), ket_plus_n(n)).amplitudes();
  const Vec4 minus = tensor(ket_minus_n(n), ket_minus_n(n)).amplitudes();
  return Ket<4>::normalized(plus + minus * cplx{k, 0.0});
}

/// The unitary taking |0> to |+>_n and |1> to |->_n.
inline Mat2 local_basis_unitary(cplx n) {
  const Ket<2> p = ket_plus_n(n);
  const Ket<2> m = ket_minus_n(n);
  Mat2 u;
  for (int i = 0; i < 2; ++i) {
    u(i, 0) = p[i];
    u(i, 1) = m[i];
  }
  return u;
}

/// Hermitian, unit-trace, PSD (within tolerance) operator. Construction
/// validates the invariants; the stored matrix is the symmetrized input.
template <int N>
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const Matrix<N>& m, double psd_tol = kPsdTol) {
    if (!m.all_finite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
    if (m.hermiticity_defect() > kHermiticityTol) {
      throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within tolerance");
    }
    if (std::abs(m.trace() - cplx{1.0, 0.0}) > kTraceTol) {
      throw std::invalid_argument("DensityMatrix: trace differs from one");
    }
    const auto eig = herm_eig(m);
    if (eig.eigenvalues.front() < -psd_tol) {
      throw not_positive_semidefinite("DensityMatrix: negative eigenvalue beyond tolerance");
    }
    return DensityMatrix((m + m.adjoint()) * cplx{0.5, 0.0});
  }

  static DensityMatrix pure(const Ket<N>& psi) { return DensityMatrix(outer(psi.amplitudes())); }

  const Matrix<N>& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(Matrix<N> m) : m_(m) {}
  Matrix<N> m_;
};

/// One weighted term of a convex decomposition.
struct MixtureComponent {
  double weight = 0.0;
  DensityMatrix<4> state = DensityMatrix<4>::from_matrix(Mat4::identity() * cplx{0.25, 0.0});
};

/// Convex combination of the components. Weights must be nonnegative and
/// sum to one within 1e-12.
inline DensityMatrix<4> mix(std::span<const MixtureComponent> components) {
  if (components.empty()) throw std::invalid_argument("mix: no components");
  double total = 0.0;
  for (const MixtureComponent& c : components) {
    if (!(c.weight >= 0.0)) throw std::invalid_argument("mix: negative weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kMixtureTol) {
    throw std::invalid_argument("mix: weights do not sum to one");
  }
  Mat4 acc;
  for (const MixtureComponent& c : components) {
    acc = acc + c.state.matrix() * cplx{c.weight, 0.0};
  }
  return DensityMatrix<4>::from_matrix(acc);
}

inline DensityMatrix<4> mix(const std::vector<MixtureComponent>& components) {
  return mix(std::span<const MixtureComponent>(components));
}

namespace detail {

inline void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": parameter must lie in [0, 1]");
  }
}

inline DensityMatrix<4> two_term_mixture(double w, const Ket<4>& first, const Ket<4>& second) {
  const Mat4 m = outer(first.amplitudes()) * cplx{w, 0.0} +
                 outer(second.amplitudes()) * cplx{1.0 - w, 0.0};
  return DensityMatrix<4>::from_matrix(m);
}

}  // namespace detail

/// The three separable showcase states:
///   'a' -> |++><++|           (mix ignored)
///   'b' -> mix |++><++| + (1-mix) |--><--|
///   'c' -> mix |++><++| + (1-mix) |00><00|
inline DensityMatrix<4> rho_abc(char which, double mixp = 0.0) {
  switch (which) {
    case 'a':
      return DensityMatrix<4>::pure(tensor(ket_plus(), ket_plus()));
    case 'b':
      detail::require_probability(mixp, "rho_abc(b)");
      return detail::two_term_mixture(mixp, tensor(ket_plus(), ket_plus()),
                                      tensor(ket_minus(), ket_minus()));
    case 'c':
      detail::require_probability(mixp, "rho_abc(c)");
      return detail::two_term_mixture(mixp, tensor(ket_plus(), ket_plus()),
                                      tensor(ket0(), ket0()));
    default:
      throw std::invalid_argument("rho_abc: which must be one of 'a', 'b', 'c'");
  }
}

/// The four two-term separable mixtures used to separate classical from
/// merely separable correlations:
///   1 -> p|00><00| + (1-p)|11><11|
///   2 -> p|++><++| + (1-p)|0-><0-|
///   3 -> p|++><++| + (1-p)|-0><-0|
///   4 -> p|++><++| + (1-p)|00><00|
inline DensityMatrix<4> rho_1234(int which, double p) {
  detail::require_probability(p, "rho_1234");
  switch (which) {
    case 1:
      return detail::two_term_mixture(p, tensor(ket0(), ket0()), tensor(ket1(), ket1()));
    case 2:
      return detail::two_term_mixture(p, tensor(ket_plus(), ket_plus()),
                                      tensor(ket0(), ket_minus()));
    case 3:
      return detail::two_term_mixture(p, tensor(ket_plus(), ket_plus()),
                                      tensor(ket_minus(), ket0()));
    case 4:
      return detail::two_term_mixture(p, tensor(ket_plus(), ket_plus()),
                                      tensor(ket0(), ket0()));
    default:
      throw std::invalid_argument("rho_1234: which must be 1, 2, 3 or 4");
  }
}

/// (1-p) I/4 + p |Phi+><Phi+|
inline DensityMatrix<4> werner(double p) {
  detail::require_probability(p, "werner");
  const Mat4 m = Mat4::identity() * cplx{(1.0 - p) / 4.0, 0.0} +
                 outer(bell_phi_plus().amplitudes()) * cplx{p, 0.0};
  return DensityMatrix<4>::from_matrix(m);
}

/// The explicit product-state decomposition of werner(p), valid for
/// p <= 1/3: weight (1-3p) on I/4 and p/2 on each of the six product
/// states |++>, |-->, |00>, |11>, |~+~->, |~-~+>.
inline std::vector<MixtureComponent> werner_separable_decomposition(double p) {
  detail::require_probability(p, "werner_separable_decomposition");
  if (p > 1.0 / 3.0 + 1e-12) {
    throw std::invalid_argument(
        "werner_separable_decomposition: the mixture is a valid density operator "
        "only for p <= 1/3");
  }
  std::vector<MixtureComponent> parts;
  parts.reserve(7);
  parts.push_back({std::max(0.0, 1.0 - 3.0 * p),
                   DensityMatrix<4>::from_matrix(Mat4::identity() * cplx{0.25, 0.0})});
  const double w = p / 2.0;
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket_plus(), ket_plus()))});
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket_minus(), ket_minus()))});
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket0(), ket0()))});
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket1(), ket1()))});
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket_tilde_plus(), ket_tilde_minus()))});
  parts.push_back({w, DensityMatrix<4>::pure(tensor(ket_tilde_minus(), ket_tilde_plus()))});
  return parts;
}

/// (1-p) I/4 + p |Phi_nk+><Phi_nk+|; reduces to werner(p) at (n, k) = (0, 1).
/// n is the local superposition parameter (complex accepted), k >= 0 the
/// nonlocal one.
inline DensityMatrix<4> generalized_werner(double p, cplx n, double k) {
  detail::require_probability(p, "generalized_werner");
  if (!(k >= 0.0)) {
    throw std::invalid_argument("generalized_werner: k must be a real number >= 0");
  }
  const Mat4 m = Mat4::identity() * cplx{(1.0 - p) / 4.0, 0.0} +
                 outer(phi_nk(n, k).amplitudes()) * cplx{p, 0.0};
  return DensityMatrix<4>::from_matrix(m);
}

}  // namespace qcorr
