#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/eig.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/minimize.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

inline constexpr double kDiscordZeroTol = 1e-6;
inline constexpr double kOutcomeProbabilityFloor = 1e-14;
inline constexpr double kDiscordNoiseFloor = 1e-9;

/// One-qubit projective measurement basis, parameterized by Bloch angles.
/// The projectors are pi0 = |psi(theta,phi)><psi(theta,phi)| and
/// pi1 = I - pi0.
struct MeasurementBasis {
  double theta = 0.0;  // polar angle, [0, pi]
  double phi = 0.0;    // azimuthal angle, [0, 2*pi)

  Ket<2> ket() const { return bloch_ket(theta, phi); }

  std::pair<Mat2, Mat2> projectors() const {
    const Mat2 pi0 = outer(ket().amplitudes());
    return {pi0, Mat2::identity() - pi0};
  }
};

/// Both minimized discords of a state. Components are named by where the
/// measurement acts: d_xy measures qubit B, d_yx measures qubit A.
struct DiscordVector {
  double d_xy = 0.0;  // measurement on B
  double d_yx = 0.0;  // measurement on A

  double measured_on(Subsystem s) const { return s == Subsystem::B ? d_xy : d_yx; }
  double max_component() const { return std::max(d_xy, d_yx); }
};

enum class Label { Entangled, LocalQuantumnessOnly, ClassicalOrProduct };

inline std::string_view to_string(Label label) {
  switch (label) {
    case Label::Entangled:
      return "Entangled";
    case Label::LocalQuantumnessOnly:
      return "LocalQuantumnessOnly";
    case Label::ClassicalOrProduct:
      return "ClassicalOrProduct";
  }
  return "?";
}

struct ClassificationResult {
  Label label = Label::ClassicalOrProduct;
  bool entangled = false;
  DiscordVector delta;
};

/// Settings for the discord minimization: a coarse grid scan followed by
/// simplex refinement from the few best grid points.
struct DiscordOptions {
  int grid_n = 64;
  int refine_iters = 500;
};

struct DiscordResult {
  double value = 0.0;
  double theta = 0.0;  // minimizing basis angle
  double phi = 0.0;
  int iterations = 0;  // refinement iterations, summed over restarts
};

namespace detail {

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Entropy from an eigenvalue list, clamping roundoff-negative values.
template <std::size_t N>
inline double entropy_from_eigenvalues(const std::array<double, N>& w, double psd_tol) {
  double h = 0.0;
  for (double v : w) {
    if (v < -psd_tol) {
      throw not_positive_semidefinite("entropy: negative eigenvalue beyond tolerance");
    }
    h -= xlog2x(std::max(v, 0.0));
  }
  return h;
}

template <int N>
inline double entropy_of(const Matrix<N>& m, double psd_tol = kPsdTol) {
  return entropy_from_eigenvalues(herm_eig(m).eigenvalues, psd_tol);
}

// Conditional entropy of the unmeasured qubit given a projective
// measurement in the basis {b0, b1} on `measured`. Works directly on the
// contracted 2x2 blocks; eigenvalues of those come in closed form, which
// keeps the grid scan cheap.
inline double conditional_entropy_contracted(const Mat4& rho, Subsystem measured,
                                             double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const cplx eip = std::polar(1.0, phi);
  // b1 is orthogonal to b0 = (c, s e^{i phi})
  const std::array<std::array<cplx, 2>, 2> basis{{{cplx{c, 0.0}, s * eip},
                                                  {-s * std::conj(eip), cplx{c, 0.0}}}};

  double total = 0.0;
  for (const auto& b : basis) {
    // m = (I (x) <b|) rho (I (x) |b>) for measurement on B, and the
    // mirrored contraction for measurement on A.
    cplx m00{0.0, 0.0}, m01{0.0, 0.0}, m11{0.0, 0.0};
    if (measured == Subsystem::B) {
      for (int m = 0; m < 2; ++m) {
        const cplx bm = std::conj(b[static_cast<std::size_t>(m)]);
        for (int mp = 0; mp < 2; ++mp) {
          const cplx w = bm * b[static_cast<std::size_t>(mp)];
          m00 += w * rho(m, mp);
          m01 += w * rho(m, 2 + mp);
          m11 += w * rho(2 + m, 2 + mp);
        }
      }
    } else {
      for (int m = 0; m < 2; ++m) {
        const cplx bm = std::conj(b[static_cast<std::size_t>(m)]);
        for (int mp = 0; mp < 2; ++mp) {
          const cplx w = bm * b[static_cast<std::size_t>(mp)];
          m00 += w * rho(2 * m, 2 * mp);
          m01 += w * rho(2 * m, 2 * mp + 1);
          m11 += w * rho(2 * m + 1, 2 * mp + 1);
        }
      }
    }

    const double pj = m00.real() + m11.real();
    if (pj < kOutcomeProbabilityFloor) continue;

    // eigenvalues of the unnormalized 2x2 conditional block
    const double half_diff = (m00.real() - m11.real()) / 2.0;
    const double rad = std::sqrt(half_diff * half_diff + std::norm(m01));
    const double mu_hi = pj / 2.0 + rad;
    const double mu_lo = pj / 2.0 - rad;
    // p_j * H(block / p_j) = -sum mu log2 mu + p_j log2 p_j
    total += -xlog2x(std::max(mu_hi, 0.0)) - xlog2x(std::max(mu_lo, 0.0)) + xlog2x(pj);
  }
  return total;
}

// Basis-independent part of the discord function:
// H(marginal of the measured qubit) - H(joint).
inline double discord_base(const Mat4& rho, Subsystem measured) {
  return entropy_of(partial_trace(rho, measured)) - entropy_of(rho);
}

// Map an arbitrary (theta, phi) to the canonical patch [0, pi] x [0, 2pi).
// (theta, phi) and (2pi - theta, phi + pi) describe the same projector.
inline std::pair<double, double> canonical_angles(double theta, double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  if (theta > std::numbers::pi) {
    theta = two_pi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  return {theta, phi};
}

}  // namespace detail

/// Von Neumann entropy in bits.
template <int N>
inline double entropy(const DensityMatrix<N>& rho, double psd_tol = kPsdTol) {
  return detail::entropy_from_eigenvalues(herm_eig(rho.matrix()).eigenvalues, psd_tol);
}

/// Reduced state of the kept qubit.
inline DensityMatrix<2> marginal(const DensityMatrix<4>& rho, Subsystem keep) {
  return DensityMatrix<2>::from_matrix(partial_trace(rho.matrix(), keep));
}

/// Tr(rho ox (x) oy) - Tr(rho_A ox) Tr(rho_B oy). Observables must be
/// Hermitian; the result is real up to numerical residue.
inline double covariance(const DensityMatrix<4>& rho, const Mat2& ox, const Mat2& oy) {
  if (ox.hermiticity_defect() > kHermiticityTol ||
      oy.hermiticity_defect() > kHermiticityTol) {
    throw std::invalid_argument("covariance: observables must be Hermitian");
  }
  const cplx joint = (rho.matrix() * tensor(ox, oy)).trace();
  const cplx mean_x = (partial_trace(rho.matrix(), Subsystem::A) * ox).trace();
  const cplx mean_y = (partial_trace(rho.matrix(), Subsystem::B) * oy).trace();
  const cplx value = joint - mean_x * mean_y;
  if (std::abs(value.imag()) > 1e-10) {
    throw numeric_error("covariance: imaginary residue above tolerance");
  }
  return value.real();
}

/// (sum |lambda_i| - 1)/2 over the partial-transpose spectrum, clamped at 0.
/// Positive exactly when the state is entangled.
inline double negativity(const DensityMatrix<4>& rho) {
  const auto eig = herm_eig(partial_transpose_b(rho.matrix()));
  double abs_sum = 0.0;
  for (double w : eig.eigenvalues) abs_sum += std::abs(w);
  return std::max(0.0, (abs_sum - 1.0) / 2.0);
}

/// Peres-Horodecki test, exact for two qubits: entangled iff the partial
/// transpose has an eigenvalue below -psd_tol.
inline bool is_entangled(const DensityMatrix<4>& rho, double psd_tol = kPsdTol) {
  return herm_eig(partial_transpose_b(rho.matrix())).eigenvalues.front() < -psd_tol;
}

/// H(A) + H(B) - H(AB) in bits.
inline double mutual_information_total(const DensityMatrix<4>& rho) {
  return detail::entropy_of(partial_trace(rho.matrix(), Subsystem::A)) +
         detail::entropy_of(partial_trace(rho.matrix(), Subsystem::B)) -
         detail::entropy_of(rho.matrix());
}

/// sum_j p_j H(state of the unmeasured qubit given outcome j). Outcomes
/// with probability below 1e-14 contribute zero.
inline double conditional_entropy_after_measurement(const DensityMatrix<4>& rho,
                                                    Subsystem measured,
                                                    const MeasurementBasis& basis) {
  return detail::conditional_entropy_contracted(rho.matrix(), measured, basis.theta,
                                                basis.phi);
}

/// Discord function for a fixed measurement basis:
/// H(marginal of the measured qubit) - H(joint) + conditional entropy.
/// Nonnegative up to numerical noise; noise below 1e-9 is clamped.
inline double discord_function(const DensityMatrix<4>& rho, Subsystem measured,
                               const MeasurementBasis& basis) {
  const double v = detail::discord_base(rho.matrix(), measured) +
                   detail::conditional_entropy_contracted(rho.matrix(), measured,
                                                          basis.theta, basis.phi);
  if (v < -kDiscordNoiseFloor) {
    throw numeric_error("discord_function: value below the noise floor", v);
  }
  return std::max(v, 0.0);
}

/// Minimizes the discord function over all one-dimensional projective
/// measurements on `measured`: a grid_n x grid_n scan of
/// [0, pi] x [0, 2pi), then Nelder-Mead refinement from the 5 best grid
/// points. Deterministic; grid ties resolve to the smallest (theta, phi).
inline DiscordResult minimize_discord(const DensityMatrix<4>& rho, Subsystem measured,
                                      const DiscordOptions& opts = {}) {
  if (opts.grid_n < 2) throw std::invalid_argument("minimize_discord: grid_n must be >= 2");
  if (opts.refine_iters < 0) {
    throw std::invalid_argument("minimize_discord: refine_iters must be >= 0");
  }

  const Mat4& m = rho.matrix();
  const double base = detail::discord_base(m, measured);
  auto f = [&m, measured, base](double theta, double phi) {
    return base + detail::conditional_entropy_contracted(m, measured, theta, phi);
  };

  const double theta_step = std::numbers::pi / (opts.grid_n - 1);
  const double phi_step = 2.0 * std::numbers::pi / opts.grid_n;

  // full scan, keeping the 5 best points for refinement
  struct GridPoint {
    double value, theta, phi;
  };
  std::vector<GridPoint> best;
  best.reserve(static_cast<std::size_t>(opts.grid_n) * opts.grid_n);
  for (int i = 0; i < opts.grid_n; ++i) {
    const double theta = i * theta_step;
    for (int j = 0; j < opts.grid_n; ++j) {
      const double phi = j * phi_step;
      best.push_back({f(theta, phi), theta, phi});
    }
  }
  const std::size_t keep = std::min<std::size_t>(5, best.size());
  std::partial_sort(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(keep),
                    best.end(), [](const GridPoint& a, const GridPoint& b) {
                      return std::tie(a.value, a.theta, a.phi) <
                             std::tie(b.value, b.theta, b.phi);
                    });

  DiscordResult out;
  out.value = best.front().value;
  out.theta = best.front().theta;
  out.phi = best.front().phi;
  const double step = theta_step / 2.0;
  for (std::size_t k = 0; k < keep; ++k) {
    const SimplexResult r = nelder_mead_2d(f, {best[k].theta, best[k].phi}, step,
                                           opts.refine_iters, 1e-10);
    out.iterations += r.iterations;
    if (r.value < out.value) {
      out.value = r.value;
      out.theta = r.x[0];
      out.phi = r.x[1];
    }
  }

  if (std::isnan(out.value)) {
    throw numeric_error("minimize_discord: objective evaluated to NaN", out.value);
  }
  if (out.value < -kDiscordNoiseFloor) {
    throw numeric_error("minimize_discord: minimum below the noise floor", out.value);
  }
  out.value = std::max(out.value, 0.0);
  std::tie(out.theta, out.phi) = detail::canonical_angles(out.theta, out.phi);
  return out;
}

/// Minimized discord in bits with the measurement on `measured`.
inline double discord(const DensityMatrix<4>& rho, Subsystem measured,
                      const DiscordOptions& opts = {}) {
  return minimize_discord(rho, measured, opts).value;
}

/// Both minimized discords.
inline DiscordVector discord_vector(const DensityMatrix<4>& rho,
                                    const DiscordOptions& opts = {}) {
  return {discord(rho, Subsystem::B, opts), discord(rho, Subsystem::A, opts)};
}

/// Wootters concurrence. The spin-flip spectrum is the eigenvalue list of
/// sqrt(rho) rho~ sqrt(rho) with rho~ = (sy (x) sy) conj(rho) (sy (x) sy);
/// with T = sqrt(rho) (sy (x) sy) conj(sqrt(rho)) that matrix is T T^dag,
/// so the lambdas are the singular values of T. Computing them directly
/// keeps near-zero modes accurate, which eigenvalue-then-sqrt loses.
inline double concurrence(const DensityMatrix<4>& rho) {
  const Mat4 yy = tensor(sigma_y(), sigma_y());
  const Mat4 root = psd_sqrt(rho.matrix());
  const Mat4 t = root * yy * root.conjugate();
  const auto lam = svd_singular_values(t);  // ascending
  return std::max(0.0, lam[3] - lam[2] - lam[1] - lam[0]);
}

/// Entanglement boundary of the generalized Werner family:
/// entangled iff p > (1+k^2)/(1+k^2+4k). At k = 0 the state is separable
/// for every p, so the boundary is reported as 1.
inline double gw_threshold(double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("gw_threshold: k must be >= 0");
  const double kk = 1.0 + k * k;
  return kk / (kk + 4.0 * k);
}

/// Sorts a state into the three-way taxonomy: entangled, separable with
/// nonzero discord, or classical/product (both discords below zero_tol).
inline ClassificationResult classify(const DensityMatrix<4>& rho,
                                     double zero_tol = kDiscordZeroTol,
                                     const DiscordOptions& opts = {},
                                     double psd_tol = kPsdTol) {
  ClassificationResult res;
  res.entangled = is_entangled(rho, psd_tol);
  res.delta = discord_vector(rho, opts);
  if (res.entangled) {
    res.label = Label::Entangled;
  } else if (res.delta.max_component() > zero_tol) {
    res.label = Label::LocalQuantumnessOnly;
  } else {
    res.label = Label::ClassicalOrProduct;
  }
  return res;
}

}  // namespace qcorr
