#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace qcorr {

struct SimplexResult {
  std::array<double, 2> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Two-dimensional Nelder-Mead downhill simplex. Unconstrained; callers
/// minimize periodic functions, so no bounds handling is needed.
/// Terminates when the value spread across the simplex drops below ftol
/// or after max_iters iterations.
template <class F>
inline SimplexResult nelder_mead_2d(F&& f, std::array<double, 2> start, double step,
                                    int max_iters, double ftol) {
  constexpr double kAlpha = 1.0;  // reflection
  constexpr double kGamma = 2.0;  // expansion
  constexpr double kBeta = 0.5;   // contraction
  constexpr double kDelta = 0.5;  // shrink

  std::array<std::array<double, 2>, 3> x{start,
                                         {start[0] + step, start[1]},
                                         {start[0], start[1] + step}};
  std::array<double, 3> fx{f(x[0][0], x[0][1]), f(x[1][0], x[1][1]), f(x[2][0], x[2][1])};

  auto order = [&] {
    // ties broken by coordinates so the result is reproducible
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (fx[a] != fx[b]) return fx[a] < fx[b];
      if (x[a][0] != x[b][0]) return x[a][0] < x[b][0];
      return x[a][1] < x[b][1];
    });
    const std::array<std::array<double, 2>, 3> xs{x[idx[0]], x[idx[1]], x[idx[2]]};
    const std::array<double, 3> fs{fx[idx[0]], fx[idx[1]], fx[idx[2]]};
    x = xs;
    fx = fs;
  };

  SimplexResult res;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    order();
    if (std::abs(fx[2] - fx[0]) < ftol) {
      res.converged = true;
      break;
    }

    const std::array<double, 2> centroid{(x[0][0] + x[1][0]) / 2.0,
                                         (x[0][1] + x[1][1]) / 2.0};
    auto point = [&](double scale) {
      return std::array<double, 2>{centroid[0] + scale * (centroid[0] - x[2][0]),
                                   centroid[1] + scale * (centroid[1] - x[2][1])};
    };

    const std::array<double, 2> xr = point(kAlpha);
    const double fr = f(xr[0], xr[1]);
    if (fr < fx[0]) {
      const std::array<double, 2> xe = point(kAlpha * kGamma);
      const double fe = f(xe[0], xe[1]);
      if (fe < fr) {
        x[2] = xe;
        fx[2] = fe;
      } else {
        x[2] = xr;
        fx[2] = fr;
      }
    } else if (fr < fx[1]) {
      x[2] = xr;
      fx[2] = fr;
    } else {
      const bool outside = fr < fx[2];
      const std::array<double, 2> xc = outside ? point(kAlpha * kBeta) : point(-kBeta);
      const double fc = f(xc[0], xc[1]);
      if (fc < (outside ? fr : fx[2])) {
        x[2] = xc;
        fx[2] = fc;
      } else {
        for (int j = 1; j < 3; ++j) {
          x[j][0] = x[0][0] + kDelta * (x[j][0] - x[0][0]);
          x[j][1] = x[0][1] + kDelta * (x[j][1] - x[0][1]);
          fx[j] = f(x[j][0], x[j][1]);
        }
      }
    }
  }

  order();
  res.x = x[0];
  res.value = fx[0];
  res.iterations = iter;
  return res;
}

}  // namespace qcorr
