#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sphstat/error.hpp"

namespace sphstat {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

inline Vec scaled(Vec v, double s) {
  for (double& x : v) x *= s;
  return v;
}

inline Vec subtract(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// y = M x for row-major q x q matrix.
inline Vec matvec(const Vec& m, const Vec& x, int q) {
  Vec y(static_cast<std::size_t>(q), 0.0);
  for (int i = 0; i < q; ++i) {
    double s = 0.0;
    for (int j = 0; j < q; ++j) s += m[static_cast<std::size_t>(i) * q + j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

struct SymmetricEigen {
  Vec values;                // descending
  std::vector<Vec> vectors;  // vectors[k] is the unit eigenvector of values[k]
};

/// Cyclic Jacobi eigensolver for small symmetric matrices, fixed sweep order.
/// Rotations are applied until the off-diagonal mass is at machine level, so
/// eigenpair residuals land near 1e-15 * scale.
inline SymmetricEigen jacobi_eigensolve(const Vec& matrix, int q) {
  const std::size_t qu = static_cast<std::size_t>(q);
  if (matrix.size() != qu * qu) fail(errc::dimension_mismatch, "matrix is not q x q");
  Vec a(qu * qu);
  for (std::size_t i = 0; i < qu; ++i)
    for (std::size_t j = 0; j < qu; ++j)
      a[i * qu + j] = 0.5 * (matrix[i * qu + j] + matrix[j * qu + i]);
  Vec v(qu * qu, 0.0);
  for (std::size_t i = 0; i < qu; ++i) v[i * qu + i] = 1.0;

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double off_tol = 1e-15 * std::max(1.0, scale);

  bool converged = false;
  for (int sweep = 0; sweep < 64 && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < qu; ++p)
      for (std::size_t r = p + 1; r < qu; ++r) off += a[p * qu + r] * a[p * qu + r];
    if (std::sqrt(off) <= off_tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < qu; ++p) {
      for (std::size_t r = p + 1; r < qu; ++r) {
        const double apr = a[p * qu + r];
        if (apr == 0.0) continue;
        const double theta = (a[r * qu + r] - a[p * qu + p]) / (2.0 * apr);
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < qu; ++k) {
          const double akp = a[k * qu + p];
          const double akr = a[k * qu + r];
          a[k * qu + p] = c * akp - s * akr;
          a[k * qu + r] = s * akp + c * akr;
        }
        for (std::size_t k = 0; k < qu; ++k) {
          const double apk = a[p * qu + k];
          const double ark = a[r * qu + k];
          a[p * qu + k] = c * apk - s * ark;
          a[r * qu + k] = s * apk + c * ark;
        }
        for (std::size_t k = 0; k < qu; ++k) {
          const double vkp = v[k * qu + p];
          const double vkr = v[k * qu + r];
          v[k * qu + p] = c * vkp - s * vkr;
          v[k * qu + r] = s * vkp + c * vkr;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < qu; ++p)
      for (std::size_t r = p + 1; r < qu; ++r) off += a[p * qu + r] * a[p * qu + r];
    if (std::sqrt(off) > 1e-9 * std::max(1.0, scale))
      fail(errc::numeric_failure, "jacobi sweep limit reached before convergence");
  }

  std::vector<int> order(qu);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x) * qu + x] > a[static_cast<std::size_t>(y) * qu + y];
  });

  SymmetricEigen result;
  result.values.resize(qu);
  result.vectors.resize(qu);
  for (std::size_t k = 0; k < qu; ++k) {
    const std::size_t col = static_cast<std::size_t>(order[k]);
    result.values[k] = a[col * qu + col];
    Vec e(qu);
    for (std::size_t i = 0; i < qu; ++i) e[i] = v[i * qu + col];
    result.vectors[k] = std::move(e);
  }
  return result;
}

}  // namespace sphstat
