#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace polycert {

/// Dense symmetric matrix of doubles, row-major.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;

  explicit SymMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Cyclic Jacobi diagonalization, in place. `a` (n x n, row-major) is
/// overwritten with a nearly diagonal matrix, `v` with the accumulated
/// rotations (columns are eigenvectors). Sweeps run in a fixed row-major
/// order until the off-diagonal Frobenius norm drops below tol * ||A||_F.
/// Returns the number of sweeps performed.
inline int jacobi_inplace(double* a, double* v, int n, double tol = 1e-12,
                          int max_sweeps = 64) {
  auto A = [a, n](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto V = [v, n](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) V(i, j) = (i == j) ? 1.0 : 0.0;
  }
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) norm2 += A(i, j) * A(i, j);
  }
  if (norm2 == 0.0) return 0;
  const double off_limit2 = tol * tol * norm2;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off2 = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off2 += 2.0 * A(p, q) * A(p, q);
    }
    if (off2 <= off_limit2) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = A(r, p), arq = A(r, q);
            A(r, p) = arp - s * (arq + tau * arp);
            A(p, r) = A(r, p);
            A(r, q) = arq + s * (arp - tau * arq);
            A(q, r) = A(r, q);
          }
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = vrp - s * (vrq + tau * vrp);
          V(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  return sweep;
}

struct MinEigen {
  double value = 0.0;
  std::vector<double> vector;
};

/// Smallest eigenvalue and a unit eigenvector of a symmetric matrix.
/// Rejects non-symmetric input and matrices larger than 64 x 64.
inline MinEigen min_eigenvalue(const SymMatrix& m, double tol = 1e-12) {
  const int n = m.n;
  if (n < 1) throw std::invalid_argument("empty matrix");
  if (n > 64) throw std::invalid_argument("matrix too large for the Jacobi eigensolver");
  double scale = 0.0;
  for (double x : m.a) scale = std::max(scale, std::abs(x));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("matrix is not symmetric");
      }
    }
  }
  std::vector<double> a(m.a);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  jacobi_inplace(a.data(), v.data(), n, tol);
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (a[static_cast<std::size_t>(i) * n + i] < a[static_cast<std::size_t>(best) * n + best]) {
      best = i;
    }
  }
  MinEigen out;
  out.value = a[static_cast<std::size_t>(best) * n + best];
  out.vector.resize(n);
  for (int i = 0; i < n; ++i) out.vector[i] = v[static_cast<std::size_t>(i) * n + best];
  return out;
}

}  // namespace polycert
