#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "polycert/jacobi.hpp"
#include "polycert/quadratic.hpp"

namespace polycert {

/// Floating copy of one augmented coefficient matrix, stored as the nonzero
/// entries of its upper triangle (diagonal included).
struct SymTriplets {
  struct Entry {
    int r;
    int c;
    double v;
  };
  std::vector<Entry> entries;
};

/// The certificate search problem for one case: maximize z subject to
/// sum_i y_i M_i >= z I, ||y|| <= 1 and y_i >= z.
struct SdpProblem {
  int dim = 0;  // n + 1
  std::vector<SymTriplets> matrices;

  static SdpProblem from_system(const QuadraticSystem& sys) {
    SdpProblem p;
    p.dim = sys.n + 1;
    for (const auto& q : sys.inequalities) {
      SymTriplets t;
      const double a = q.a.get_d();
      if (a != 0.0) t.entries.push_back({0, 0, a});
      for (int j = 0; j < q.n; ++j) {
        const double bj = q.b[j].get_d();
        if (bj != 0.0) t.entries.push_back({0, j + 1, bj / 2.0});
      }
      for (int i = 0; i < q.n; ++i) {
        for (int j = i; j < q.n; ++j) {
          const double v = q.Q.at(i, j).get_d();
          if (v != 0.0) t.entries.push_back({i + 1, j + 1, v});
        }
      }
      p.matrices.push_back(std::move(t));
    }
    return p;
  }
};

enum class SolveStatus { positive, zero, failed };

struct SdpOptions {
  double z_threshold = 1e-3;  // minimum z accepted as a certificate candidate
  int max_iters = 5000;       // Newton-step budget
  double target_z = std::numeric_limits<double>::infinity();  // early stop once reached
  double gap_tol = 1e-4;      // barrier suboptimality bound at which to stop
};

struct FloatCertificate {
  double z = 0.0;
  std::vector<double> y;
  int iterations = 0;
  SolveStatus status = SolveStatus::failed;
};

/// Dense floating combination sum_i y_i M_i.
inline SymMatrix combine_float(const SdpProblem& p, const std::vector<double>& y) {
  if (y.size() != p.matrices.size()) throw std::invalid_argument("weight vector has wrong length");
  SymMatrix m(p.dim);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (const auto& e : p.matrices[i].entries) {
      m.at(e.r, e.c) += y[i] * e.v;
      if (e.r != e.c) m.at(e.c, e.r) += y[i] * e.v;
    }
  }
  return m;
}

namespace detail {

// Cholesky A = L L'. Returns false unless A is positive definite.
inline bool cholesky(const std::vector<double>& a, int n, std::vector<double>& L) {
  L = a;
  for (int j = 0; j < n; ++j) {
    double d = L[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double ljk = L[static_cast<std::size_t>(j) * n + k];
      d -= ljk * ljk;
    }
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    d = std::sqrt(d);
    L[static_cast<std::size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = L[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        s -= L[static_cast<std::size_t>(i) * n + k] * L[static_cast<std::size_t>(j) * n + k];
      }
      L[static_cast<std::size_t>(i) * n + j] = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) L[static_cast<std::size_t>(i) * n + j] = 0.0;
  }
  return true;
}

// S = (L L')^{-1} from the Cholesky factor: invert L, then S = K' K.
inline void cholesky_inverse(const std::vector<double>& L, int n, std::vector<double>& S) {
  std::vector<double> K(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    K[static_cast<std::size_t>(j) * n + j] = 1.0 / L[static_cast<std::size_t>(j) * n + j];
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) {
        s += L[static_cast<std::size_t>(i) * n + k] * K[static_cast<std::size_t>(k) * n + j];
      }
      K[static_cast<std::size_t>(i) * n + j] = -s / L[static_cast<std::size_t>(i) * n + i];
    }
  }
  S.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = j; k < n; ++k) {  // K is lower triangular
        s += K[static_cast<std::size_t>(k) * n + i] * K[static_cast<std::size_t>(k) * n + j];
      }
      S[static_cast<std::size_t>(i) * n + j] = s;
      S[static_cast<std::size_t>(j) * n + i] = s;
    }
  }
}

// Solves the small SPD Newton system in place; returns false when singular
// beyond repair by the caller's ridge.
inline bool solve_spd(std::vector<double> H, std::vector<double> rhs, int n,
                      std::vector<double>& x) {
  std::vector<double> L;
  if (!cholesky(H, n, L)) return false;
  // forward then backward substitution
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= L[static_cast<std::size_t>(i) * n + k] * rhs[k];
    rhs[i] = s / L[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int k = i + 1; k < n; ++k) s -= L[static_cast<std::size_t>(k) * n + i] * rhs[k];
    rhs[i] = s / L[static_cast<std::size_t>(i) * n + i];
  }
  x = std::move(rhs);
  return true;
}

}  // namespace detail

/// Computes a feasible point of the certificate program by log-barrier path
/// following: for increasing t, damped Newton steps minimize
///
///   -t z - log det(M(y) - z I) - log(1 - y'y) - sum_i log(y_i - z)
///
/// over (y, z). Every iterate is strictly feasible, so the path value z is
/// a valid objective value at y and grows toward the optimum; the run stops
/// once the barrier suboptimality bound nu/t falls below gap_tol (or
/// target_z / the Newton budget is hit). Deterministic: fixed initial point
/// derived from y = (1,...,1)/sqrt(m), no randomness.
///
/// Status: positive when the achieved z >= z_threshold; zero when nothing
/// strictly positive was found; failed when a positive value stayed below
/// the threshold or post-hoc validation of the certificate invariants
/// (checked with the Jacobi eigensolver) fails.
inline FloatCertificate solve_certificate_sdp(const SdpProblem& p, const SdpOptions& opts = {}) {
  const int m = static_cast<int>(p.matrices.size());
  if (m < 1) throw std::invalid_argument("certificate problem needs at least one inequality");
  const int N = p.dim;
  const int dim = m + 1;  // unknowns: y_1..y_m, z
  const double nu = N + m + 1;  // barrier parameter: log det + ball + linear terms

  std::vector<double> y(m, 0.5 / std::sqrt(static_cast<double>(m)));
  double z;
  {
    const MinEigen me = min_eigenvalue(combine_float(p, y), 1e-10);
    z = std::min(me.value, y[0]) - 0.5;
  }

  std::vector<double> M(static_cast<std::size_t>(N) * N);
  std::vector<double> L, S, S2;
  std::vector<double> tSQ(m), tS2Q(m);
  std::vector<double> P(static_cast<std::size_t>(m) * N * N);
  std::vector<double> grad(dim), H(static_cast<std::size_t>(dim) * dim), step(dim);

  auto build_M = [&](const std::vector<double>& yy, double zz) {
    std::fill(M.begin(), M.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      if (yy[i] == 0.0) continue;
      for (const auto& e : p.matrices[i].entries) {
        M[static_cast<std::size_t>(e.r) * N + e.c] += yy[i] * e.v;
        if (e.r != e.c) M[static_cast<std::size_t>(e.c) * N + e.r] += yy[i] * e.v;
      }
    }
    for (int i = 0; i < N; ++i) M[static_cast<std::size_t>(i) * N + i] -= zz;
  };

  // Barrier value; +inf when (yy, zz) is not strictly feasible.
  auto barrier_value = [&](const std::vector<double>& yy, double zz, double t) {
    double s = 0.0;
    for (double w : yy) s += w * w;
    if (s >= 1.0) return std::numeric_limits<double>::infinity();
    double val = -t * zz - std::log(1.0 - s);
    for (double w : yy) {
      if (w - zz <= 0.0) return std::numeric_limits<double>::infinity();
      val -= std::log(w - zz);
    }
    build_M(yy, zz);
    if (!detail::cholesky(M, N, L)) return std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) val -= 2.0 * std::log(L[static_cast<std::size_t>(i) * N + i]);
    return val;
  };

  double z_best = -std::numeric_limits<double>::infinity();
  std::vector<double> y_best = y;
  int newton_steps = 0;
  double t = 25.0;
  bool budget_left = true;

  while (budget_left) {
    for (int inner = 0; inner < 50 && budget_left; ++inner) {
      if (++newton_steps > opts.max_iters) {
        budget_left = false;
        break;
      }
      build_M(y, z);
      if (!detail::cholesky(M, N, L)) break;  // cannot happen from a feasible iterate
      detail::cholesky_inverse(L, N, S);

      S2.assign(static_cast<std::size_t>(N) * N, 0.0);
      for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
          double acc = 0.0;
          for (int k = 0; k < N; ++k) {
            acc += S[static_cast<std::size_t>(i) * N + k] * S[static_cast<std::size_t>(k) * N + j];
          }
          S2[static_cast<std::size_t>(i) * N + j] = acc;
          S2[static_cast<std::size_t>(j) * N + i] = acc;
        }
      }
      double trS = 0.0, trS2 = 0.0;
      for (int i = 0; i < N; ++i) {
        trS += S[static_cast<std::size_t>(i) * N + i];
        trS2 += S2[static_cast<std::size_t>(i) * N + i];
      }
      for (int i = 0; i < m; ++i) {
        double a1 = 0.0, a2 = 0.0;
        for (const auto& e : p.matrices[i].entries) {
          const double f = (e.r == e.c) ? 1.0 : 2.0;
          a1 += f * e.v * S[static_cast<std::size_t>(e.r) * N + e.c];
          a2 += f * e.v * S2[static_cast<std::size_t>(e.r) * N + e.c];
        }
        tSQ[i] = a1;
        tS2Q[i] = a2;
        // P_i = S (M_i S), with M_i applied as sparse row updates
        double* Pi = P.data() + static_cast<std::size_t>(i) * N * N;
        std::vector<double> U(static_cast<std::size_t>(N) * N, 0.0);
        for (const auto& e : p.matrices[i].entries) {
          for (int c = 0; c < N; ++c) {
            U[static_cast<std::size_t>(e.r) * N + c] += e.v * S[static_cast<std::size_t>(e.c) * N + c];
          }
          if (e.r != e.c) {
            for (int c = 0; c < N; ++c) {
              U[static_cast<std::size_t>(e.c) * N + c] += e.v * S[static_cast<std::size_t>(e.r) * N + c];
            }
          }
        }
        for (int r = 0; r < N; ++r) {
          for (int c = 0; c < N; ++c) {
            double acc = 0.0;
            for (int k = 0; k < N; ++k) {
              acc += S[static_cast<std::size_t>(r) * N + k] * U[static_cast<std::size_t>(k) * N + c];
            }
            Pi[static_cast<std::size_t>(r) * N + c] = acc;
          }
        }
      }

      double ball = 0.0;
      for (double w : y) ball += w * w;
      const double ball_rem = 1.0 - ball;

      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(H.begin(), H.end(), 0.0);
      double lin_sum = 0.0, lin_sq_sum = 0.0;
      for (int i = 0; i < m; ++i) {
        const double gap = y[i] - z;
        const double inv = 1.0 / gap;
        const double inv2 = inv * inv;
        lin_sum += inv;
        lin_sq_sum += inv2;
        grad[i] = -tSQ[i] + 2.0 * y[i] / ball_rem - inv;
        H[static_cast<std::size_t>(i) * dim + i] += inv2;
        H[static_cast<std::size_t>(i) * dim + m] += -inv2;
        H[static_cast<std::size_t>(m) * dim + i] += -inv2;
      }
      grad[m] = -t + trS + lin_sum;
      for (int i = 0; i < m; ++i) {
        const double* Pi = P.data() + static_cast<std::size_t>(i) * N * N;
        for (int j = i; j < m; ++j) {
          double acc = 0.0;
          for (const auto& e : p.matrices[j].entries) {
            const double f = (e.r == e.c) ? 1.0 : 2.0;
            acc += f * e.v * Pi[static_cast<std::size_t>(e.r) * N + e.c];
          }
          H[static_cast<std::size_t>(i) * dim + j] += acc;
          if (i != j) H[static_cast<std::size_t>(j) * dim + i] += acc;
        }
        H[static_cast<std::size_t>(i) * dim + m] += -tS2Q[i];
        H[static_cast<std::size_t>(m) * dim + i] += -tS2Q[i];
        for (int j = 0; j < m; ++j) {
          H[static_cast<std::size_t>(i) * dim + j] +=
              4.0 * y[i] * y[j] / (ball_rem * ball_rem) + (i == j ? 2.0 / ball_rem : 0.0);
        }
      }
      H[static_cast<std::size_t>(m) * dim + m] += trS2 + lin_sq_sum;

      double ridge = 0.0;
      for (int i = 0; i < dim; ++i) ridge += H[static_cast<std::size_t>(i) * dim + i];
      ridge = 1e-12 * ridge / dim;
      bool solved = false;
      for (int attempt = 0; attempt < 6 && !solved; ++attempt) {
        std::vector<double> Hr = H;
        for (int i = 0; i < dim; ++i) Hr[static_cast<std::size_t>(i) * dim + i] += ridge;
        std::vector<double> rhs(dim);
        for (int i = 0; i < dim; ++i) rhs[i] = -grad[i];
        solved = detail::solve_spd(std::move(Hr), std::move(rhs), dim, step);
        ridge = ridge == 0.0 ? 1e-12 : ridge * 100.0;
      }
      if (!solved) {
        budget_left = false;
        break;
      }

      double descent = 0.0;
      for (int i = 0; i < dim; ++i) descent += grad[i] * step[i];
      const double decrement = std::sqrt(std::max(0.0, -descent));

      const double base = barrier_value(y, z, t);
      double alpha = 1.0;
      bool moved = false;
      for (int probe = 0; probe < 60; ++probe) {
        std::vector<double> y_try(y);
        for (int i = 0; i < m; ++i) y_try[i] += alpha * step[i];
        const double z_try = z + alpha * step[m];
        const double val = barrier_value(y_try, z_try, t);
        if (val <= base + 0.01 * alpha * descent) {
          y = std::move(y_try);
          z = z_try;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (z > z_best) {
        z_best = z;
        y_best = y;
      }
      if (!moved || decrement <= 0.25) break;
    }
    if (z_best >= opts.target_z) break;
    if (nu / t < opts.gap_tol * std::max(1.0, std::abs(z_best))) break;
    if (!budget_left) break;
    t *= 3.0;
  }

  FloatCertificate out;
  out.iterations = newton_steps;
  if (!(z_best > 0.0)) {
    // (z, y) = (0, 0) is always feasible; nothing positive was found.
    out.z = 0.0;
    out.y.assign(m, 0.0);
    out.status = SolveStatus::zero;
    return out;
  }

  // Tight re-evaluation of the candidate, then post-hoc validation of the
  // certificate invariants with the eigensolver.
  const MinEigen tight = min_eigenvalue(combine_float(p, y_best), 1e-12);
  double ymin = y_best[0];
  double norm2 = 0.0;
  for (double w : y_best) {
    ymin = std::min(ymin, w);
    norm2 += w * w;
  }
  const double z_final = std::min(tight.value, ymin);
  out.y = y_best;
  out.z = std::max(z_final, 0.0);
  const bool valid = norm2 <= (1.0 + 1e-9) * (1.0 + 1e-9) && ymin >= out.z - 1e-9 &&
                     tight.value >= out.z - 1e-6;
  if (!valid) {
    out.status = SolveStatus::failed;
    return out;
  }
  if (out.z >= opts.z_threshold) {
    out.status = SolveStatus::positive;
  } else if (out.z > 0.0) {
    out.status = SolveStatus::failed;
  } else {
    out.status = SolveStatus::zero;
  }
  return out;
}

/// Best rational approximation of x with denominator at most max_den, by
/// the continued-fraction convergent/semiconvergent rule. Exact: both the
/// input and the error comparisons are handled in rational arithmetic.
inline mpq_class best_rational_approx(const mpq_class& x, const mpz_class& max_den) {
  if (max_den < 1) throw std::invalid_argument("max denominator must be at least 1");
  if (x.get_den() <= max_den) return x;
  if (sgn(x) < 0) {
    mpq_class neg = -x;
    return -best_rational_approx(neg, max_den);
  }
  mpz_class P = x.get_num(), Q = x.get_den();
  mpz_class hp = 1, kp = 0;  // convergent j-2
  mpz_class a = P / Q;
  mpz_class r = P - a * Q;
  mpz_class hc = a, kc = 1;  // convergent j-1
  P = Q;
  Q = r;
  while (Q != 0) {
    a = P / Q;
    r = P - a * Q;
    mpz_class hn = a * hc + hp;
    mpz_class kn = a * kc + kp;
    if (kn > max_den) {
      mpq_class prev(hc, kc);
      prev.canonicalize();
      mpz_class t = (max_den - kp) / kc;
      if (t <= 0) return prev;
      mpq_class semi(t * hc + hp, t * kc + kp);
      semi.canonicalize();
      mpq_class err_prev = abs(mpq_class(x - prev));
      mpq_class err_semi = abs(mpq_class(x - semi));
      return err_semi < err_prev ? semi : prev;
    }
    hp = hc;
    kp = kc;
    hc = hn;
    kc = kn;
    P = Q;
    Q = r;
  }
  mpq_class exact(hc, kc);
  exact.canonicalize();
  return exact;
}

struct RationalizeOptions {
  long max_den = 1000000;
};

/// Converts a positive floating certificate into exact rational weights:
/// each entry is replaced by its best rational approximation with bounded
/// denominator, then clamped to be nonnegative.
inline std::vector<mpq_class> rationalize(const FloatCertificate& c,
                                          const RationalizeOptions& opts = {}) {
  if (c.status != SolveStatus::positive) {
    throw std::invalid_argument("only positive certificates can be rationalized");
  }
  const mpz_class max_den(opts.max_den);
  std::vector<mpq_class> out;
  out.reserve(c.y.size());
  for (double w : c.y) {
    mpq_class exact(w);  // binary-exact conversion
    mpq_class approx = best_rational_approx(exact, max_den);
    if (sgn(approx) < 0) approx = 0;
    out.push_back(std::move(approx));
  }
  return out;
}

}  // namespace polycert
