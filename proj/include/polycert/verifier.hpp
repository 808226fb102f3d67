#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "polycert/quadratic.hpp"
#include "polycert/rational.hpp"

namespace polycert {

/// Candidate infeasibility certificate: one exact rational weight per
/// inequality of the system it refers to.
struct RationalCertificate {
  std::vector<mpq_class> y;
  std::string case_ref;
};

enum class WitnessKind { none, negative_entry, nonpositive_minor };

/// Result of exact verification. `verified` holds exactly when every weight
/// is nonnegative and the combined matrix is positive definite; together
/// these prove the weighted sum of the inequalities is strictly positive
/// everywhere, so the system has no real solution.
struct VerificationReport {
  bool nonnegativity_ok = false;
  bool pd_ok = false;
  bool verified = false;
  WitnessKind witness_kind = WitnessKind::none;
  int witness_index = 0;  // 1-based: offending y entry, or failing leading minor
};

/// Exact combination sum_i y_i Qhat_i of the augmented coefficient
/// matrices, assembled directly from the builder's rational coefficients.
inline RatMatrix combine_exact(const QuadraticSystem& sys, const std::vector<mpq_class>& y) {
  if (static_cast<int>(y.size()) != sys.m()) {
    throw std::invalid_argument("certificate length does not match the system");
  }
  RatMatrix m(sys.n + 1);
  const mpq_class half(1, 2);
  for (int i = 0; i < sys.m(); ++i) {
    const mpq_class& w = y[i];
    if (sgn(w) == 0) continue;
    const QuadraticInequality& q = sys.inequalities[i];
    if (sgn(q.a) != 0) m.at(0, 0) += w * q.a;
    for (int j = 0; j < sys.n; ++j) {
      if (sgn(q.b[j]) == 0) continue;
      mpq_class h = w * q.b[j] * half;
      m.at(0, j + 1) += h;
      m.at(j + 1, 0) += h;
    }
    for (int r = 0; r < sys.n; ++r) {
      for (int c = 0; c < sys.n; ++c) {
        const mpq_class& v = q.Q.at(r, c);
        if (sgn(v) != 0) m.at(r + 1, c + 1) += w * v;
      }
    }
  }
  return m;
}

struct PdResult {
  bool positive_definite = false;
  int witness_minor = 0;  // 1-based index of the first nonpositive leading minor
};

/// Sylvester's criterion decided exactly: all leading principal minors must
/// be strictly positive. Denominators are cleared once (multiplying by a
/// positive integer preserves the minor signs), then the minors are computed
/// by Bareiss fraction-free elimination in integer arithmetic; after step k
/// the pivot equals the (k+1)-st leading minor, so the first nonpositive
/// pivot identifies the failing minor.
inline PdResult is_positive_definite_exact(const RatMatrix& m) {
  const int n = m.size();
  if (!m.is_symmetric()) throw std::invalid_argument("matrix is not symmetric");
  if (n == 0) return {true, 0};

  mpz_class lcm = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
    }
  }
  std::vector<mpz_class> w(static_cast<std::size_t>(n) * n);
  auto at = [&w, n](int i, int j) -> mpz_class& { return w[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const mpq_class& e = m.at(i, j);
      at(i, j) = e.get_num() * (lcm / e.get_den());
    }
  }

  mpz_class prev = 1;
  mpz_class tmp;
  for (int k = 0; k < n; ++k) {
    if (at(k, k) <= 0) return {false, k + 1};
    for (int i = k + 1; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        tmp = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
        if (j != i) at(j, i) = at(i, j);
      }
    }
    prev = at(k, k);
  }
  return {true, 0};
}

/// Exact certificate check: every weight nonnegative and the combined
/// matrix positive definite. A verified report is a rigorous proof that the
/// system has no real solution.
inline VerificationReport verify(const QuadraticSystem& sys, const RationalCertificate& cert) {
  if (static_cast<int>(cert.y.size()) != sys.m()) {
    throw std::invalid_argument("certificate length does not match the system");
  }
  VerificationReport rep;
  rep.nonnegativity_ok = true;
  for (std::size_t i = 0; i < cert.y.size(); ++i) {
    if (sgn(cert.y[i]) < 0) {
      rep.nonnegativity_ok = false;
      rep.witness_kind = WitnessKind::negative_entry;
      rep.witness_index = static_cast<int>(i) + 1;
      break;
    }
  }
  const PdResult pd = is_positive_definite_exact(combine_exact(sys, cert.y));
  rep.pd_ok = pd.positive_definite;
  if (!rep.pd_ok && rep.witness_kind == WitnessKind::none) {
    rep.witness_kind = WitnessKind::nonpositive_minor;
    rep.witness_index = pd.witness_minor;
  }
  rep.verified = rep.nonnegativity_ok && rep.pd_ok;
  return rep;
}

}  // namespace polycert
