#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polycert {

/// Parses the "p/q" wire format into an exact rational. A plain integer
/// "p" is read as p/1. Throws std::invalid_argument on anything else,
/// including a zero denominator.
inline mpq_class parse_rational(const std::string& text) {
  auto is_integer = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer(num) || !is_integer(den)) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) {
    throw std::invalid_argument("zero denominator in rational '" + text + "'");
  }
  q.canonicalize();
  return q;
}

/// Canonical "p/q" form with the denominator always spelled out ("0/1", "3/1").
inline std::string format_rational(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Dense square matrix of exact rationals, row-major.
class RatMatrix {
 public:
  explicit RatMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}

  int size() const { return n_; }

  mpq_class& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const mpq_class& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        if (at(i, j) != at(j, i)) return false;
      }
    }
    return true;
  }

  bool operator==(const RatMatrix& other) const {
    return n_ == other.n_ && a_ == other.a_;
  }

 private:
  int n_;
  std::vector<mpq_class> a_;
};

}  // namespace polycert
