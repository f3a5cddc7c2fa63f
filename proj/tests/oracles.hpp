#pragma once

// Reference computations for the tests. Nothing here calls into the library,
// so a bug there cannot hide by agreeing with itself.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using cvec = std::vector<mpq_class>;

inline void trim(cvec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline cvec mul(const cvec& a, const cvec& b) {
  if (a.empty() || b.empty()) return {};
  cvec r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline cvec add(cvec a, const cvec& b) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

/// [n]_q as a coefficient list: n ones.
inline cvec q_int(int n) { return cvec(static_cast<std::size_t>(n), mpq_class(1)); }

inline cvec q_factorial(int n) {
  cvec r{mpq_class(1)};
  for (int k = 1; k <= n; ++k) r = mul(r, q_int(k));
  return r;
}

inline double q_int(int n, double q) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::pow(q, j);
  return s;
}

inline double q_factorial(int n, double q) {
  double p = 1.0;
  for (int k = 1; k <= n; ++k) p *= q_int(k, q);
  return p;
}

/**
 * Parses the way polynomials are typeset in the printed table: terms such as
 * "q^5", "2q^4", "3q", "1" joined by '+' with optional spaces, in any order.
 */
inline cvec parse_table_poly(const std::string& s) {
  cvec r;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  while (true) {
    skip();
    long coeff = 1;
    bool has_digits = false;
    long digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = digits * 10 + (s[i] - '0');
      has_digits = true;
      ++i;
    }
    if (has_digits) coeff = digits;
    std::size_t power = 0;
    if (i < s.size() && s[i] == 'q') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        power = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) power = power * 10 + static_cast<std::size_t>(s[i++] - '0');
      }
    } else if (!has_digits) {
      throw std::invalid_argument("bad term in " + s);
    }
    if (r.size() <= power) r.resize(power + 1, mpq_class(0));
    r[power] += coeff;
    skip();
    if (i >= s.size()) break;
    if (s[i] != '+') throw std::invalid_argument("expected '+' in " + s);
    ++i;
  }
  trim(r);
  return r;
}

/// Stirling numbers of the second kind.
inline long stirling2(int n, int k) {
  std::vector<std::vector<long>> t(static_cast<std::size_t>(n) + 1, std::vector<long>(static_cast<std::size_t>(n) + 1, 0));
  t[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) t[i][j] = j * t[i - 1][j] + t[i - 1][j - 1];
  return k <= n ? t[n][k] : 0;
}

/// q-Stirling row from the defining expansion evaluated at q: on z^m,
/// (M_z R_q)^n has eigenvalue [m]^n while M_z^k R_q^k has the falling product
/// [m][m-1]...[m-k+1]. Solving the triangular system gives S(n, .) at q.
inline std::vector<double> q_stirling_row(int n, double q) {
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int m = 1; m <= n; ++m) {
    double lhs = std::pow(q_int(m, q), n);
    auto falling = [&](int k) {
      double p = 1.0;
      for (int j = 0; j < k; ++j) p *= q_int(m - j, q);
      return p;
    };
    for (int k = 1; k < m; ++k) lhs -= s[static_cast<std::size_t>(k - 1)] * falling(k);
    s[static_cast<std::size_t>(m - 1)] = lhs / falling(m);
  }
  return s;
}

/// E_q(z) by a fixed number of series terms, no stopping rule.
inline std::complex<long double> eq_series_fixed(std::complex<long double> z, long double q, int terms) {
  std::complex<long double> sum = 0.0L, t = 1.0L;
  long double qi = 0.0L;
  for (int k = 0; k < terms; ++k) {
    sum += t;
    qi = 1.0L + q * qi;
    t *= z / qi;
  }
  return sum;
}

/// (a; q)_inf by a fixed number of factors.
inline long double pochhammer_fixed(long double a, long double q, int factors) {
  long double p = 1.0L, qj = 1.0L;
  for (int j = 0; j < factors; ++j) {
    p *= 1.0L - a * qj;
    qj *= q;
  }
  return p;
}

/// Jackson derivative by the divided difference on a callable.
template <class F>
std::complex<double> jackson_difference(F&& f, std::complex<double> z, double q) {
  return (f(z) - f(q * z)) / ((1.0 - q) * z);
}

/// Horner evaluation of a coefficient list (ascending).
inline std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> z) {
  std::complex<double> r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

} // namespace oracle
