#include "crowdgame/fraction_free.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crowdgame {

namespace {

struct Overflow {};

// 128-bit integer that throws Overflow instead of wrapping.
struct Checked128 {
  __int128 v = 0;

  Checked128() = default;
  Checked128(__int128 x) : v(x) {}

  friend Checked128 operator*(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  friend Checked128 operator+(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  friend Checked128 operator-(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Overflow{};
    return r;
  }
  Checked128 operator-() const {
    if (v == std::numeric_limits<__int128>::min()) throw Overflow{};
    return -v;
  }
  friend bool operator==(Checked128 a, Checked128 b) { return a.v == b.v; }
  friend bool operator<(Checked128 a, Checked128 b) { return a.v < b.v; }
};

bool is_zero(const Checked128& x) { return x.v == 0; }
bool is_zero(const mpz_class& x) { return x == 0; }
bool is_negative(const Checked128& x) { return x.v < 0; }
bool is_negative(const mpz_class& x) { return x < 0; }

bool divides_exactly(const Checked128& num, const Checked128& den, Checked128& quot) {
  if (den.v == -1) {
    quot = -num;
    return true;
  }
  if (num.v % den.v != 0) return false;
  quot = num.v / den.v;
  return true;
}

bool divides_exactly(const mpz_class& num, const mpz_class& den, mpz_class& quot) {
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) return false;
  mpz_divexact(quot.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return true;
}

mpz_class to_mpz(const mpz_class& x) { return x; }

mpz_class to_mpz(const Checked128& x) {
  const bool neg = x.v < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(x.v) : static_cast<unsigned __int128>(x.v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

template <class Int>
using Poly = std::vector<Int>;

template <class Int>
void trim(Poly<Int>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

// a*b - c*d
template <class Int>
Poly<Int> cross(const Poly<Int>& a, const Poly<Int>& b, const Poly<Int>& c, const Poly<Int>& d) {
  std::size_t n = 0;
  if (!a.empty() && !b.empty()) n = a.size() + b.size() - 1;
  if (!c.empty() && !d.empty()) n = std::max(n, c.size() + d.size() - 1);
  Poly<Int> out(n, Int(0));
  if (!a.empty() && !b.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    }
  }
  if (!c.empty() && !d.empty()) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (is_zero(c[i])) continue;
      for (std::size_t j = 0; j < d.size(); ++j) out[i + j] = out[i + j] - c[i] * d[j];
    }
  }
  trim(out);
  return out;
}

template <class Int>
Poly<Int> exact_divide(Poly<Int> num, const Poly<Int>& den) {
  if (den.empty()) throw std::logic_error("division by zero polynomial");
  if (num.empty()) return num;
  if (den.size() == 1 && den[0] == Int(1)) return num;
  if (num.size() < den.size()) throw std::logic_error("inexact polynomial division");
  const std::size_t dq = num.size() - den.size();
  Poly<Int> quot(dq + 1, Int(0));
  const Int& lead = den.back();
  for (std::size_t k = dq + 1; k-- > 0;) {
    const Int& top = num[k + den.size() - 1];
    if (is_zero(top)) continue;
    Int q;
    if (!divides_exactly(top, lead, q)) throw std::logic_error("inexact polynomial division");
    quot[k] = q;
    for (std::size_t j = 0; j < den.size(); ++j) num[k + j] = num[k + j] - q * den[j];
  }
  for (const auto& r : num) {
    if (!is_zero(r)) throw std::logic_error("inexact polynomial division");
  }
  trim(quot);
  return quot;
}

template <class Int>
StationaryWeights gauss_jordan(std::vector<std::vector<Poly<Int>>> m) {
  const std::size_t n = m.size();
  Poly<Int> prev{Int(1)};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t r = k; r < n; ++r) {
      if (m[r][k].empty()) continue;
      if (pivot == n || m[r][k].size() < m[pivot][k].size()) pivot = r;
    }
    if (pivot == n) throw std::runtime_error("stationary system singular for all eps");
    if (pivot != k) std::swap(m[pivot], m[k]);
    const Poly<Int>& pkk = m[k][k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Poly<Int> pik = m[i][k];
      for (std::size_t j = k + 1; j <= n; ++j) {
        m[i][j] = exact_divide(cross(pkk, m[i][j], pik, m[k][j]), prev);
      }
      m[i][k].clear();
    }
    prev = m[k][k];
  }

  StationaryWeights out;
  const auto lowest = std::find_if(prev.begin(), prev.end(), [](const Int& x) { return !is_zero(x); });
  const bool flip = is_negative(*lowest);
  auto convert = [flip](const Poly<Int>& p) {
    std::vector<Rational> c;
    c.reserve(p.size());
    for (const auto& x : p) {
      mpz_class z = to_mpz(x);
      c.emplace_back(flip ? mpz_class(-z) : z);
    }
    return EpsPolynomial(std::move(c));
  };
  out.weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.weights.push_back(convert(m[i][n]));
  out.total = convert(prev);
  return out;
}

// Row j < n-1: stationarity for state j; last row: normalization.
template <class Int>
std::vector<std::vector<Poly<Int>>> build_system(const IntegerPolyMatrix& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<Poly<Int>>> m(n, std::vector<Poly<Int>>(n + 1));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Poly<Int> p;
      for (auto c : t[i][j]) p.push_back(Int(static_cast<__int128>(c)));
      if (i == j) {
        if (p.empty()) p.push_back(Int(0));
        p[0] = p[0] - Int(1);
      }
      trim(p);
      m[j][i] = std::move(p);
    }
  }
  for (std::size_t i = 0; i < n; ++i) m[n - 1][i] = Poly<Int>{Int(1)};
  m[n - 1][n] = Poly<Int>{Int(1)};
  return m;
}

template <>
std::vector<std::vector<Poly<mpz_class>>> build_system<mpz_class>(const IntegerPolyMatrix& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<Poly<mpz_class>>> m(n, std::vector<Poly<mpz_class>>(n + 1));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Poly<mpz_class> p;
      for (auto c : t[i][j]) p.emplace_back(static_cast<long>(c));
      if (i == j) {
        if (p.empty()) p.emplace_back(0);
        p[0] -= 1;
      }
      trim(p);
      m[j][i] = std::move(p);
    }
  }
  for (std::size_t i = 0; i < n; ++i) m[n - 1][i] = Poly<mpz_class>{mpz_class(1)};
  m[n - 1][n] = Poly<mpz_class>{mpz_class(1)};
  return m;
}

void check_square(std::size_t rows, const auto& t) {
  if (rows < 2) throw std::invalid_argument("transition matrix must be at least 2x2");
  for (const auto& row : t) {
    if (row.size() != rows) throw std::invalid_argument("transition matrix must be square");
  }
}

}  // namespace

EpsRationalFunction StationaryWeights::expectation(std::span<const Rational> values) const {
  EpsPolynomial acc;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (values[s] != 0) acc += weights[s] * values[s];
  }
  return {acc, total};
}

StationaryWeights solve_stationary_exact(const IntegerPolyMatrix& transition) {
  check_square(transition.size(), transition);
  try {
    return gauss_jordan(build_system<Checked128>(transition));
  } catch (const Overflow&) {
    return solve_stationary_exact_bigint(transition);
  }
}

StationaryWeights solve_stationary_exact_bigint(const IntegerPolyMatrix& transition) {
  check_square(transition.size(), transition);
  return gauss_jordan(build_system<mpz_class>(transition));
}

StationaryWeights solve_stationary_exact(const EpsPolyMatrix& transition) {
  const std::size_t n = transition.size();
  check_square(n, transition);
  // Clear denominators equation by equation; scaling an equation leaves the
  // solution unchanged.
  std::vector<std::vector<Poly<mpz_class>>> m(n, std::vector<Poly<mpz_class>>(n + 1));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    mpz_class scale(1);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& c : transition[i][j].coefficients()) {
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      EpsPolynomial e = transition[i][j];
      if (i == j) e -= EpsPolynomial::constant(1);
      Poly<mpz_class> p;
      for (const auto& c : e.coefficients()) {
        Rational scaled = c * scale;
        p.push_back(scaled.get_num());
      }
      trim(p);
      m[j][i] = std::move(p);
    }
  }
  for (std::size_t i = 0; i < n; ++i) m[n - 1][i] = Poly<mpz_class>{mpz_class(1)};
  m[n - 1][n] = Poly<mpz_class>{mpz_class(1)};
  return gauss_jordan(std::move(m));
}

}  // namespace crowdgame
