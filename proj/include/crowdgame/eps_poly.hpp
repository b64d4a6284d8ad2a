#ifndef CROWDGAME_EPS_POLY_HPP
#define CROWDGAME_EPS_POLY_HPP

#include "crowdgame/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crowdgame {

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(int s) { return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero); }

struct LowestTerm {
  int order;
  Rational coefficient;
};

// Dense univariate polynomial in the error rate eps with exact rational
// coefficients. coeffs_[k] multiplies eps^k; trailing zeros are always trimmed.
class EpsPolynomial {
 public:
  EpsPolynomial() = default;
  explicit EpsPolynomial(std::vector<Rational> coeffs);
  EpsPolynomial(std::initializer_list<Rational> coeffs);

  static EpsPolynomial constant(const Rational& c);
  static EpsPolynomial monomial(const Rational& c, int power);

  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& coeff(int k) const;
  std::span<const Rational> coefficients() const { return coeffs_; }

  // Smallest power with a nonzero coefficient; nullopt iff identically zero.
  std::optional<LowestTerm> lowest_order() const;
  // Index of the lowest nonzero coefficient, -1 when zero.
  int valuation() const;

  Rational evaluate(const Rational& eps) const;
  double evaluate(double eps) const;

  // Exact division by eps^k; the k lowest coefficients must vanish.
  EpsPolynomial divide_by_eps_power(int k) const;

  EpsPolynomial& operator+=(const EpsPolynomial& o);
  EpsPolynomial& operator-=(const EpsPolynomial& o);
  EpsPolynomial& operator*=(const Rational& s);
  EpsPolynomial operator-() const;

  friend EpsPolynomial operator+(EpsPolynomial a, const EpsPolynomial& b) { return a += b; }
  friend EpsPolynomial operator-(EpsPolynomial a, const EpsPolynomial& b) { return a -= b; }
  friend EpsPolynomial operator*(const EpsPolynomial& a, const EpsPolynomial& b);
  friend EpsPolynomial operator*(EpsPolynomial a, const Rational& s) { return a *= s; }
  friend EpsPolynomial operator*(const Rational& s, EpsPolynomial a) { return a *= s; }
  friend bool operator==(const EpsPolynomial& a, const EpsPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  // e.g. "1/2 - 3/10*eps + eps^2"
  std::string to_string(std::string_view var = "eps") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// numerator / denominator with the denominator's lowest nonzero coefficient
// positive and common powers of eps cancelled. The sign of the function for
// eps -> 0+ is therefore the sign of the numerator's lowest coefficient.
class EpsRationalFunction {
 public:
  EpsRationalFunction() : den_(EpsPolynomial::constant(1)) {}
  EpsRationalFunction(EpsPolynomial numerator, EpsPolynomial denominator);
  explicit EpsRationalFunction(EpsPolynomial polynomial);

  const EpsPolynomial& numerator() const { return num_; }
  const EpsPolynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Sign sign_near_zero() const;
  // Exact Taylor coefficients c_0..c_order around eps = 0. Throws
  // std::domain_error when the function has a pole at eps = 0.
  std::vector<Rational> taylor(int order) const;
  Rational limit() const { return taylor(0).front(); }

  Rational evaluate(const Rational& eps) const;
  double evaluate(double eps) const;

  friend EpsRationalFunction operator+(const EpsRationalFunction& a, const EpsRationalFunction& b);
  friend EpsRationalFunction operator-(const EpsRationalFunction& a, const EpsRationalFunction& b);
  friend EpsRationalFunction operator*(const EpsRationalFunction& a, const EpsRationalFunction& b);
  friend bool operator==(const EpsRationalFunction& a, const EpsRationalFunction& b);

  std::string to_string(std::string_view var = "eps") const;

 private:
  void normalize();
  EpsPolynomial num_;
  EpsPolynomial den_;
};

inline EpsRationalFunction ratfunc_sub(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  return a - b;
}

// Sign of (a - b) for infinitesimally small positive eps. Zero means the two
// are the same function of eps.
Sign compare_small_eps(const EpsRationalFunction& a, const EpsRationalFunction& b);

std::string series_to_string(std::span<const Rational> coeffs);

}  // namespace crowdgame

#endif
