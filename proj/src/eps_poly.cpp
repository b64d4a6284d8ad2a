#include "crowdgame/eps_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crowdgame {

namespace {

const Rational kZero(0);

// k-th coefficient of a*b - c*d without forming the products.
Rational cross_coefficient(std::span<const Rational> a, std::span<const Rational> b,
                           std::span<const Rational> c, std::span<const Rational> d, int k) {
  Rational acc(0);
  mpq_class tmp;
  for (int i = std::max(0, k - static_cast<int>(b.size()) + 1); i <= k && i < static_cast<int>(a.size()); ++i) {
    mpq_mul(tmp.get_mpq_t(), a[i].get_mpq_t(), b[k - i].get_mpq_t());
    acc += tmp;
  }
  for (int i = std::max(0, k - static_cast<int>(d.size()) + 1); i <= k && i < static_cast<int>(c.size()); ++i) {
    mpq_mul(tmp.get_mpq_t(), c[i].get_mpq_t(), d[k - i].get_mpq_t());
    acc -= tmp;
  }
  return acc;
}

}  // namespace

EpsPolynomial::EpsPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

EpsPolynomial::EpsPolynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

EpsPolynomial EpsPolynomial::constant(const Rational& c) { return EpsPolynomial(std::vector<Rational>{c}); }

EpsPolynomial EpsPolynomial::monomial(const Rational& c, int power) {
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = c;
  return EpsPolynomial(std::move(v));
}

void EpsPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Rational& EpsPolynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return kZero;
  return coeffs_[k];
}

int EpsPolynomial::valuation() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != 0) return static_cast<int>(k);
  }
  return -1;
}

std::optional<LowestTerm> EpsPolynomial::lowest_order() const {
  int v = valuation();
  if (v < 0) return std::nullopt;
  return LowestTerm{v, coeffs_[v]};
}

Rational EpsPolynomial::evaluate(const Rational& eps) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * eps + *it;
  return acc;
}

double EpsPolynomial::evaluate(double eps) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * eps + it->get_d();
  return acc;
}

EpsPolynomial EpsPolynomial::divide_by_eps_power(int k) const {
  if (k <= 0 || is_zero()) return *this;
  for (int i = 0; i < k; ++i) {
    if (coeff(i) != 0) throw std::logic_error("polynomial not divisible by eps^k");
  }
  return EpsPolynomial(std::vector<Rational>(coeffs_.begin() + k, coeffs_.end()));
}

EpsPolynomial& EpsPolynomial::operator+=(const EpsPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

EpsPolynomial& EpsPolynomial::operator-=(const EpsPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

EpsPolynomial& EpsPolynomial::operator*=(const Rational& s) {
  if (s == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

EpsPolynomial EpsPolynomial::operator-() const {
  EpsPolynomial r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

EpsPolynomial operator*(const EpsPolynomial& a, const EpsPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  mpq_class tmp;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpq_mul(tmp.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
      out[i + j] += tmp;
    }
  }
  return EpsPolynomial(std::move(out));
}

std::string EpsPolynomial::to_string(std::string_view var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Rational& c = coeffs_[k];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

EpsRationalFunction::EpsRationalFunction(EpsPolynomial numerator, EpsPolynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

EpsRationalFunction::EpsRationalFunction(EpsPolynomial polynomial)
    : num_(std::move(polynomial)), den_(EpsPolynomial::constant(1)) {}

void EpsRationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = EpsPolynomial::constant(1);
    return;
  }
  int common = std::min(num_.valuation(), den_.valuation());
  if (common > 0) {
    num_ = num_.divide_by_eps_power(common);
    den_ = den_.divide_by_eps_power(common);
  }
  const Rational lead = den_.lowest_order()->coefficient;
  if (lead != 1) {
    Rational inv = 1 / lead;
    num_ *= inv;
    den_ *= inv;
  }
}

Sign EpsRationalFunction::sign_near_zero() const {
  auto low = num_.lowest_order();
  if (!low) return Sign::Zero;
  return sign_of(sgn(low->coefficient));
}

std::vector<Rational> EpsRationalFunction::taylor(int order) const {
  if (order < 0) throw std::invalid_argument("negative Taylor order");
  if (den_.coeff(0) == 0) throw std::domain_error("pole at eps = 0");
  std::vector<Rational> c(order + 1, Rational(0));
  const Rational inv0 = 1 / den_.coeff(0);
  for (int k = 0; k <= order; ++k) {
    Rational acc = num_.coeff(k);
    for (int j = 1; j <= k && j <= den_.degree(); ++j) acc -= den_.coeff(j) * c[k - j];
    c[k] = acc * inv0;
  }
  return c;
}

Rational EpsRationalFunction::evaluate(const Rational& eps) const {
  Rational d = den_.evaluate(eps);
  if (d == 0) throw std::domain_error("denominator vanishes at evaluation point");
  return num_.evaluate(eps) / d;
}

double EpsRationalFunction::evaluate(double eps) const { return num_.evaluate(eps) / den_.evaluate(eps); }

EpsRationalFunction operator+(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  if (a.den_ == b.den_) return EpsRationalFunction(a.num_ + b.num_, a.den_);
  return EpsRationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

EpsRationalFunction operator-(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  if (a.den_ == b.den_) return EpsRationalFunction(a.num_ - b.num_, a.den_);
  return EpsRationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

EpsRationalFunction operator*(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  return EpsRationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

bool operator==(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  return compare_small_eps(a, b) == Sign::Zero;
}

std::string EpsRationalFunction::to_string(std::string_view var) const {
  if (den_ == EpsPolynomial::constant(1)) return num_.to_string(var);
  return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
}

Sign compare_small_eps(const EpsRationalFunction& a, const EpsRationalFunction& b) {
  // Both denominators have positive lowest coefficients, so does their
  // product; the sign is that of the first nonzero cross coefficient.
  auto an = a.numerator().coefficients(), ad = a.denominator().coefficients();
  auto bn = b.numerator().coefficients(), bd = b.denominator().coefficients();
  const int top = std::max(static_cast<int>(an.size() + bd.size()), static_cast<int>(bn.size() + ad.size())) - 2;
  for (int k = 0; k <= top; ++k) {
    Rational c = cross_coefficient(an, bd, bn, ad, k);
    if (c != 0) return sign_of(sgn(c));
  }
  return Sign::Zero;
}

std::string series_to_string(std::span<const Rational> coeffs) {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ", ";
    out += coeffs[i].get_str();
  }
  return out + "]";
}

}  // namespace crowdgame
