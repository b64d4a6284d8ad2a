#ifndef CROWDGAME_FRACTION_FREE_HPP
#define CROWDGAME_FRACTION_FREE_HPP

#include "crowdgame/eps_poly.hpp"

#include <cstdint>
#include <vector>

namespace crowdgame {

using EpsPolyMatrix = std::vector<std::vector<EpsPolynomial>>;

// Integer-coefficient polynomial (index = power of eps). Transition matrices of
// the error model have small integer coefficients, which lets the solver run
// on 128-bit integers instead of GMP.
using IntegerPoly = std::vector<std::int64_t>;
using IntegerPolyMatrix = std::vector<std::vector<IntegerPoly>>;

// Stationary vector in common-denominator form: x_s = weights[s] / total.
// total equals the sum of the weights and has a positive lowest coefficient.
struct StationaryWeights {
  std::vector<EpsPolynomial> weights;
  EpsPolynomial total;

  std::size_t size() const { return weights.size(); }
  EpsRationalFunction probability(std::size_t s) const { return {weights[s], total}; }
  // sum_s weights[s] * values[s] / total
  EpsRationalFunction expectation(std::span<const Rational> values) const;
};

// Solves x^T T = x^T, sum x = 1 for a row-stochastic polynomial matrix by
// fraction-free Gauss-Jordan elimination over the polynomial ring. Throws
// std::runtime_error if the system is singular for all eps.
StationaryWeights solve_stationary_exact(const EpsPolyMatrix& transition);
StationaryWeights solve_stationary_exact(const IntegerPolyMatrix& transition);

// Same solve forced onto arbitrary-precision integers; used to cross-check the
// 128-bit path.
StationaryWeights solve_stationary_exact_bigint(const IntegerPolyMatrix& transition);

}  // namespace crowdgame

#endif
