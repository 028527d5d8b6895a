#pragma once

#include <cmath>
#include <stdexcept>

namespace derw {

namespace detail {
inline void check_circuit_params(int ell, int degree, double beta) {
  if (ell < 3) throw std::invalid_argument("bound: circuit length must be >= 3");
  if (degree < 2) throw std::invalid_argument("bound: degree bound must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("bound: beta must be positive");
}
}  // namespace detail

// Lower bound on the probability that a walk sitting at the root of a circuit
// of length ell, whose gap is at least M, completes k further full turns:
//   prod_{j=0}^{k-1} (1 + D e^{-beta (M + j)})^{-ell}
// where D bounds the vertex degrees. The gap grows by at least one per
// completed turn, which is where the +j comes from.
inline double turn_probability_lower_bound(int ell, int degree, double gap,
                                           long turns, double beta) {
  detail::check_circuit_params(ell, degree, beta);
  if (turns < 1) throw std::invalid_argument("bound: turns must be >= 1");
  double p = 1.0;
  for (long j = 0; j < turns; ++j)
    p *= std::pow(1.0 + degree * std::exp(-beta * (gap + static_cast<double>(j))),
                  -static_cast<double>(ell));
  return p;
}

// Uniform lower bound on the probability of turning forever in a circuit
// whose gap is at least -2:  exp(-|V| D e^{2 beta} / (1 - e^{-beta})).
// Valid for any circuit length up to |V|.
inline double trap_probability_lower_bound(long num_vertices, int degree,
                                           double beta) {
  if (num_vertices < 3)
    throw std::invalid_argument("bound: need at least 3 vertices");
  if (degree < 2) throw std::invalid_argument("bound: degree bound must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("bound: beta must be positive");
  double sum = static_cast<double>(num_vertices) * degree * std::exp(2.0 * beta) /
               (1.0 - std::exp(-beta));
  return std::exp(-sum);
}

// Upper bound on the probability of ever leaving a circuit of length ell when
// the current gap is M:  min(1, ell D e^{-beta M} / (1 - e^{-beta})).
// Obtained from the turn bound via 1 + x <= e^x and the geometric series.
inline double residual_escape_bound(int ell, int degree, double gap, double beta) {
  detail::check_circuit_params(ell, degree, beta);
  double value = static_cast<double>(ell) * degree * std::exp(-beta * gap) /
                 (1.0 - std::exp(-beta));
  return std::min(1.0, value);
}

}  // namespace derw
