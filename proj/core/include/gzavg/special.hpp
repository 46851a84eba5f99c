#pragma once

#include "gzavg/quadratic.hpp"

namespace gzavg {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243104215933593992;
inline constexpr double kPi = 3.14159265358979323846264338327950288419716939937510;

// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre_p(int n, double x);

// Legendre function of the second kind Q_n(x) for x > 1. Uses the
// hypergeometric expansion in 1/x^2 away from 1 and Miller's backward
// recurrence (normalised by the closed form of Q_0) close to 1; the naive
// forward recurrence cancels catastrophically for large x.
double legendre_q(int n, double x);

// psi(k) = -gamma + H_{k-1}.
double digamma_integer(int k);

struct DirichletValues {
  FieldData field;
  double l_one = 0.0;        // L(1, epsilon)
  double l_prime_one = 0.0;  // L'(1, epsilon)
  double log_derivative = 0.0;
  double error_estimate = 0.0;  // a-posteriori bound on the absolute error of both values
};

// L(1, eps) and L'(1, eps) from sums over residues mod |D| with an
// Euler-Maclaurin tail; throws PrecisionNotReached if `precision` cannot be met.
DirichletValues dirichlet_values(const FieldData& field, double precision = 1e-12);

// |L'/L(1, eps)| <= log|D|.
bool check_l_log_bound(const DirichletValues& values);

}  // namespace gzavg
