#include "gzavg/special.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "gzavg/error.hpp"

namespace gzavg {
namespace {

// B_2, B_4, ..., B_20
constexpr std::array<double, 10> kBernoulliEven = {
    1.0 / 6.0,         -1.0 / 30.0,   1.0 / 42.0,       -1.0 / 30.0,   5.0 / 66.0,
    -691.0 / 2730.0,   7.0 / 6.0,     -3617.0 / 510.0,  43867.0 / 798.0, -174611.0 / 330.0};

constexpr int kEulerMaclaurinOrder = 8;

double harmonic(int n) {
  double h = 0.0;
  for (int j = n; j >= 1; --j) h += 1.0 / j;
  return h;
}

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

double legendre_q_series(int n, double x) {
  // Q_n(x) = n! / ((2n+1)!! x^{n+1}) * 2F1((n+1)/2, (n+2)/2; n+3/2; 1/x^2)
  const double z = 1.0 / (x * x);
  double log_pref = std::lgamma(n + 1.0) - (n + 1.0) * std::log(x);
  for (int j = 1; j <= 2 * n + 1; j += 2) log_pref -= std::log(static_cast<double>(j));
  const double a = 0.5 * (n + 1);
  const double b = 0.5 * (n + 2);
  const double c = n + 1.5;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < 100000; ++j) {
    term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_pref) * sum;
}

double legendre_q_miller(int n, double x) {
  const double q0 = 0.5 * std::log((x + 1.0) / (x - 1.0));
  if (n == 0) return q0;
  const double ratio = x - std::sqrt(x * x - 1.0);  // asymptotic Q_{j+1}/Q_j
  const double extra_d = std::ceil(std::log(1e-18) / (2.0 * std::log(ratio))) + 20.0;
  if (!(extra_d < 5e7)) {
    throw Error(ErrorCode::PrecisionNotReached, "legendre_q: argument too close to 1");
  }
  const int top = n + static_cast<int>(extra_d);
  double q_next = 0.0;  // Q_{j+1}
  double q_cur = 1e-300;  // Q_j at j = top
  double q_n = (top == n) ? q_cur : 0.0;
  for (int j = top; j >= 1; --j) {
    const double q_prev = ((2.0 * j + 1.0) * x * q_cur - (j + 1.0) * q_next) / j;
    q_next = q_cur;
    q_cur = q_prev;
    if (j - 1 == n) q_n = q_cur;
    if (std::abs(q_cur) > 1e250) {
      q_cur *= 1e-250;
      q_next *= 1e-250;
      q_n *= 1e-250;
    }
  }
  return q_n * (q0 / q_cur);
}

struct ResidueSums {
  double l_one;
  double l_prime_one;
  double error;
};

// sum over n >= 1 of eps(n)/n and eps(n) log(n)/n, grouped by residue a mod q:
// direct summation for j < periods, Euler-Maclaurin for j >= periods.
ResidueSums residue_sums(const FieldData& field, i64 periods) {
  const i64 q = field.abs_d();
  const double qd = static_cast<double>(q);
  CompensatedSum s1, s2;
  double err = 0.0;
  for (i64 a = 1; a < q; ++a) {
    const int eps = kronecker_epsilon(field, a);
    if (eps == 0) continue;
    CompensatedSum head1, head2;
    for (i64 j = 0; j < periods; ++j) {
      const double n = static_cast<double>(j * q + a);
      head1.add(1.0 / n);
      head2.add(std::log(n) / n);
    }
    const double x = static_cast<double>(periods * q + a);
    const double lx = std::log(x);
    // Regularised integrals; the divergent parts cancel because sum eps(a) = 0.
    double tail1 = -lx / qd + 0.5 / x;
    double tail2 = -lx * lx / (2.0 * qd) + 0.5 * lx / x;
    double qpow = qd;  // q^{2i-1}
    for (int i = 1; i <= kEulerMaclaurinOrder + 1; ++i) {
      const int order = 2 * i - 1;
      const double coeff = kBernoulliEven[i - 1] / factorial(2 * i);
      const double xpow = std::pow(x, order + 1);
      // d^n/dj^n of 1/(jq+a) and log(jq+a)/(jq+a); n odd so (-1)^n = -1
      const double d1 = -factorial(order) * qpow / xpow;
      const double d2 = -factorial(order) * qpow * (lx - harmonic(order)) / xpow;
      if (i <= kEulerMaclaurinOrder) {
        tail1 -= coeff * d1;
        tail2 -= coeff * d2;
      } else {
        err += std::abs(coeff * d1) + std::abs(coeff * d2);
      }
      qpow *= qd * qd;
    }
    head1.add(tail1);
    head2.add(tail2);
    s1.add(eps * head1.value());
    s2.add(eps * head2.value());
  }
  // Rounding in the direct part: a few ulps per accumulated term.
  err = 2.0 * err + 1e-15 * (1.0 + std::log(static_cast<double>(periods * q)));
  return {s1.value(), -s2.value(), err};
}

}  // namespace

double legendre_p(int n, double x) {
  if (n < 0) throw Error(ErrorCode::DomainError, "legendre_p: negative degree");
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p_cur = x;
  for (int j = 1; j < n; ++j) {
    const double p_next = ((2.0 * j + 1.0) * x * p_cur - j * p_prev) / (j + 1.0);
    p_prev = p_cur;
    p_cur = p_next;
  }
  return p_cur;
}

double legendre_q(int n, double x) {
  if (n < 0) throw Error(ErrorCode::DomainError, "legendre_q: negative degree");
  if (!(x > 1.0)) throw Error(ErrorCode::DomainError, "legendre_q requires x > 1");
  if (x >= 1.5) return legendre_q_series(n, x);
  return legendre_q_miller(n, x);
}

double digamma_integer(int k) {
  if (k < 1) throw Error(ErrorCode::DomainError, "digamma_integer requires k >= 1");
  return -kEulerGamma + harmonic(k - 1);
}

DirichletValues dirichlet_values(const FieldData& field, double precision) {
  if (!(precision > 0.0)) throw Error(ErrorCode::DomainError, "precision must be positive");
  for (i64 periods = 4; periods <= (i64{1} << 16); periods *= 2) {
    const auto sums = residue_sums(field, periods);
    if (sums.error <= precision) {
      DirichletValues out;
      out.field = field;
      out.l_one = sums.l_one;
      out.l_prime_one = sums.l_prime_one;
      out.log_derivative = sums.l_prime_one / sums.l_one;
      out.error_estimate = sums.error;
      return out;
    }
  }
  throw Error(ErrorCode::PrecisionNotReached, "dirichlet_values: requested precision not reached");
}

bool check_l_log_bound(const DirichletValues& values) {
  return std::abs(values.log_derivative) <= std::log(static_cast<double>(values.field.abs_d()));
}

}  // namespace gzavg
