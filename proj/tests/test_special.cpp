#include <doctest.h>

#include <cmath>

#include "gzavg/error.hpp"
#include "gzavg/special.hpp"

using namespace gzavg;

namespace {

double q0(double x) { return 0.5 * std::log((x + 1.0) / (x - 1.0)); }

// Q_n = P_n Q_0 - W_{n-1} with the explicit polynomial parts
double q_closed(int n, double x) {
  const double L = q0(x);
  switch (n) {
    case 0: return L;
    case 1: return x * L - 1.0;
    case 2: return 0.5 * (3 * x * x - 1) * L - 1.5 * x;
    case 3: return 0.5 * (5 * x * x * x - 3 * x) * L - 2.5 * x * x + 2.0 / 3.0;
  }
  return 0.0;
}

double p_explicit(int n, double x) {
  switch (n) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3 * x * x - 1);
    case 3: return 0.5 * (5 * x * x * x - 3 * x);
    case 4: return (35 * std::pow(x, 4) - 30 * x * x + 3) / 8.0;
    case 5: return (63 * std::pow(x, 5) - 70 * x * x * x + 15 * x) / 8.0;
  }
  return 0.0;
}

int kron(i64 D, i64 n) { return kronecker_epsilon(validate_discriminant(D), n); }

// L'(1)/L(1) from the functional equation and Lerch's formula:
// L'/L(1) = log(2 pi / q) + gamma - L'(0)/L(0), L(0) = -(1/q) sum chi(a) a,
// L'(0) = sum chi(a) log Gamma(a/q) - L(0) log q.
double lerch_log_derivative(i64 D) {
  const i64 q = -D;
  double l0 = 0.0, lg = 0.0;
  for (i64 a = 1; a < q; ++a) {
    const int c = kron(D, a);
    l0 -= c * static_cast<double>(a) / q;
    lg += c * std::lgamma(static_cast<double>(a) / q);
  }
  const double dl0 = lg - l0 * std::log(static_cast<double>(q));
  return std::log(2.0 * kPi / q) + kEulerGamma - dl0 / l0;
}

}  // namespace

TEST_CASE("Legendre P matches explicit polynomials") {
  for (int n = 0; n <= 5; ++n)
    for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0, 1.5, 4.0})
      CHECK(legendre_p(n, x) == doctest::Approx(p_explicit(n, x)).epsilon(1e-13));
}

TEST_CASE("Legendre Q matches closed forms") {
  for (int n = 0; n <= 3; ++n)
    for (double x : {1.001, 1.01, 1.2, 1.49, 1.5, 1.51, 2.0, 3.0, 5.0})
      CHECK(legendre_q(n, x) == doctest::Approx(q_closed(n, x)).epsilon(1e-9));
  CHECK(legendre_q(0, 3.0) == doctest::Approx(0.346573590279973).epsilon(1e-14));
  CHECK(legendre_q(1, 2.0) == doctest::Approx(0.098612288668110).epsilon(1e-13));
}

TEST_CASE("Legendre Q leading asymptotics and Wronskian") {
  // Q_n(x) ~ n! / (2n+1)!! x^{-n-1}
  for (int n = 0; n <= 8; ++n) {
    double c = 1.0;
    for (int j = 1; j <= n; ++j) c *= static_cast<double>(j) / (2 * j + 1);
    const double x = 1e6;
    CHECK(legendre_q(n, x) == doctest::Approx(c * std::pow(x, -n - 1)).epsilon(1e-9));
  }
  for (double x : {1.0001, 1.3, 1.7, 12.0, 1e4})
    for (int n = 1; n <= 20; ++n) {
      const double w = n * (legendre_p(n, x) * legendre_q(n - 1, x) - legendre_p(n - 1, x) * legendre_q(n, x));
      CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
    }
  CHECK_THROWS_AS(legendre_q(1, 1.0), Error);
  CHECK_THROWS_AS(legendre_q(1, 0.5), Error);
}

TEST_CASE("digamma at integers") {
  CHECK(digamma_integer(1) == doctest::Approx(-kEulerGamma).epsilon(1e-15));
  CHECK(digamma_integer(2) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-15));
  // Stirling-type expansion
  const double k = 60.0;
  const double asym = std::log(k) - 1.0 / (2 * k) - 1.0 / (12 * k * k) + 1.0 / (120 * std::pow(k, 4)) -
                      1.0 / (252 * std::pow(k, 6));
  CHECK(digamma_integer(60) == doctest::Approx(asym).epsilon(1e-14));
}

TEST_CASE("Dirichlet values against the class number formula and Lerch") {
  for (i64 D : {-3, -7, -11, -15, -23, -47, -163}) {
    const FieldData f = validate_discriminant(D);
    const DirichletValues v = dirichlet_values(f);
    const double cnf = kPi * f.h / (f.u * std::sqrt(static_cast<double>(-D)));
    CHECK(v.l_one == doctest::Approx(cnf).epsilon(1e-11));
    CHECK(v.log_derivative == doctest::Approx(lerch_log_derivative(D)).epsilon(1e-9));
    CHECK(v.log_derivative == doctest::Approx(v.l_prime_one / v.l_one));
    CHECK(check_l_log_bound(v));
  }
}
