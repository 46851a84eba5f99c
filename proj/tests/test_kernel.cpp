#include <doctest.h>

#include <cmath>

#include "gzavg/error.hpp"
#include "gzavg/kernel.hpp"
#include "gzavg/special.hpp"

using namespace gzavg;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

// sum over d | n of eps(d) and eps(d) log(n/d^2), for n coprime to D
double naive_sigma(const FieldData& f, i64 n) {
  double s = 0;
  for (i64 d : divisors(n)) s += kronecker_epsilon(f, d);
  return s;
}

double naive_sigma_prime(const FieldData& f, i64 n) {
  double s = 0;
  for (i64 d : divisors(n))
    s += kronecker_epsilon(f, d) * std::log(static_cast<double>(n) / (static_cast<double>(d) * d));
  return s;
}

}  // namespace

TEST_CASE("divisor weights") {
  const FieldData f = validate_discriminant(-23);
  for (i64 n = 1; n < 400; ++n) {
    if (n % 23 == 0) continue;
    CHECK(divisor_sigma(f, n) == naive_sigma(f, n));
    CHECK(divisor_sigma_prime(f, n) == doctest::Approx(naive_sigma_prime(f, n)).epsilon(1e-12));
    if (kronecker_epsilon(f, n) == 1) CHECK(divisor_sigma_prime(f, n) == 0.0);
  }
}

TEST_CASE("branch and range errors") {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  KernelParams inert = make_kernel_params(f, g.principal_form(), 2, 3, 1, 1e-6);
  CHECK(inert.branch() == Branch::Inert);
  CHECK(code_of([&] { kernel_term(inert, 1); }) == ErrorCode::BranchError);
  KernelParams split = make_kernel_params(f, g.principal_form(), 2, 2, 1, 1e-6);
  CHECK(split.branch() == Branch::Split);
  CHECK(code_of([&] { kernel_term(split, 4); }) == ErrorCode::RangeError);
  KernelParams k1 = make_kernel_params(f, g.principal_form(), 1, 2, 1, 1e-6);
  CHECK(code_of([&] { tail_bound(k1, 10); }) == ErrorCode::TailDiverges);
}

TEST_CASE("inert branch is exact past m|D|") {
  for (i64 D : {-7, -23}) {
    const FieldData f = validate_discriminant(D);
    const ClassGroup g = class_group(f);
    for (const auto& form : g.classes) {
      for (i64 m = 1; m <= 4; ++m) {
        for (i64 nu : primes_between(m * -D + 1, 200)) {
          if (kronecker_epsilon(f, nu) != -1) continue;
          const auto c = kernel_coefficient(make_kernel_params(f, form, 2, nu, m, 1e-6));
          REQUIRE(c.exact_raw.has_value());
          CHECK(*c.exact_raw == f.h_over_u() * Rational(rep_number(form, f, m)));
          CHECK(c.tail_error == 0.0);
        }
      }
    }
  }
}

TEST_CASE("negative-n terms obey the per-term bound") {
  const FieldData f = validate_discriminant(-11);
  const ClassGroup g = class_group(f);
  for (int k : {2, 3}) {
    for (i64 nu : {1, 3, 5, 9}) {
      for (i64 m = 1; m <= 3; ++m) {
        const auto params = make_kernel_params(f, g.principal_form(), k, nu, m, 1e-6);
        for (i64 n = 1; n < 300; ++n)
          CHECK(std::abs(kernel_term(params, -n)) <= tail_term_bound(params, n));
      }
    }
  }
}

TEST_CASE("truncated coefficient against a long explicit sum") {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  for (int k : {2, 3}) {
    for (i64 nu : {1, 2, 11}) {
      auto params = make_kernel_params(f, g.principal_form(), k, nu, 1, 1e-3);
      const auto c = kernel_coefficient(params);
      CompensatedSum s;
      const double ld = params.l_log_derivative;
      // zero term written out from the formula
      const double a0 = f.h_over_u().to_double() * rep_number(g.principal_form(), f, 1) *
                        (std::log(static_cast<double>(nu) * 7.0) - 2.0 * std::log(2.0 * kPi) +
                         2.0 * digamma_integer(k) + 2.0 * ld);
      s.add(a0);
      for (i64 n = 1; n * nu <= 7; ++n) s.add(kernel_term(params, n));
      const i64 far = 400'000;
      for (i64 n = 1; n <= far; ++n) s.add(kernel_term(params, -n));
      const double slack = tail_bound(params, far + 1);
      CHECK(std::abs(s.value() - c.raw_a) <= c.tail_error + slack);
    }
  }
}

TEST_CASE("divisor terms of g") {
  const FieldData f = validate_discriminant(-7);
  const int k = 2;
  const auto t = divisor_terms(k, f, Level{LevelKind::PrimeSquare, 11});
  REQUIRE(t.size() == 2);
  const double c = std::pow(4.0 * kPi, k);  // (k-1)! = 1
  CHECK(t[0].e == 1);
  CHECK(t[0].nu == 121);
  CHECK(t[0].weight == doctest::Approx(c * 121.0));
  CHECK(t[1].e == 11);
  CHECK(t[1].nu == 11);
  CHECK(t[1].weight == doctest::Approx(-c * 1.0 * 121.0 / 121.0));
  CHECK(code_of([&] { divisor_terms(k, f, Level{LevelKind::Prime, 7}); }) == ErrorCode::RamifiedPrime);
  CHECK(code_of([&] { divisor_terms(k, f, Level{LevelKind::Prime, 9}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("prefactor and inert multiplier") {
  const FieldData f = validate_discriminant(-7);
  // 2^{2k-1} pi^k |D|^{-1/2} nu^{1-k} (k-1)!/(2k-2)! m^{k-1} at k=3, nu=2, m=5
  const double want = 32.0 * std::pow(kPi, 3) / std::sqrt(7.0) / 4.0 * 2.0 / 24.0 * 25.0;
  CHECK(phi_prefactor(3, f, 2, 5) == doctest::Approx(want).epsilon(1e-13));
  CHECK(inert_multiplier(2, f, 13, 13) ==
        doctest::Approx(2 * std::log(2 * kPi) - std::log(13.0 * 7.0) - 2 * (1 - kEulerGamma)));
}

TEST_CASE("asymptotic estimate preconditions and a small sweep") {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  const auto ctx = make_kernel_context(f, g.principal_form(), 2);
  CHECK(code_of([&] { asymptotic_estimate(AsymptoticCase::PrimeSplit, ctx, 2, 1); }) ==
        ErrorCode::RangeError);
  CHECK(code_of([&] { asymptotic_estimate(AsymptoticCase::PrimeSplit, ctx, 13, 1); }) ==
        ErrorCode::CaseMismatch);
  CHECK(code_of([&] { asymptotic_estimate(AsymptoticCase::PrimeSplit, ctx, 7, 1); }) ==
        ErrorCode::RamifiedPrime);
  for (i64 p : primes_between(8, 60)) {
    const int eps = kronecker_epsilon(f, p);
    for (auto which : {eps == 1 ? AsymptoticCase::PrimeSplit : AsymptoticCase::PrimeInert,
                       eps == 1 ? AsymptoticCase::PrimeSquareSplit : AsymptoticCase::PrimeSquareInert}) {
      const auto est = asymptotic_estimate(which, ctx, p, 1);
      const auto gc = g_coefficient(ctx, level_for(which, p), 1, 1e-300, 0.01);
      CHECK(std::abs(gc.value - est.main_term) + gc.error <= est.error_bound);
      if (which == AsymptoticCase::PrimeSquareSplit || which == AsymptoticCase::PrimeSquareInert)
        CHECK(est.literal_main_term == doctest::Approx(2.0 * est.main_term));
    }
  }
}
