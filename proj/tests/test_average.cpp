#include <doctest.h>

#include <cmath>

#include "gzavg/average.hpp"
#include "gzavg/error.hpp"

using namespace gzavg;

TEST_CASE("effective bound boundary") {
  const FieldData f = validate_discriminant(-7);
  CHECK(effective_bound_check(2, 150000, f));
  CHECK_FALSE(effective_bound_check(2, 100003, f));
  CHECK_FALSE(effective_bound_check(2, 140000, f));
  CHECK(effective_bound_check(2, 140001, f));
}

TEST_CASE("cusp form dimensions") {
  // level 1, weight 2k
  CHECK(cusp_form_dimension(1, 6) == 1);
  CHECK(cusp_form_dimension(1, 7) == 0);
  CHECK(cusp_form_dimension(1, 8) == 1);
  CHECK(cusp_form_dimension(1, 12) == 2);
  CHECK(cusp_form_dimension(1, 13) == 1);
  for (int k = 1; k <= 5; ++k) CHECK(cusp_form_dimension(1, k) == 0);
  // genus of X_0(p) and higher weight at small primes
  CHECK(cusp_form_dimension(11, 1) == 1);
  CHECK(cusp_form_dimension(13, 1) == 0);
  CHECK(cusp_form_dimension(23, 1) == 2);
  CHECK(cusp_form_dimension(37, 1) == 2);
  CHECK(cusp_form_dimension(2, 4) == 1);
  CHECK(cusp_form_dimension(5, 2) == 1);
  CHECK(cusp_form_dimension(7, 2) == 1);
  CHECK(cusp_form_dimension(3, 3) == 1);
  CHECK(newform_dimension(2, 6) == cusp_form_dimension(2, 6) - 2);
}

TEST_CASE("level-one bound") {
  const FieldData f = validate_discriminant(-7);
  const DirichletValues lv = dirichlet_values(f);
  const auto b2 = bound_level1(2, 11, f, lv);
  CHECK(b2.bound_value == 0.0);
  CHECK(b2.dimension == 0);

  const auto b12 = bound_level1(12, 10, f, lv);
  CHECK(b12.dimension_cap == doctest::Approx(2.0));
  const double hu = 1.0;
  const double bracket = hu * (std::log(7.0) - 2 * std::log(2 * kPi) + 2 * digamma_integer(12) +
                               2 * lv.log_derivative);
  const double s = average_prefactor(12, f) * (std::abs(bracket) + level1_error_bound(f));
  CHECK(b12.bound_value / (b12.applied_cap * s) == doctest::Approx(2.33).epsilon(1e-12));
  for (const auto& c : b12.components) CHECK(c.value <= b12.bound_value);

  // the displayed cap is below the true dimension for large k
  const auto b48 = bound_level1(24, 101, f, lv);
  CHECK(b48.dimension == 4);
  CHECK(b48.dimension_cap == doctest::Approx(3.0));
  CHECK(b48.applied_cap == 4.0);
}

TEST_CASE("level-p bounds") {
  const FieldData f = validate_discriminant(-7);
  const DirichletValues lv = dirichlet_values(f);
  const auto s29 = bound_levelp(2, 29, f, lv, true);
  CHECK(std::isfinite(s29.bound_value));
  CHECK(s29.bound_value > 0.0);
  CHECK(bound_levelp(2, 59, f, lv, true).bound_value < s29.bound_value);
  double prev = s29.bound_value;
  for (i64 p : {101, 1009, 10007, 100003}) {
    const double b = bound_levelp(2, p, f, lv, true).bound_value;
    CHECK(b < prev);
    prev = b;
  }
  // no newforms of weight 4 in level 2 or 3
  CHECK(bound_levelp(2, 3, f, lv, false).bound_value == 0.0);

  const i64 p = 1000003;
  const auto inert = bound_levelp(2, p, f, lv, false);
  const double P = average_prefactor(2, f);
  const double br = 2 * (1 - 1.0 / p) * std::log(2 * kPi) - std::log(double(p)) -
                    (1 - 1.0 / p) * std::log(7.0) - 2 * (1 - 1.0 / p) * digamma_integer(2) +
                    2.0 / p * lv.log_derivative;
  const double err = 192 * std::pow(7.0, 1.5) * (std::log(7.0) + 1) / p;
  CHECK(inert.components[0].value == doctest::Approx(P * (std::abs(br) + err) / p).epsilon(1e-12));
}

TEST_CASE("auxiliary inequalities") {
  for (double x = 1.000001; x < 1e12; x *= 1.5) CHECK(log_quartic_inequality(x));
  for (int k = 2; k < 40; ++k) CHECK(digamma_inequality(k));
  CHECK_FALSE(digamma_inequality(1));
  for (i64 D : {-3, -7, -11, -23, -47}) CHECK(l_log_strict_inequality(dirichlet_values(validate_discriminant(D))));
}

TEST_CASE("certificates") {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  const auto ctx = make_kernel_context(f, g.principal_form(), 2);
  const DirichletValues lv = dirichlet_values(f);

  const auto split = certify_nonvanishing(ctx, lv, 53, 1e-6);
  CHECK(split.eps_p == 1);
  CHECK(split.conditionality == Conditionality::ConditionalOnNonnegativity);
  CHECK(split.verdict == Verdict::Certified);
  CHECK(split.margin == doctest::Approx(std::abs(split.a1_g) - split.a1_g_error - split.oldform_total));

  const auto inert = certify_nonvanishing(ctx, lv, 409, 1e-6);
  CHECK(inert.eps_p == -1);
  CHECK(inert.conditionality == Conditionality::Unconditional);
  CHECK(inert.verdict == Verdict::Certified);

  CHECK_THROWS_AS(certify_nonvanishing(ctx, lv, 7, 1e-6), Error);
  DirichletValues bad = lv;
  bad.log_derivative = 10.0;
  try {
    certify_nonvanishing(ctx, bad, 11, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LLogBoundFails);
  }

  // smallest certified split prime, by upward sweep
  i64 first = 0;
  for (i64 p : primes_between(3, 60)) {
    if (kronecker_epsilon(f, p) != 1) continue;
    if (certify_nonvanishing(ctx, lv, p, 1e-6).verdict == Verdict::Certified) {
      first = p;
      break;
    }
  }
  CHECK(first == 53);
}
