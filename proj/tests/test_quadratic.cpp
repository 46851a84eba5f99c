#include <doctest.h>

#include <map>

#include "gzavg/error.hpp"
#include "gzavg/quadratic.hpp"

using namespace gzavg;

namespace {

i64 powmod(i64 b, i64 e, i64 m) {
  i64 r = 1;
  b %= m;
  if (b < 0) b += m;
  while (e) {
    if (e & 1) r = static_cast<i64>(static_cast<__int128>(r) * b % m);
    b = static_cast<i64>(static_cast<__int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

// Euler's criterion at odd primes, the mod 8 rule at 2, multiplicativity.
int euler_eps(i64 D, i64 n) {
  int out = 1;
  for (auto [q, e] : factorize(n)) {
    int v;
    if (q == 2) {
      const i64 r = ((D % 8) + 8) % 8;
      v = r == 1 ? 1 : -1;
    } else if (D % q == 0) {
      v = 0;
    } else {
      v = powmod(D, (q - 1) / 2, q) == 1 ? 1 : -1;
    }
    for (int i = 0; i < e; ++i) out *= v;
  }
  return out;
}

i64 box_count(const IdealClassForm& f, i64 m) {
  i64 count = 0;
  const i64 bound = 2 * isqrt(m) + 4;
  for (i64 x = -bound * 4; x <= bound * 4; ++x)
    for (i64 y = -bound * 4; y <= bound * 4; ++y)
      if (f.evaluate(x, y) == m) ++count;
  return count;
}

}  // namespace

TEST_CASE("discriminant validation order") {
  auto code = [](i64 D) {
    try {
      validate_discriminant(D);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(5) == ErrorCode::NotNegative);
  CHECK(code(-4) == ErrorCode::NotOdd);
  CHECK(code(-8) == ErrorCode::NotOdd);
  CHECK(code(-27) == ErrorCode::NotFundamental);
  CHECK(code(-5) == ErrorCode::NotFundamental);
}

TEST_CASE("class numbers and units") {
  const std::map<i64, int> known{{-3, 1},  {-7, 1},  {-11, 1}, {-15, 2}, {-19, 1}, {-23, 3},
                                 {-31, 3}, {-35, 2}, {-39, 4}, {-43, 1}, {-47, 5}, {-51, 2},
                                 {-55, 4}, {-59, 3}, {-67, 1}, {-71, 7}, {-79, 5}, {-83, 3},
                                 {-87, 6}, {-91, 2}, {-95, 8}, {-163, 1}};
  for (auto [D, h] : known) {
    const FieldData f = validate_discriminant(D);
    CHECK(f.h == h);
    CHECK(f.u == (D == -3 ? 3 : 1));
    const ClassGroup g = class_group(f);
    CHECK(g.classes.size() == static_cast<std::size_t>(h));
    CHECK(g.principal_form() == IdealClassForm{1, 1, (1 - D) / 4});
    for (const auto& form : g.classes) {
      CHECK(form.is_reduced());
      CHECK(form.discriminant() == D);
    }
  }
}

TEST_CASE("kronecker symbol matches Euler's criterion") {
  for (i64 D : {-3, -7, -11, -15, -23, -47, -163}) {
    const FieldData f = validate_discriminant(D);
    for (i64 n = 1; n < 2000; ++n) CHECK(kronecker_epsilon(f, n) == euler_eps(D, n));
  }
}

TEST_CASE("rep_number against a brute-force box count") {
  for (i64 D : {-3, -7, -15, -23}) {
    const FieldData f = validate_discriminant(D);
    const ClassGroup g = class_group(f);
    for (i64 m = 0; m <= 60; ++m) {
      i64 total = 0;
      for (const auto& form : g.classes) {
        const i64 r = rep_number(form, f, m);
        if (m > 0) CHECK(r * 2 * f.u == box_count(form, m));
        total += r;
      }
      if (m == 0) {
        CHECK(total == 0);
        continue;
      }
      i64 divisor_sum = 0;
      for (i64 d : divisors(m)) divisor_sum += euler_eps(D, d);
      CHECK(total == divisor_sum);
      CHECK(ideal_count(f, m) == divisor_sum);
    }
  }
}

TEST_CASE("chi combination") {
  const FieldData f = validate_discriminant(-23);
  const ClassGroup g = class_group(f);
  const std::vector<std::complex<double>> trivial(g.classes.size(), 1.0);
  for (i64 m = 1; m < 50; ++m)
    CHECK(chi_combination(g, trivial, m).real() == doctest::Approx(ideal_count(f, m)));
  const std::vector<std::complex<double>> short_table(1, 1.0);
  CHECK_THROWS_AS(chi_combination(g, short_table, 1), Error);
}
