#pragma once

// Small integer and floating-point helpers shared by every module.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

namespace gzavg {

using i64 = std::int64_t;

struct PrimePower {
  i64 prime;
  int exponent;
};

using Factorization = std::vector<PrimePower>;

// Trial division against a cached prime table; exact for every n < 2^62.
Factorization factorize(i64 n);
bool is_prime(i64 n);
bool is_squarefree(i64 n);
int mobius(i64 n);
// Floor of the square root, exact for all nonnegative 64-bit inputs.
i64 isqrt(i64 n);
bool is_square(i64 n);
// Positive divisors of n in increasing order.
std::vector<i64> divisors(i64 n);
std::vector<i64> divisors(const Factorization& f);
// Primes p with lo <= p <= hi.
std::vector<i64> primes_between(i64 lo, i64 hi);
i64 ipow(i64 base, int exp);

// Neumaier's variant of Kahan summation. Order of add() calls is the
// summation order, so results are reproducible for a fixed call sequence.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  static double abs_(double x) noexcept { return x < 0 ? -x : x; }
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(i64 num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(i64 num, i64 den);

  i64 num() const noexcept { return num_; }
  i64 den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.num_ << '/' << r.den_;
  }

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

}  // namespace gzavg
