#include "gzavg/arith.hpp"

#include <cmath>
#include <algorithm>

#include "gzavg/error.hpp"

namespace gzavg {
namespace {

constexpr i64 kSieveLimit = 2'000'000;

const std::vector<i64>& small_primes() {
  static const std::vector<i64> primes = [] {
    std::vector<char> composite(kSieveLimit + 1, 0);
    std::vector<i64> out;
    for (i64 i = 2; i <= kSieveLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (i64 j = i * i; j <= kSieveLimit; j += i) composite[j] = 1;
    }
    return out;
  }();
  return primes;
}

}  // namespace

i64 isqrt(i64 n) {
  if (n < 0) throw Error(ErrorCode::DomainError, "isqrt of negative value");
  auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n) {
  if (n < 0) return false;
  const i64 r = isqrt(n);
  return r * r == n;
}

Factorization factorize(i64 n) {
  if (n <= 0) throw Error(ErrorCode::DomainError, "factorize expects a positive integer");
  Factorization out;
  for (i64 p : small_primes()) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) {
    // Beyond the table: continue with odd candidates (only reached for n > 4e12).
    for (i64 d = kSieveLimit + 1; d * d <= n; d += 2) {
      if (n % d != 0) continue;
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.push_back({d, e});
    }
    if (n > 1) out.push_back({n, 1});
  }
  return out;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.size() == 1 && f.front().exponent == 1;
}

bool is_squarefree(i64 n) {
  for (const auto& pe : factorize(n)) {
    if (pe.exponent > 1) return false;
  }
  return true;
}

int mobius(i64 n) {
  int sign = 1;
  for (const auto& pe : factorize(n)) {
    if (pe.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::vector<i64> divisors(const Factorization& f) {
  std::vector<i64> out{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<i64> divisors(i64 n) { return divisors(factorize(n)); }

std::vector<i64> primes_between(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 n = std::max<i64>(lo, 2); n <= hi; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Rational::Rational(i64 num, i64 den) {
  if (den == 0) throw Error(ErrorCode::DomainError, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i64 g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational operator*(const Rational& a, const Rational& b) {
  const i64 g1 = std::gcd(a.num_, b.den_);
  const i64 g2 = std::gcd(b.num_, a.den_);
  return Rational((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
}

Rational operator+(const Rational& a, const Rational& b) {
  const i64 g = std::gcd(a.den_, b.den_);
  return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
}

}  // namespace gzavg
