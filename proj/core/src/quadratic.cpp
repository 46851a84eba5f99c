#include "gzavg/quadratic.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "gzavg/error.hpp"

namespace gzavg {
namespace {

int jacobi(i64 a, i64 n) {
  // n odd and positive
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::vector<IdealClassForm> reduced_forms(i64 D) {
  std::vector<IdealClassForm> forms;
  const i64 abs_d = -D;
  for (i64 a = 1; 3 * a * a <= abs_d; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      forms.push_back({a, b, c});
    }
  }
  std::sort(forms.begin(), forms.end(), [](const IdealClassForm& x, const IdealClassForm& y) {
    if (x.a != y.a) return x.a < y.a;
    if (std::abs(x.b) != std::abs(y.b)) return std::abs(x.b) < std::abs(y.b);
    return x.b > y.b;
  });
  return forms;
}

// Count (x, y) with form(x, y) = m by solving the quadratic in x for every
// admissible y: a x^2 + b y x + (c y^2 - m) = 0 has discriminant 4am + D y^2.
i64 lattice_count(const IdealClassForm& f, i64 abs_d, i64 m) {
  const __int128 four_am = static_cast<__int128>(4) * f.a * m;
  const i64 y_max = isqrt(static_cast<i64>(four_am / abs_d));
  i64 count = 0;
  const i64 two_a = 2 * f.a;
  for (i64 y = -y_max; y <= y_max; ++y) {
    const __int128 disc = four_am - static_cast<__int128>(abs_d) * y * y;
    if (disc < 0) continue;
    const i64 d = static_cast<i64>(disc);
    const i64 s = isqrt(d);
    if (s * s != d) continue;
    const i64 by = f.b * y;
    if ((-by + s) % two_a == 0) ++count;
    if (s != 0 && (-by - s) % two_a == 0) ++count;
  }
  return count;
}

}  // namespace

bool IdealClassForm::is_reduced() const noexcept {
  if (a <= 0) return false;
  if (std::abs(b) > a || a > c) return false;
  if ((std::abs(b) == a || a == c) && b < 0) return false;
  return true;
}

int kronecker_symbol(i64 D, i64 n) {
  if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (D < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (D % 2 == 0) return 0;
    const i64 r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(D, n);
}

int kronecker_epsilon(const FieldData& field, i64 n) { return kronecker_symbol(field.D, n); }

FieldData validate_discriminant(i64 D) {
  if (D >= 0) throw Error(ErrorCode::NotNegative, "discriminant must be negative, got " + std::to_string(D));
  if (D % 2 == 0) throw Error(ErrorCode::NotOdd, "discriminant must be odd, got " + std::to_string(D));
  if (((D % 4) + 4) % 4 != 1 || !is_squarefree(-D)) {
    throw Error(ErrorCode::NotFundamental,
                "odd discriminant must be squarefree and 1 mod 4, got " + std::to_string(D));
  }
  FieldData field;
  field.D = D;
  field.u = (D == -3) ? 3 : 1;
  field.h = static_cast<int>(reduced_forms(D).size());
  return field;
}

ClassGroup class_group(const FieldData& field) {
  ClassGroup group;
  group.field = field;
  group.classes = reduced_forms(field.D);
  group.principal = 0;
  return group;
}

i64 ideal_count(const FieldData& field, const Factorization& m) {
  i64 total = 1;
  for (const auto& [p, e] : m) {
    switch (kronecker_epsilon(field, p)) {
      case 1: total *= (e + 1); break;
      case -1:
        if (e % 2 != 0) return 0;
        break;
      default: break;  // ramified: exactly one ideal of norm p^e
    }
  }
  return total;
}

i64 ideal_count(const FieldData& field, i64 m) {
  if (m <= 0) return 0;
  return ideal_count(field, factorize(m));
}

i64 rep_number(const IdealClassForm& form, const FieldData& field, i64 m) {
  if (m < 0) throw Error(ErrorCode::DomainError, "rep_number expects m >= 0");
  if (m == 0) return 0;
  const i64 total = ideal_count(field, m);
  if (total == 0) return 0;
  if (field.h == 1) return total;
  return lattice_count(form, field.abs_d(), m) / (2 * field.u);
}

std::complex<double> chi_combination(const ClassGroup& group,
                                     std::span<const std::complex<double>> chi, i64 m) {
  if (chi.size() != group.classes.size()) {
    throw Error(ErrorCode::TableSizeMismatch,
                "character table has " + std::to_string(chi.size()) + " entries, class group has " +
                    std::to_string(group.classes.size()));
  }
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    sum += chi[i] * static_cast<double>(rep_number(group.classes[i], group.field, m));
  }
  return sum;
}

}  // namespace gzavg
