#pragma once

// Arithmetic of an imaginary quadratic field K = Q(sqrt(D)) with odd
// fundamental discriminant D < 0: reduced forms, class number, the
// Kronecker character of D and ideal counts r_A(m) per class.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gzavg/arith.hpp"

namespace gzavg {

struct FieldData {
  i64 D = 0;
  int h = 0;  // class number
  int u = 0;  // half the number of units of the ring of integers

  i64 abs_d() const noexcept { return -D; }
  // h/u as an exact rational.
  Rational h_over_u() const { return Rational(h, u); }
};

// Reduced positive-definite form a x^2 + b x y + c y^2.
struct IdealClassForm {
  i64 a = 0;
  i64 b = 0;
  i64 c = 0;

  i64 discriminant() const noexcept { return b * b - 4 * a * c; }
  bool is_reduced() const noexcept;
  i64 evaluate(i64 x, i64 y) const noexcept { return a * x * x + b * x * y + c * y * y; }

  friend bool operator==(const IdealClassForm&, const IdealClassForm&) = default;
};

struct ClassGroup {
  FieldData field;
  std::vector<IdealClassForm> classes;
  std::size_t principal = 0;

  const IdealClassForm& principal_form() const { return classes.at(principal); }
};

// Throws NotNegative, NotOdd or NotFundamental; h is obtained by counting
// reduced forms.
FieldData validate_discriminant(i64 D);

// Kronecker symbol (D | n); completely multiplicative in n.
int kronecker_epsilon(const FieldData& field, i64 n);
int kronecker_symbol(i64 D, i64 n);

// All reduced forms of discriminant D, sorted by (a, |b|, -b); the
// principal form (1, 1, (1 - D)/4) is always first.
ClassGroup class_group(const FieldData& field);

// Number of integral ideals of norm m in the class of `form`: integer
// solutions of form(x, y) = m divided by 2u. r_A(0) is defined as 0.
i64 rep_number(const IdealClassForm& form, const FieldData& field, i64 m);

// Number of integral ideals of norm m summed over all classes,
// i.e. sum over d | m of epsilon(d), computed from the factorization of m.
i64 ideal_count(const FieldData& field, i64 m);
i64 ideal_count(const FieldData& field, const Factorization& m);

// sum over classes A of chi(A) r_A(m); chi is a table indexed like group.classes.
std::complex<double> chi_combination(const ClassGroup& group,
                                     std::span<const std::complex<double>> chi, i64 m);

}  // namespace gzavg
