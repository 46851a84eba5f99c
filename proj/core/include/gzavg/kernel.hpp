#pragma once

// Fourier coefficients of the holomorphic kernel forms Phi_nu and of the
// level-N form g whose Petersson product with f gives L'(k, f x Theta_A).
//
// Conventions: weight 2k, nu a positive divisor of the level, m >= 1 the
// coefficient index. "Split" means eps(nu) != -1 (the derivative formula with
// the infinite Q-tail); "inert" means eps(nu) = -1 (the finite P-sum scaled
// by the log multiplier).

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "gzavg/quadratic.hpp"

namespace gzavg {

enum class Branch { Split, Inert };

// Divisor-sum weights entering the kernel terms, all called with n > 0:
//   sigma_prime: positive-n terms of the split branch (P-sum),
//   sigma_tail:  negative-n terms of the split branch (Q-tail, argument |n|),
//   sigma:       positive-n terms of the inert branch.
// Swappable so bound checks can be re-run under another convention.
struct DivisorWeights {
  std::function<double(i64 n, i64 nu)> sigma_prime;
  std::function<double(i64 n, i64 nu)> sigma_tail;
  std::function<double(i64 n, i64 nu)> sigma;
};

// With eps_n(d) = eps(d) if gcd(d, D) = 1, eps(n/d) if gcd(n/d, D) = 1, else 0:
//   sigma'(n) = sum_{d | n} eps_n(d) log(n/d^2),  sigma(n) = sum_{d | n} eps_n(d).
// Genus characters are not applied (exact when |D| is prime).
double divisor_sigma(const FieldData& field, i64 n);
double divisor_sigma_prime(const FieldData& field, i64 n);

// Default weights: sigma' on the split P-sum, sigma on the Q-tail (the
// undifferentiated Eisenstein coefficient multiplies the Q-terms) and sigma
// on the inert branch.
DivisorWeights default_divisor_weights(const FieldData& field);

// sigma' on the Q-tail as well. Under this convention every Q-tail term
// vanishes: r_A(n nu + m|D|) != 0 forces eps(n) = 1 when eps(nu) = 1, and
// then sigma'(n) = 0.
DivisorWeights log_tail_divisor_weights(const FieldData& field);

struct KernelParams {
  int k = 2;
  FieldData field;
  IdealClassForm form;
  i64 nu = 1;
  i64 m = 1;
  DivisorWeights weights;
  double tail_tol = 1e-8;
  double l_log_derivative = 0.0;  // L'/L(1, eps)
  i64 max_tail_terms = 200'000;

  Branch branch() const;
  void validate() const;
};

// Fills weights with the defaults and the log-derivative from dirichlet_values.
KernelParams make_kernel_params(const FieldData& field, const IdealClassForm& form, int k, i64 nu,
                                i64 m, double tail_tol);

struct PhiCoefficient {
  i64 m = 0;
  double value = 0.0;        // full coefficient, zero when only raw_a was requested
  double raw_a = 0.0;        // the bracketed sum a_{m,nu}
  double tail_error = 0.0;   // truncation bound on raw_a
  double value_error = 0.0;  // truncation bound on value
  Branch branch = Branch::Split;
  i64 tail_terms = 0;        // number of negative-n terms summed explicitly
  std::optional<Rational> exact_raw;  // set when raw_a is an exact rational (inert, nu > m|D|)
};

// a_{m,n,nu} on the split branch, n of either sign.
double kernel_term(const KernelParams& params, i64 n);

// Per-term bound 2^{8-2k} n^{-k+1/2} nu^{-k+1/4} (m|D|)^k for |a_{m,-n,nu}|.
double tail_term_bound(const KernelParams& params, i64 n);
// Bound on sum_{n >= n0} |a_{m,-n,nu}| by integral comparison of the per-term bound.
double tail_bound(const KernelParams& params, i64 n0);
// The summed bound 2^{10-2k} nu^{-k+1/4} (m|D|)^k.
double summed_tail_bound(int k, const FieldData& field, i64 nu, i64 m);

PhiCoefficient kernel_coefficient(const KernelParams& params);

double phi_prefactor(int k, const FieldData& field, i64 nu, i64 m);
// 2 log 2pi - log(N^2 |D| / nu) - 2 psi(k)
double inert_multiplier(int k, const FieldData& field, i64 N, i64 nu);

// Full m-th coefficient of Phi_nu; N is required on the inert branch.
PhiCoefficient phi_coefficient(const KernelParams& params, std::optional<i64> N);

enum class LevelKind { One, Prime, PrimeSquare };

struct Level {
  LevelKind kind = LevelKind::One;
  i64 p = 0;  // unused for LevelKind::One

  i64 N() const;
};

// One summand of g: weight * Phi_nu, nu = N / e.
struct DivisorTerm {
  i64 e = 1;
  i64 nu = 1;
  double weight = 0.0;  // (4pi)^k/(k-1)! * mu(e) eps(e) N^{k-1} e^{-k}
};

std::vector<DivisorTerm> divisor_terms(int k, const FieldData& field, const Level& level);

// Shared per-(field, class, weight) data for computing many coefficients.
struct KernelContext {
  int k = 2;
  FieldData field;
  IdealClassForm form;
  DivisorWeights weights;
  double l_log_derivative = 0.0;
  i64 max_tail_terms = 200'000;

  // tail tolerance for Phi_nu is max(tail_tol, relative_tail_tol * summed_tail_bound)
  KernelParams params(i64 nu, i64 m, double tail_tol, double relative_tail_tol = 0.0) const;
};

KernelContext make_kernel_context(const FieldData& field, const IdealClassForm& form, int k);

struct GCoefficient {
  i64 m = 0;
  double value = 0.0;
  double error = 0.0;
  std::vector<PhiCoefficient> phis;  // aligned with divisor_terms()
};

GCoefficient g_coefficient(const KernelContext& ctx, const Level& level, i64 m, double tail_tol,
                           double relative_tail_tol = 0.0);

struct KernelAssembly {
  i64 N = 1;
  std::optional<i64> p;
  std::vector<DivisorTerm> terms;
  std::map<i64, double> coefficients;
  std::map<i64, double> error_bounds;
};

// a_m(g) for 1 <= m <= max_m. Throws RamifiedPrime if p | D.
KernelAssembly assemble_g(const KernelContext& ctx, const Level& level, i64 max_m, double tail_tol);
KernelAssembly assemble_g(const FieldData& field, const IdealClassForm& form, int k,
                          std::optional<i64> p, LevelKind kind, i64 max_m, double tail_tol);

enum class AsymptoticCase { LevelOne, PrimeSplit, PrimeInert, PrimeSquareSplit, PrimeSquareInert };

struct AsymptoticEstimate {
  double main_term = 0.0;
  double error_bound = 0.0;
  // The main term exactly as printed in the source formulas; differs from
  // main_term by (2k-2)! for the p^2 cases and by h/u r_A(m) log(m)/p for
  // the inert prime case.
  double literal_main_term = 0.0;
  double literal_error_bound = 0.0;
};

// Large-p prediction of a_m(g); p must exceed m|D| for the prime cases.
AsymptoticEstimate asymptotic_estimate(AsymptoticCase which, const KernelContext& ctx,
                                       std::optional<i64> p, i64 m);

Level level_for(AsymptoticCase which, i64 p);

}  // namespace gzavg
