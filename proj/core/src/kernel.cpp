#include "gzavg/kernel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gzavg/error.hpp"
#include "gzavg/special.hpp"

namespace gzavg {
namespace {

const double kLog2Pi = std::log(2.0 * kPi);

int eps_relative(const FieldData& field, i64 n, i64 d) {
  const i64 abs_d = field.abs_d();
  if (std::gcd(d, abs_d) == 1) return kronecker_epsilon(field, d);
  if (std::gcd(n / d, abs_d) == 1) return kronecker_epsilon(field, n / d);
  return 0;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

void require_level(const FieldData& field, const Level& level) {
  if (level.kind == LevelKind::One) return;
  if (!is_prime(level.p)) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(level.p) + " is not prime");
  }
  if (kronecker_epsilon(field, level.p) == 0) {
    throw Error(ErrorCode::RamifiedPrime,
                std::to_string(level.p) + " divides D = " + std::to_string(field.D));
  }
}

}  // namespace

double divisor_sigma_prime(const FieldData& field, i64 n) {
  // pair d with n/d: (eps_n(d) - eps_n(n/d)) log(n/d^2), exactly zero when they agree
  double s = 0.0;
  for (i64 d : divisors(n)) {
    const i64 e = n / d;
    if (d >= e) break;
    const int diff = eps_relative(field, n, d) - eps_relative(field, n, e);
    if (diff != 0) s += diff * std::log(static_cast<double>(e) / static_cast<double>(d));
  }
  return s;
}

double divisor_sigma(const FieldData& field, i64 n) {
  i64 s = 0;
  for (i64 d : divisors(n)) s += eps_relative(field, n, d);
  return static_cast<double>(s);
}

DivisorWeights default_divisor_weights(const FieldData& field) {
  DivisorWeights w;
  w.sigma_prime = [field](i64 n, i64) { return divisor_sigma_prime(field, n); };
  w.sigma_tail = [field](i64 n, i64) { return divisor_sigma(field, n); };
  w.sigma = [field](i64 n, i64) { return divisor_sigma(field, n); };
  return w;
}

DivisorWeights log_tail_divisor_weights(const FieldData& field) {
  DivisorWeights w = default_divisor_weights(field);
  w.sigma_tail = w.sigma_prime;
  return w;
}

Branch KernelParams::branch() const {
  return kronecker_epsilon(field, nu) == -1 ? Branch::Inert : Branch::Split;
}

void KernelParams::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (nu < 1) throw Error(ErrorCode::InvalidArgument, "nu must be >= 1");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (!(tail_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail_tol must be positive");
  if (!weights.sigma_prime || !weights.sigma_tail || !weights.sigma) {
    throw Error(ErrorCode::InvalidArgument, "divisor weights are not set");
  }
  if (form.discriminant() != field.D) {
    throw Error(ErrorCode::InvalidArgument, "form discriminant does not match the field");
  }
}

KernelParams make_kernel_params(const FieldData& field, const IdealClassForm& form, int k, i64 nu,
                                i64 m, double tail_tol) {
  return make_kernel_context(field, form, k).params(nu, m, tail_tol);
}

double kernel_term(const KernelParams& params, i64 n) {
  if (params.branch() == Branch::Inert) {
    throw Error(ErrorCode::BranchError, "kernel_term is defined for eps(nu) != -1 only");
  }
  const i64 mD = params.m * params.field.abs_d();
  const double mDd = static_cast<double>(mD);
  const double nu = static_cast<double>(params.nu);
  if (n == 0) {
    const i64 r = rep_number(params.form, params.field, params.m);
    if (r == 0) return 0.0;
    const double hu = params.field.h_over_u().to_double();
    return hu * static_cast<double>(r) *
           (std::log(nu * static_cast<double>(params.field.abs_d()) / static_cast<double>(params.m)) -
            2.0 * kLog2Pi + 2.0 * digamma_integer(params.k) + 2.0 * params.l_log_derivative);
  }
  if (n > 0) {
    if (n * params.nu > mD) {
      throw Error(ErrorCode::RangeError, "n exceeds m|D|/nu on the positive branch");
    }
    const i64 r = rep_number(params.form, params.field, mD - n * params.nu);
    if (r == 0) return 0.0;
    const double w = params.weights.sigma_prime(n, params.nu);
    if (w == 0.0) return 0.0;
    const double x = 1.0 - 2.0 * static_cast<double>(n) * nu / mDd;
    return -legendre_p(params.k - 1, x) * w * static_cast<double>(r);
  }
  const i64 nn = -n;
  const double w = params.weights.sigma_tail(nn, params.nu);
  if (w == 0.0) return 0.0;
  const i64 r = rep_number(params.form, params.field, nn * params.nu + mD);
  if (r == 0) return 0.0;
  const double x = 1.0 + 2.0 * static_cast<double>(nn) * nu / mDd;
  return 2.0 * legendre_q(params.k - 1, x) * w * static_cast<double>(r);
}

double tail_term_bound(const KernelParams& params, i64 n) {
  const double k = params.k;
  const double mD = static_cast<double>(params.m * params.field.abs_d());
  return std::exp((8.0 - 2.0 * k) * std::log(2.0) + (0.5 - k) * std::log(static_cast<double>(n)) +
                  (0.25 - k) * std::log(static_cast<double>(params.nu)) + k * std::log(mD));
}

double tail_bound(const KernelParams& params, i64 n0) {
  if (params.branch() == Branch::Inert) {
    throw Error(ErrorCode::BranchError, "tail_bound applies to the split branch only");
  }
  if (params.k < 2) {
    throw Error(ErrorCode::TailDiverges, "the per-term bound n^{-k+1/2} is not summable for k = 1");
  }
  if (n0 < 1) throw Error(ErrorCode::InvalidArgument, "n0 must be >= 1");
  const double s = params.k - 0.5;
  const double n = static_cast<double>(n0);
  // f(n0) + integral_{n0}^inf of the per-term bound
  return tail_term_bound(params, n0) * (1.0 + n / (s - 1.0));
}

double summed_tail_bound(int k, const FieldData& field, i64 nu, i64 m) {
  const double mD = static_cast<double>(m * field.abs_d());
  return std::exp((10.0 - 2.0 * k) * std::log(2.0) + (0.25 - k) * std::log(static_cast<double>(nu)) +
                  k * std::log(mD));
}

PhiCoefficient kernel_coefficient(const KernelParams& params) {
  params.validate();
  PhiCoefficient out;
  out.m = params.m;
  out.branch = params.branch();
  const i64 mD = params.m * params.field.abs_d();
  const i64 n_pos = mD / params.nu;
  const i64 r_m = rep_number(params.form, params.field, params.m);

  if (out.branch == Branch::Inert) {
    const Rational head = params.field.h_over_u() * Rational(r_m);
    if (n_pos == 0) {
      out.exact_raw = head;
      out.raw_a = head.to_double();
      return out;
    }
    CompensatedSum sum;
    sum.add(head.to_double());
    for (i64 n = 1; n <= n_pos; ++n) {
      const i64 r = rep_number(params.form, params.field, mD - n * params.nu);
      if (r == 0) continue;
      const double w = params.weights.sigma(n, params.nu);
      const double x = 1.0 - 2.0 * static_cast<double>(n * params.nu) / static_cast<double>(mD);
      sum.add(legendre_p(params.k - 1, x) * w * static_cast<double>(r));
    }
    out.raw_a = sum.value();
    return out;
  }

  if (params.k < 2) {
    throw Error(ErrorCode::TailDiverges, "split-branch tail cannot be certified for k = 1");
  }

  // Smallest n0 (from a floor past the region nu n ~ m|D|) whose tail bound
  // meets tail_tol, capped at max_tail_terms + 1.
  const i64 floor_n = std::max<i64>(16, 4 * mD / params.nu + 1);
  const i64 cap = std::max(floor_n, params.max_tail_terms + 1);
  i64 n0 = floor_n;
  if (tail_bound(params, n0) > params.tail_tol) {
    i64 lo = n0;
    i64 hi = n0;
    while (hi < cap && tail_bound(params, hi) > params.tail_tol) {
      lo = hi;
      hi = std::min(cap, hi * 2);
    }
    if (tail_bound(params, hi) > params.tail_tol) {
      n0 = cap;
    } else {
      while (hi - lo > 1) {
        const i64 mid = lo + (hi - lo) / 2;
        if (tail_bound(params, mid) <= params.tail_tol) hi = mid; else lo = mid;
      }
      n0 = hi;
    }
  }

  CompensatedSum sum;
  sum.add(kernel_term(params, 0));
  for (i64 n = 1; n <= n_pos; ++n) sum.add(kernel_term(params, n));
  for (i64 n = 1; n < n0; ++n) sum.add(kernel_term(params, -n));
  out.raw_a = sum.value();
  out.tail_terms = n0 - 1;
  out.tail_error = tail_bound(params, n0);
  return out;
}

double phi_prefactor(int k, const FieldData& field, i64 nu, i64 m) {
  const double log_pref = (2.0 * k - 1.0) * std::log(2.0) + k * std::log(kPi) -
                          0.5 * std::log(static_cast<double>(field.abs_d())) +
                          (1.0 - k) * std::log(static_cast<double>(nu)) + log_factorial(k - 1) -
                          log_factorial(2 * k - 2) + (k - 1.0) * std::log(static_cast<double>(m));
  return std::exp(log_pref);
}

double inert_multiplier(int k, const FieldData& field, i64 N, i64 nu) {
  const double log_arg = 2.0 * std::log(static_cast<double>(N)) +
                         std::log(static_cast<double>(field.abs_d())) -
                         std::log(static_cast<double>(nu));
  return 2.0 * kLog2Pi - log_arg - 2.0 * digamma_integer(k);
}

PhiCoefficient phi_coefficient(const KernelParams& params, std::optional<i64> N) {
  PhiCoefficient out = kernel_coefficient(params);
  double scale = phi_prefactor(params.k, params.field, params.nu, params.m);
  if (out.branch == Branch::Inert) {
    if (!N) throw Error(ErrorCode::InvalidArgument, "the inert branch needs the level N");
    scale *= inert_multiplier(params.k, params.field, *N, params.nu);
  }
  out.value = scale * out.raw_a;
  out.value_error = std::abs(scale) * out.tail_error;
  return out;
}

i64 Level::N() const {
  switch (kind) {
    case LevelKind::One: return 1;
    case LevelKind::Prime: return p;
    case LevelKind::PrimeSquare: return p * p;
  }
  return 1;
}

std::vector<DivisorTerm> divisor_terms(int k, const FieldData& field, const Level& level) {
  require_level(field, level);
  const i64 N = level.N();
  const double outer = std::exp(k * std::log(4.0 * kPi) - log_factorial(k - 1));
  std::vector<DivisorTerm> out;
  for (i64 e : divisors(N)) {
    const int mu = mobius(e);
    const int eps = kronecker_epsilon(field, e);
    if (mu == 0 || eps == 0) continue;
    DivisorTerm t;
    t.e = e;
    t.nu = N / e;
    t.weight = outer * mu * eps *
               std::exp((k - 1.0) * std::log(static_cast<double>(N)) - k * std::log(static_cast<double>(e)));
    out.push_back(t);
  }
  return out;
}

KernelParams KernelContext::params(i64 nu, i64 m, double tail_tol, double relative_tail_tol) const {
  KernelParams p;
  p.k = k;
  p.field = field;
  p.form = form;
  p.nu = nu;
  p.m = m;
  p.weights = weights;
  p.l_log_derivative = l_log_derivative;
  p.max_tail_terms = max_tail_terms;
  p.tail_tol = tail_tol;
  if (relative_tail_tol > 0.0) {
    p.tail_tol = std::max(tail_tol, relative_tail_tol * summed_tail_bound(k, field, nu, m));
  }
  return p;
}

KernelContext make_kernel_context(const FieldData& field, const IdealClassForm& form, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (form.discriminant() != field.D || !form.is_reduced()) {
    throw Error(ErrorCode::InvalidArgument, "form is not a reduced form of discriminant D");
  }
  KernelContext ctx;
  ctx.k = k;
  ctx.field = field;
  ctx.form = form;
  ctx.weights = default_divisor_weights(field);
  ctx.l_log_derivative = dirichlet_values(field).log_derivative;
  return ctx;
}

GCoefficient g_coefficient(const KernelContext& ctx, const Level& level, i64 m, double tail_tol,
                           double relative_tail_tol) {
  GCoefficient out;
  out.m = m;
  CompensatedSum value;
  double error = 0.0;
  for (const auto& term : divisor_terms(ctx.k, ctx.field, level)) {
    const auto params = ctx.params(term.nu, m, tail_tol, relative_tail_tol);
    auto phi = phi_coefficient(params, level.N());
    value.add(term.weight * phi.value);
    error += std::abs(term.weight) * phi.value_error;
    out.phis.push_back(std::move(phi));
  }
  out.value = value.value();
  out.error = error;
  return out;
}

KernelAssembly assemble_g(const KernelContext& ctx, const Level& level, i64 max_m, double tail_tol) {
  KernelAssembly out;
  out.N = level.N();
  if (level.kind != LevelKind::One) out.p = level.p;
  out.terms = divisor_terms(ctx.k, ctx.field, level);
  for (i64 m = 1; m <= max_m; ++m) {
    const auto c = g_coefficient(ctx, level, m, tail_tol);
    out.coefficients[m] = c.value;
    out.error_bounds[m] = c.error;
  }
  return out;
}

KernelAssembly assemble_g(const FieldData& field, const IdealClassForm& form, int k,
                          std::optional<i64> p, LevelKind kind, i64 max_m, double tail_tol) {
  if (kind != LevelKind::One && !p) {
    throw Error(ErrorCode::InvalidArgument, "levels p and p^2 need a prime");
  }
  return assemble_g(make_kernel_context(field, form, k), Level{kind, p.value_or(0)}, max_m, tail_tol);
}

Level level_for(AsymptoticCase which, i64 p) {
  switch (which) {
    case AsymptoticCase::LevelOne: return {LevelKind::One, 0};
    case AsymptoticCase::PrimeSplit:
    case AsymptoticCase::PrimeInert: return {LevelKind::Prime, p};
    case AsymptoticCase::PrimeSquareSplit:
    case AsymptoticCase::PrimeSquareInert: return {LevelKind::PrimeSquare, p};
  }
  return {};
}

AsymptoticEstimate asymptotic_estimate(AsymptoticCase which, const KernelContext& ctx,
                                       std::optional<i64> p, i64 m) {
  const int k = ctx.k;
  const FieldData& field = ctx.field;
  const i64 mD = m * field.abs_d();
  const double mDd = static_cast<double>(mD);
  const double log_2k2_fact = log_factorial(2 * k - 2);
  // 2^{4k-1} pi^{2k} / (2k-2)! |D|^{-1/2} m^{k-1}
  const double pref = std::exp((4.0 * k - 1.0) * std::log(2.0) + 2.0 * k * std::log(kPi) - log_2k2_fact -
                               0.5 * std::log(static_cast<double>(field.abs_d())) +
                               (k - 1.0) * std::log(static_cast<double>(m)));
  const double hur = field.h_over_u().to_double() * static_cast<double>(rep_number(ctx.form, field, m));
  const double psi = digamma_integer(k);
  const double lam = ctx.l_log_derivative;
  const double lD = std::log(static_cast<double>(field.abs_d()));
  const double lm = std::log(static_cast<double>(m));
  const double e_one = 192.0 * std::pow(mDd, 1.5) * (std::log(mDd) + 1.0);

  AsymptoticEstimate out;
  if (which == AsymptoticCase::LevelOne) {
    out.main_term = pref * hur * (lD - lm - 2.0 * kLog2Pi + 2.0 * psi + 2.0 * lam);
    out.error_bound = pref * e_one;
    out.literal_main_term = out.main_term;
    out.literal_error_bound = out.error_bound;
    return out;
  }

  if (!p) throw Error(ErrorCode::CaseMismatch, "prime-level case without a prime");
  const int eps = kronecker_epsilon(field, *p);
  const bool wants_split =
      which == AsymptoticCase::PrimeSplit || which == AsymptoticCase::PrimeSquareSplit;
  if (eps == 0) throw Error(ErrorCode::RamifiedPrime, std::to_string(*p) + " divides D");
  if ((eps == 1) != wants_split) {
    throw Error(ErrorCode::CaseMismatch, "eps(" + std::to_string(*p) + ") = " + std::to_string(eps) +
                                             " does not match the requested case");
  }
  if (*p <= mD) throw Error(ErrorCode::RangeError, "asymptotic estimates need p > m|D|");

  const double pd = static_cast<double>(*p);
  const double lp = std::log(pd);
  const double ip = 1.0 / pd;
  const double tail_coef = std::pow(2.0, 10.0 - 2.0 * k) * std::pow(mDd, k);
  switch (which) {
    case AsymptoticCase::PrimeSplit:
      out.main_term = pref * hur *
                      (lp + (1.0 - ip) * (lD - lm) - 2.0 * (1.0 - ip) * kLog2Pi +
                       2.0 * (1.0 - ip) * psi + 2.0 * (1.0 - ip) * lam);
      out.error_bound = pref * (tail_coef * std::pow(pd, -k + 0.25) + e_one * ip);
      out.literal_main_term = out.main_term;
      out.literal_error_bound = out.error_bound;
      break;
    case AsymptoticCase::PrimeInert: {
      const double bracket = 2.0 * (1.0 - ip) * kLog2Pi - lp - (1.0 - ip) * lD -
                             2.0 * (1.0 - ip) * psi + 2.0 * ip * lam;
      out.literal_main_term = pref * hur * bracket;
      out.main_term = pref * hur * (bracket - ip * lm);
      out.error_bound = pref * e_one * ip;
      out.literal_error_bound = out.error_bound;
      break;
    }
    case AsymptoticCase::PrimeSquareSplit:
      out.main_term = pref * hur *
                      ((2.0 - ip) * lp + (1.0 - ip) * (lD - lm - 2.0 * kLog2Pi + 2.0 * psi + 2.0 * lam));
      out.error_bound = pref * tail_coef * (std::pow(pd, -2.0 * k + 0.5) + std::pow(pd, -k - 0.75));
      break;
    case AsymptoticCase::PrimeSquareInert:
      out.main_term = pref * hur *
                      ((2.0 - 3.0 * ip) * lp + (1.0 - ip) * lD - lm - 2.0 * (1.0 - ip) * kLog2Pi +
                       2.0 * (1.0 - ip) * psi + 2.0 * lam);
      out.error_bound = pref * tail_coef * std::pow(pd, -2.0 * k + 0.5);
      break;
    case AsymptoticCase::LevelOne: break;
  }
  if (which == AsymptoticCase::PrimeSquareSplit || which == AsymptoticCase::PrimeSquareInert) {
    // the printed p^2 formulas omit the 1/(2k-2)! carried by every other case
    const double missing = std::exp(log_2k2_fact);
    out.literal_main_term = out.main_term * missing;
    out.literal_error_bound = out.error_bound * missing;
  }
  return out;
}

}  // namespace gzavg
