#include "gzavg/average.hpp"

#include <cmath>

#include "gzavg/error.hpp"

namespace gzavg {

namespace {

double dbl(i64 x) { return static_cast<double>(x); }

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// the common bracket of the level-p bounds, split case
double split_bracket(int k, i64 p, const FieldData& field, const DirichletValues& lv) {
  const double q = 1.0 - 1.0 / dbl(p);
  const double hu = dbl(field.h) / field.u;
  return hu * (std::log(dbl(p)) + q * std::log(dbl(field.abs_d())) - 2.0 * q * std::log(2.0 * kPi) +
               2.0 * q * digamma_integer(k) + 2.0 * q * lv.log_derivative);
}

double inert_bracket(int k, i64 p, const FieldData& field, const DirichletValues& lv) {
  const double q = 1.0 - 1.0 / dbl(p);
  const double hu = dbl(field.h) / field.u;
  return hu * (2.0 * q * std::log(2.0 * kPi) - std::log(dbl(p)) - q * std::log(dbl(field.abs_d())) -
               2.0 * q * digamma_integer(k) + 2.0 / dbl(p) * lv.log_derivative);
}

double split_error(int k, i64 p, const FieldData& field) {
  return std::pow(2.0, 10 - 2 * k) * std::pow(dbl(p), 0.25 - k) * std::pow(dbl(field.abs_d()), k) +
         level1_error_bound(field) / dbl(p);
}

double inert_log_factor(int k, i64 p, const FieldData& field) {
  return 2.0 * std::log(dbl(p)) + 2.0 * std::log(2.0 * kPi * k) + std::log(dbl(field.abs_d()));
}

void finish(ContributionBound& b) {
  b.bound_value = 0.0;
  for (const auto& c : b.components) b.bound_value += c.value;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Level1: return "level1";
    case Family::LevelPSplit: return "levelp_split";
    case Family::LevelPInert: return "levelp_inert";
  }
  return "?";
}

std::string to_string(Verdict v) { return v == Verdict::Certified ? "certified" : "not_certified"; }

std::string to_string(Conditionality c) {
  return c == Conditionality::Unconditional ? "unconditional" : "conditional_on_nonnegativity";
}

i64 cusp_form_dimension(i64 N, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (N != 1 && !is_prime(N)) throw Error(ErrorCode::InvalidArgument, "level must be 1 or prime");
  // genus-type invariants of X_0(N) times 12
  i64 mu = N == 1 ? 1 : N + 1;
  i64 nu2 = N == 1 ? 1 : (N == 2 ? 1 : 1 + kronecker_symbol(-4, N));
  i64 nu3 = N == 1 ? 1 : (N == 3 ? 1 : 1 + kronecker_symbol(-3, N));
  i64 cusps = N == 1 ? 1 : 2;
  const i64 g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;  // 12 * genus
  const i64 genus = g12 / 12;
  const i64 w = 2 * k;
  if (w == 2) return genus;
  return (w - 1) * (genus - 1) + (w / 2 - 1) * cusps + nu2 * (w / 4) + nu3 * (w / 3);
}

i64 newform_dimension(i64 N, int k) {
  if (N == 1) return cusp_form_dimension(1, k);
  return cusp_form_dimension(N, k) - 2 * cusp_form_dimension(1, k);
}

double average_prefactor(int k, const FieldData& field) {
  return std::exp((4 * k - 1) * std::log(2.0) + 2 * k * std::log(kPi) - log_factorial(2 * k - 2)) /
         std::sqrt(dbl(field.abs_d()));
}

double level1_error_bound(const FieldData& field) {
  const double d = dbl(field.abs_d());
  return 192.0 * std::pow(d, 1.5) * (std::log(d) + 1.0);
}

ContributionBound bound_level1(int k, i64 p, const FieldData& field, const DirichletValues& lv) {
  ContributionBound b;
  b.family = Family::Level1;
  b.dimension_cap = k / 12.0 + 1.0;
  b.dimension = cusp_form_dimension(1, k);
  b.applied_cap = std::max(b.dimension_cap, dbl(b.dimension));
  if (b.dimension == 0) {
    b.applied_cap = 0.0;
    b.components = {{"f_1", 0.0}, {"f~_p", 0.0}, {"f~_p2", 0.0}};
    return b;
  }
  const double hu = dbl(field.h) / field.u;
  const double bracket = hu * (std::log(dbl(field.abs_d())) - 2.0 * std::log(2.0 * kPi) +
                               2.0 * digamma_integer(k) + 2.0 * lv.log_derivative);
  const double s = average_prefactor(k, field) * (std::abs(bracket) + level1_error_bound(field));
  const double pp = dbl(p);
  b.components = {{"f_1", b.applied_cap * s / (pp * pp)},
                  {"f~_p", 72.0 * b.applied_cap * s / (pp * pp)},
                  {"f~_p2", 1600.0 * b.applied_cap * s / (pp * pp * pp)}};
  finish(b);
  return b;
}

ContributionBound bound_levelp(int k, i64 p, const FieldData& field, const DirichletValues& lv,
                               bool split) {
  ContributionBound b;
  b.family = split ? Family::LevelPSplit : Family::LevelPInert;
  b.dimension = newform_dimension(p, k);
  if (b.dimension <= 0) {
    b.components = {{"f_1", 0.0}, {"f~_p", 0.0}};
    return b;
  }
  const double P = average_prefactor(k, field);
  const double pp = dbl(p);
  if (split) {
    const double inner = P * (std::abs(split_bracket(k, p, field, lv)) + split_error(k, p, field));
    b.components = {{"f_1", inner / pp}, {"f~_p", 2.0 * std::pow(pp, -1.5) * inner}};
  } else {
    const double inner =
        P * (std::abs(inert_bracket(k, p, field, lv)) + level1_error_bound(field) / pp);
    b.components = {{"f_1", inner / pp},
                    {"f~_p", 40.0 * std::pow(pp, -1.5) * inert_log_factor(k, p, field) * inner}};
  }
  finish(b);
  return b;
}

ContributionBound bound_level1_from_ratios(int k, i64 p, const std::vector<double>& r) {
  ContributionBound b;
  b.family = Family::Level1;
  b.dimension_cap = k / 12.0 + 1.0;
  b.dimension = static_cast<i64>(r.size());
  b.applied_cap = 1.0;
  double s = 0.0;
  for (double x : r) s += std::abs(x);
  const double pp = dbl(p);
  b.components = {{"f_1", s / (pp * (pp + 1.0))},
                  {"f~_p", 72.0 * s / (pp * (pp + 1.0))},
                  {"f~_p2", 1600.0 * s / (pp * pp * pp)}};
  finish(b);
  return b;
}

ContributionBound bound_levelp_from_ratios(int k, i64 p, const FieldData& field, bool split,
                                           const std::vector<double>& r) {
  ContributionBound b;
  b.family = split ? Family::LevelPSplit : Family::LevelPInert;
  b.dimension = static_cast<i64>(r.size());
  double s = 0.0;
  for (double x : r) s += std::abs(x);
  const double pp = dbl(p);
  const double fp = split ? 2.0 * std::pow(pp, -1.5)
                          : 40.0 * std::pow(pp, -1.5) * inert_log_factor(k, p, field);
  b.components = {{"f_1", s / pp}, {"f~_p", fp * s}};
  finish(b);
  return b;
}

bool effective_bound_check(int k, i64 p, const FieldData& field) {
  return static_cast<__int128>(p) > static_cast<__int128>(10'000) * k * field.abs_d();
}

bool log_quartic_inequality(double x) { return x > 1.0 && std::log(x) < 4.0 * std::pow(x, 0.25); }

bool digamma_inequality(int k) {
  const double psi = digamma_integer(k);
  return k >= 2 && psi > 0.0 && psi < std::log(static_cast<double>(k));
}

bool l_log_strict_inequality(const DirichletValues& v) {
  return std::abs(v.log_derivative) < std::log(dbl(v.field.abs_d()));
}

Certificate certify_nonvanishing(int k, i64 p, const FieldData& field, const IdealClassForm& form,
                                 double tail_tol) {
  const KernelContext ctx = make_kernel_context(field, form, k);
  return certify_nonvanishing(ctx, dirichlet_values(field), p, tail_tol);
}

Certificate certify_nonvanishing(const KernelContext& ctx, const DirichletValues& lv, i64 p,
                                 double tail_tol) {
  const FieldData& field = ctx.field;
  const int k = ctx.k;
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  const int eps = kronecker_epsilon(field, p);
  if (eps == 0) throw Error(ErrorCode::RamifiedPrime, "p divides D");
  if (!check_l_log_bound(lv))
    throw Error(ErrorCode::LLogBoundFails, "|L'/L(1, eps)| exceeds log|D|");

  Certificate c;
  c.k = k;
  c.p = p;
  c.field = field;
  c.form = ctx.form;
  c.eps_p = eps;
  c.preconditions_checked = {
      {"eps(p) != 0", true, "eps(p) = " + std::to_string(eps)},
      {"|L'/L(1,eps)| <= log|D|", true, ""},
      {"Ramanujan inputs", true, "no eigenvalue data; bounds assume the Ramanujan bound"}};

  const GCoefficient a1 =
      g_coefficient(ctx, Level{LevelKind::PrimeSquare, p}, 1, tail_tol);
  c.a1_g = a1.value;
  c.a1_g_error = a1.error;

  const bool split = eps == 1;
  c.bounds.push_back(bound_level1(k, p, field, lv));
  c.bounds.push_back(bound_levelp(k, p, field, lv, split));
  c.oldform_total = 0.0;
  for (const auto& b : c.bounds) c.oldform_total += b.bound_value;
  c.margin = std::abs(c.a1_g) - c.a1_g_error - c.oldform_total;

  bool all_pass = true;
  for (const auto& pc : c.preconditions_checked) all_pass = all_pass && pc.passed;
  c.verdict = (c.margin > 0.0 && all_pass) ? Verdict::Certified : Verdict::NotCertified;
  c.conditionality =
      eps == -1 ? Conditionality::Unconditional : Conditionality::ConditionalOnNonnegativity;

  c.shortcut_bound = average_prefactor(k, field) * dbl(field.h) / field.u;
  const auto which = split ? AsymptoticCase::PrimeSquareSplit : AsymptoticCase::PrimeSquareInert;
  if (p > field.abs_d()) {
    const AsymptoticEstimate est = asymptotic_estimate(which, ctx, p, 1);
    c.predicted_a1 = est.main_term;
    c.predicted_a1_literal = est.literal_main_term;
  } else {
    c.predicted_a1 = c.predicted_a1_literal = std::nan("");
  }
  c.predicted_a1_alternate = 2.0 * kPi / std::sqrt(dbl(field.abs_d())) *
                             static_cast<double>(rep_number(ctx.form, field, 1)) *
                             (dbl(field.h) / field.u) * std::log(dbl(p) * dbl(p));
  c.effective_bound = effective_bound_check(k, p, field);

  if (split)
    c.notes.push_back("split prime: relies on L'(k, f x Theta_A) >= 0 for level-p newforms");
  if (field.D == -3) c.notes.push_back("D = -3: u = 3");
  if (k == 1) c.notes.push_back("k = 1: psi(1) < 0, shortcut bound not applicable");
  return c;
}

}  // namespace gzavg
