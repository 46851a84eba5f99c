#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "gzavg/average.hpp"
#include "gzavg/error.hpp"
#include "gzavg/kernel.hpp"
#include "gzavg/oldforms.hpp"
#include "gzavg/quadratic.hpp"
#include "gzavg/special.hpp"

namespace gzavg::cli {

namespace {

Cell null_cell() { return std::monostate{}; }

Cell num(double x) {
  if (!std::isfinite(x)) return null_cell();
  return x;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::ClassGroup: return "classgroup";
    case Command::Kernel: return "kernel";
    case Command::VerifyAsymptotics: return "verify-asymptotics";
    case Command::SelftestOldforms: return "selftest-oldforms";
    case Command::Certify: return "certify";
    case Command::EffectiveBound: return "effective-bound";
  }
  return "?";
}

std::string case_name(AsymptoticCase c) {
  switch (c) {
    case AsymptoticCase::LevelOne: return "level1";
    case AsymptoticCase::PrimeSplit: return "prime_split";
    case AsymptoticCase::PrimeInert: return "prime_inert";
    case AsymptoticCase::PrimeSquareSplit: return "prime_square_split";
    case AsymptoticCase::PrimeSquareInert: return "prime_square_inert";
  }
  return "?";
}

std::string level_name(LevelArg l) {
  switch (l) {
    case LevelArg::One: return "1";
    case LevelArg::P: return "p";
    case LevelArg::P2: return "p2";
  }
  return "?";
}

const IdealClassForm& pick_class(const ClassGroup& group, std::size_t index) {
  if (index >= group.classes.size())
    throw Error(ErrorCode::ConfigError, fmt::format("class index {} out of range (h = {})", index,
                                                    group.classes.size()));
  return group.classes[index];
}

std::vector<i64> prime_list(const RunConfig& c) {
  if (c.primes) return primes_between(c.primes->lo, c.primes->hi);
  if (c.p) return {*c.p};
  throw Error(ErrorCode::ConfigError, "give --p or --primes");
}

void base_config(const RunConfig& c, Table& t) {
  t.config.emplace_back("command", command_name(c.command));
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// ---------------------------------------------------------------- classgroup

Table classgroup_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  const ClassGroup group = class_group(field);
  Table t;
  base_config(c, t);
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("h", static_cast<i64>(field.h));
  t.config.emplace_back("u", static_cast<i64>(field.u));
  t.columns = {"class", "a", "b", "c", "h", "u", "m", "r_A"};
  std::map<i64, i64> totals;
  for (std::size_t i = 0; i < group.classes.size(); ++i) {
    const auto& f = group.classes[i];
    for (i64 m = c.m.lo; m <= c.m.hi; ++m) {
      const i64 r = rep_number(f, field, m);
      totals[m] += r;
      t.rows.push_back({static_cast<i64>(i), f.a, f.b, f.c, static_cast<i64>(field.h),
                        static_cast<i64>(field.u), m, r});
    }
  }
  Check sum{"sum_over_classes_equals_ideal_count", true, ""};
  for (const auto& [m, total] : totals) {
    if (total != ideal_count(field, m)) {
      sum.passed = false;
      sum.detail = fmt::format("mismatch at m = {}", m);
      break;
    }
  }
  t.checks.push_back(sum);
  return t;
}

// ---------------------------------------------------------------- kernel

Level level_from(const RunConfig& c) {
  if (c.level == LevelArg::One) return Level{LevelKind::One, 0};
  if (!c.p) throw Error(ErrorCode::ConfigError, "--p is required for level p or p2");
  return Level{c.level == LevelArg::P ? LevelKind::Prime : LevelKind::PrimeSquare, *c.p};
}

Table kernel_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  const ClassGroup group = class_group(field);
  const IdealClassForm& form = pick_class(group, c.class_index);
  const KernelContext ctx = make_kernel_context(field, form, c.k);
  const Level level = level_from(c);
  const auto terms = divisor_terms(c.k, field, level);

  Table t;
  base_config(c, t);
  t.config.emplace_back("k", static_cast<i64>(c.k));
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("class", static_cast<i64>(c.class_index));
  t.config.emplace_back("level", level_name(c.level));
  t.config.emplace_back("p", c.p ? Cell{*c.p} : null_cell());
  t.config.emplace_back("N", level.N());
  t.config.emplace_back("tail_tol", c.tail_tol);
  t.columns = {"m", "term", "e", "nu", "weight", "branch", "raw_a", "value", "error", "tail_terms"};

  const std::size_t n = static_cast<std::size_t>(c.m.hi - c.m.lo + 1);
  const auto coeffs = parallel_map<GCoefficient>(n, c.workers, [&](std::size_t i) {
    return g_coefficient(ctx, level, c.m.lo + static_cast<i64>(i), c.tail_tol);
  });
  bool finite = true;
  for (const auto& g : coeffs) {
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const auto& ph = g.phis[j];
      t.rows.push_back({g.m, std::string("phi"), terms[j].e, terms[j].nu, num(terms[j].weight),
                        std::string(ph.branch == Branch::Split ? "split" : "inert"), num(ph.raw_a),
                        num(ph.value), num(ph.value_error), ph.tail_terms});
    }
    t.rows.push_back({g.m, std::string("g"), null_cell(), null_cell(), null_cell(), null_cell(),
                      null_cell(), num(g.value), num(g.error), null_cell()});
    finite = finite && std::isfinite(g.value) && std::isfinite(g.error);
  }
  t.checks.push_back({"coefficients_finite", finite, ""});
  return t;
}

// ---------------------------------------------------------------- verify-asymptotics

struct AsymTask {
  AsymptoticCase which;
  i64 p;
  i64 m;
};

Table asymptotics_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  const ClassGroup group = class_group(field);
  const IdealClassForm& form = pick_class(group, c.class_index);
  const KernelContext ctx = make_kernel_context(field, form, c.k);

  std::vector<AsymTask> tasks;
  for (i64 m = c.m.lo; m <= c.m.hi; ++m) tasks.push_back({AsymptoticCase::LevelOne, 0, m});
  for (i64 p : prime_list(c)) {
    const int eps = kronecker_epsilon(field, p);
    if (eps == 0) continue;
    for (i64 m = c.m.lo; m <= c.m.hi; ++m) {
      if (p <= m * field.abs_d()) continue;
      tasks.push_back({eps == 1 ? AsymptoticCase::PrimeSplit : AsymptoticCase::PrimeInert, p, m});
      tasks.push_back(
          {eps == 1 ? AsymptoticCase::PrimeSquareSplit : AsymptoticCase::PrimeSquareInert, p, m});
    }
  }

  Table t;
  base_config(c, t);
  t.config.emplace_back("k", static_cast<i64>(c.k));
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("class", static_cast<i64>(c.class_index));
  t.config.emplace_back("tail_tol", c.tail_tol);
  t.config.emplace_back("relative_tail_tol", c.relative_tail_tol);
  t.columns = {"case", "p", "m", "exact", "exact_error", "main_term", "error_bound", "residual",
               "pass", "literal_main_term", "literal_error_bound", "literal_pass"};

  struct Out {
    GCoefficient g;
    AsymptoticEstimate est;
  };
  const auto results = parallel_map<Out>(tasks.size(), c.workers, [&](std::size_t i) {
    const auto& task = tasks[i];
    const std::optional<i64> p = task.which == AsymptoticCase::LevelOne ? std::nullopt
                                                                         : std::optional<i64>(task.p);
    Out o;
    o.est = asymptotic_estimate(task.which, ctx, p, task.m);
    o.g = g_coefficient(ctx, level_for(task.which, task.p), task.m, c.tail_tol, c.relative_tail_tol);
    return o;
  });

  std::size_t fails = 0, literal_passes = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    const auto& r = results[i];
    const double residual = std::abs(r.g.value - r.est.main_term);
    const bool pass = residual + r.g.error <= r.est.error_bound;
    const bool lit_pass =
        std::abs(r.g.value - r.est.literal_main_term) + r.g.error <= r.est.literal_error_bound;
    fails += pass ? 0 : 1;
    literal_passes += lit_pass ? 1 : 0;
    t.rows.push_back({case_name(task.which),
                      task.which == AsymptoticCase::LevelOne ? null_cell() : Cell{task.p}, task.m,
                      num(r.g.value), num(r.g.error), num(r.est.main_term), num(r.est.error_bound),
                      num(residual), pass, num(r.est.literal_main_term),
                      num(r.est.literal_error_bound), lit_pass});
  }
  t.checks.push_back({"exact_within_error_bound", fails == 0,
                      fmt::format("{} of {} rows fail", fails, tasks.size())});
  t.checks.push_back({"literal_formula_within_bound", true,
                      fmt::format("{} of {} rows pass with the formulas as printed", literal_passes,
                                  tasks.size()),
                      true});
  return t;
}

// ---------------------------------------------------------------- selftest-oldforms

struct Draw {
  i64 p;
  int k;
  double a_p;
  std::optional<OriginLevel> only;  // set for rows from an eigenvalue table
};

double fd_even_derivative(const SatakeLocal& s, double L_at_k, double lambda) {
  // F(s) L(s) with L(s) = L_k exp(lambda (s - k)), central difference at s = k
  const double p = static_cast<double>(s.p);
  auto fl = [&](double x) {
    const double f = s.a_p * std::pow(p, -x) - s.a_p * std::pow(p, -2.0 * x);
    return f * L_at_k * std::exp(lambda * (x - s.k));
  };
  const double h = 1e-4;
  return (fl(s.k + h) - fl(s.k - h)) / (2.0 * h);
}

Table selftest_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  std::vector<Draw> draws;
  if (c.eigenvalues) {
    const EigenvalueTable et = ingest_eigenvalues(*c.eigenvalues);
    for (const auto& r : et.rows) {
      if (r.weight % 2 != 0 || r.weight < 2)
        throw Error(ErrorCode::ParseError, fmt::format("line {}: weight must be even", r.line));
      draws.push_back({r.p, r.weight / 2, r.a_p, r.level == 1 ? OriginLevel::One : OriginLevel::P});
    }
  } else {
    std::mt19937_64 rng(c.seed);
    const auto ps = primes_between(5, 1000);
    std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
    std::uniform_int_distribution<int> pick_k(1, 12);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < c.draws; ++i) {
      const i64 p = ps[pick(rng)];
      const int k = pick_k(rng);
      draws.push_back({p, k, unit(rng) * ramanujan_bound(p, k), std::nullopt});
    }
  }

  Table t;
  base_config(c, t);
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("draws", static_cast<i64>(draws.size()));
  t.config.emplace_back("seed", static_cast<i64>(c.seed));
  t.config.emplace_back("eigenvalues", c.eigenvalues ? Cell{*c.eigenvalues} : null_cell());
  t.columns = {"draw", "p", "k", "a_p", "ramanujan", "min_eig_level1", "min_eig_levelp",
               "residual_level1", "residual_levelp", "fp_paper_level1", "fp_solved_level1",
               "fp_paper_levelp", "fp_solved_levelp", "paper_Cp", "solved_Cp", "paper_C1",
               "solved_C1", "derived_C1", "odd_derivative", "odd_transfer", "even_derivative",
               "even_finite_difference"};

  std::size_t not_pd = 0, not_orth = 0, fp_mismatch = 0, cp_mismatch = 0, c1_paper_mismatch = 0,
              c1_derived_mismatch = 0, odd_mismatch = 0, even_mismatch = 0, singular = 0;
  double worst_c1 = 0.0;
  const double L_at_k = 1.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const Draw& d = draws[i];
    const SatakeLocal s = with_theta(satake_from_ap(d.p, d.k, d.a_p), field);
    std::vector<Cell> row{static_cast<i64>(i), d.p, static_cast<i64>(d.k), num(d.a_p), s.ramanujan};
    std::optional<OrthoBasis> o1, op;
    double eig1 = std::nan(""), eigp = std::nan("");
    for (OriginLevel lvl : {OriginLevel::One, OriginLevel::P}) {
      if (d.only && *d.only != lvl) continue;
      const GramMatrix g = gram(lvl, s);
      (lvl == OriginLevel::One ? eig1 : eigp) = smallest_eigenvalue(g);
      try {
        (lvl == OriginLevel::One ? o1 : op) = orthogonalize(g, s);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularGram) throw;
        ++singular;
      }
    }
    for (double e : {eig1, eigp})
      if (!std::isnan(e) && !(e > 0.0)) ++not_pd;
    row.push_back(num(eig1));
    row.push_back(num(eigp));
    row.push_back(o1 ? num(o1->orthogonality_residual) : null_cell());
    row.push_back(op ? num(op->orthogonality_residual) : null_cell());
    for (const auto* o : {&o1, &op}) {
      if (*o && (*o)->orthogonality_residual >= 1e-10) ++not_orth;
      if (*o && rel_diff((*o)->paper_fp_coefficient, (*o)->solved_fp_coefficient) > 1e-12)
        ++fp_mismatch;
    }
    row.push_back(o1 ? num(o1->paper_fp_coefficient) : null_cell());
    row.push_back(o1 ? num(o1->solved_fp_coefficient) : null_cell());
    row.push_back(op ? num(op->paper_fp_coefficient) : null_cell());
    row.push_back(op ? num(op->solved_fp_coefficient) : null_cell());
    if (o1) {
      if (rel_diff(*o1->paper_Cp, *o1->solved_Cp) > 1e-9) ++cp_mismatch;
      const double dc1 = rel_diff(*o1->paper_C1, *o1->solved_C1);
      worst_c1 = std::max(worst_c1, dc1);
      if (dc1 > 1e-9) ++c1_paper_mismatch;
      if (rel_diff(*o1->derived_C1, *o1->solved_C1) > 1e-9) ++c1_derived_mismatch;
      row.insert(row.end(), {num(*o1->paper_Cp), num(*o1->solved_Cp), num(*o1->paper_C1),
                             num(*o1->solved_C1), num(*o1->derived_C1)});
    } else {
      row.insert(row.end(), 5, null_cell());
    }

    const double odd = derivative_center(s, FeSign::Odd, L_at_k, field);
    const double transfer =
        euler_transfer(s, Shift::LevelPToP2)(std::pow(static_cast<double>(d.p), -d.k)) * L_at_k;
    if (odd != transfer) ++odd_mismatch;
    const double even = derivative_center(s, FeSign::Even, L_at_k, field);
    const double fd = fd_even_derivative(s, L_at_k, even_log_derivative(s, field));
    // the derivative is a difference of two terms; compare against their scale
    const double scale = std::abs(s.a_p) * std::pow(static_cast<double>(d.p), -d.k) *
                         (std::log(static_cast<double>(d.p)) + std::abs(even_log_derivative(s, field)));
    if (std::abs(even - fd) > 1e-6 * std::max(std::abs(even), scale)) ++even_mismatch;
    row.insert(row.end(), {num(odd), num(transfer), num(even), num(fd)});
    t.rows.push_back(std::move(row));
  }

  // a_p = 0 coefficient identities
  std::size_t coeff_fail = 0;
  for (i64 p : {2, 3, 5, 7, 101}) {
    for (int k = 1; k <= 6; ++k) {
      const SatakeLocal s = with_theta(satake_from_ap(p, k, 0.0), field);
      const RationalFactor f = euler_transfer(s, Shift::Level1ToP2);
      if (f.numerator.coefficient(4) != std::pow(static_cast<double>(p), 2 * k - 1)) ++coeff_fail;
      if (f.numerator.coefficient(3) != 0.0) ++coeff_fail;
    }
  }

  // level-p Gram at p = 2, 3 over the Ramanujan range
  std::size_t small_indefinite = 0, small_total = 0;
  for (i64 p : {2, 3}) {
    for (int k = 1; k <= 6; ++k) {
      for (int j = -20; j <= 20; ++j) {
        const SatakeLocal s = satake_from_ap(p, k, ramanujan_bound(p, k) * j / 20.0);
        ++small_total;
        if (!(smallest_eigenvalue(gram(OriginLevel::P, s)) > 0.0)) ++small_indefinite;
      }
    }
  }

  const auto count = [&](std::size_t bad) { return fmt::format("{} of {} draws", bad, draws.size()); };
  t.checks.push_back({"gram_positive_definite", not_pd == 0 && singular == 0,
                      fmt::format("{} nonpositive smallest eigenvalues, {} singular", not_pd, singular)});
  t.checks.push_back({"gram_schmidt_orthogonal", not_orth == 0, count(not_orth) + " above 1e-10"});
  t.checks.push_back({"fp_coefficient_paper_equals_solver", fp_mismatch == 0, count(fp_mismatch)});
  t.checks.push_back({"Cp_paper_equals_solver", cp_mismatch == 0, count(cp_mismatch)});
  t.checks.push_back({"C1_derived_equals_solver", c1_derived_mismatch == 0, count(c1_derived_mismatch)});
  t.checks.push_back({"C1_paper_vs_solver", c1_paper_mismatch == 0,
                      fmt::format("{} differ, worst relative difference {}", count(c1_paper_mismatch),
                                  format_double(worst_c1)),
                      true});
  t.checks.push_back({"odd_derivative_equals_transfer", odd_mismatch == 0, count(odd_mismatch)});
  t.checks.push_back({"even_derivative_finite_difference", even_mismatch == 0, count(even_mismatch)});
  t.checks.push_back({"c4_and_c3_at_zero_ap", coeff_fail == 0, ""});
  t.checks.push_back({"levelp_gram_at_p_2_3", small_indefinite == 0,
                      fmt::format("{} of {} Ramanujan-range a_p give an indefinite level-p Gram",
                                  small_indefinite, small_total),
                      true});
  return t;
}

// ---------------------------------------------------------------- certify

Table certify_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  const ClassGroup group = class_group(field);
  const IdealClassForm& form = pick_class(group, c.class_index);
  const KernelContext ctx = make_kernel_context(field, form, c.k);
  const DirichletValues lv = dirichlet_values(field);
  if (!check_l_log_bound(lv))
    throw Error(ErrorCode::LLogBoundFails, "|L'/L(1, eps)| exceeds log|D|");

  std::vector<i64> primes;
  for (i64 p : prime_list(c))
    if (is_prime(p) && kronecker_epsilon(field, p) != 0) primes.push_back(p);

  const auto certs = parallel_map<Certificate>(primes.size(), c.workers, [&](std::size_t i) {
    return certify_nonvanishing(ctx, lv, primes[i], c.tail_tol);
  });

  Table t;
  base_config(c, t);
  t.config.emplace_back("k", static_cast<i64>(c.k));
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("class", static_cast<i64>(c.class_index));
  t.config.emplace_back("tail_tol", c.tail_tol);
  t.config.emplace_back("log_derivative", lv.log_derivative);
  t.columns = {"p", "eps", "a1_g", "a1_g_error", "level1_bound", "levelp_bound", "oldform_total",
               "margin", "verdict", "conditionality", "shortcut_bound", "predicted_a1",
               "predicted_a1_literal", "predicted_a1_alternate", "effective_bound"};

  bool cond_ok = true, nonneg = true, verdict_ok = true, monotone = true;
  std::string mono_detail;
  std::map<int, double> last_margin;     // per splitting type, after first certified
  std::map<int, bool> seen_certified;
  for (const auto& cert : certs) {
    const double l1 = cert.bounds.at(0).bound_value;
    const double lp = cert.bounds.at(1).bound_value;
    t.rows.push_back({cert.p, static_cast<i64>(cert.eps_p), num(cert.a1_g), num(cert.a1_g_error),
                      num(l1), num(lp), num(cert.oldform_total), num(cert.margin),
                      to_string(cert.verdict), to_string(cert.conditionality),
                      num(cert.shortcut_bound), num(cert.predicted_a1),
                      num(cert.predicted_a1_literal), num(cert.predicted_a1_alternate),
                      cert.effective_bound});
    const auto want = cert.eps_p == -1 ? Conditionality::Unconditional
                                       : Conditionality::ConditionalOnNonnegativity;
    cond_ok = cond_ok && cert.conditionality == want;
    for (const auto& b : cert.bounds)
      for (const auto& comp : b.components) nonneg = nonneg && comp.value >= 0.0;
    nonneg = nonneg && l1 >= 0.0 && lp >= 0.0 && cert.a1_g_error >= 0.0;
    verdict_ok = verdict_ok && ((cert.verdict == Verdict::Certified) == (cert.margin > 0.0));
    const int type = cert.eps_p;
    if (seen_certified[type]) {
      if (!(cert.margin > last_margin[type])) {
        if (monotone) mono_detail = fmt::format("margin drops at p = {}", cert.p);
        monotone = false;
      }
      last_margin[type] = cert.margin;
    } else if (cert.verdict == Verdict::Certified) {
      seen_certified[type] = true;
      last_margin[type] = cert.margin;
    }
  }
  std::string first;
  for (int type : {1, -1}) {
    for (const auto& cert : certs) {
      if (cert.eps_p == type && cert.verdict == Verdict::Certified) {
        first += fmt::format("{}first certified p = {} (eps = {})", first.empty() ? "" : "; ", cert.p, type);
        break;
      }
    }
  }
  t.checks.push_back({"conditionality_matches_eps", cond_ok, ""});
  t.checks.push_back({"bounds_nonnegative", nonneg, ""});
  t.checks.push_back({"verdict_matches_margin", verdict_ok, ""});
  t.checks.push_back({"margin_increasing_after_first_certified", monotone,
                      monotone ? first : mono_detail});
  return t;
}

// ---------------------------------------------------------------- effective-bound

Table effective_bound_table(const RunConfig& c) {
  const FieldData field = validate_discriminant(c.D);
  std::vector<i64> ps;
  if (c.primes) {
    ps = primes_between(c.primes->lo, c.primes->hi);
  } else if (c.p) {
    ps = {*c.p};
  } else {
    throw Error(ErrorCode::ConfigError, "give --p or --primes");
  }
  const i64 threshold = 10'000 * static_cast<i64>(c.k) * field.abs_d();
  Table t;
  base_config(c, t);
  t.config.emplace_back("k", static_cast<i64>(c.k));
  t.config.emplace_back("D", c.D);
  t.config.emplace_back("threshold", threshold);
  t.columns = {"p", "k", "D", "threshold", "holds"};
  for (i64 p : ps)
    t.rows.push_back({p, static_cast<i64>(c.k), c.D, threshold, effective_bound_check(c.k, p, field)});

  bool quartic = true;
  for (double x = 1.0 + 1e-9; x < 1e15; x *= 1.37) quartic = quartic && log_quartic_inequality(x);
  t.checks.push_back({"log_x_below_4_x_quarter", quartic, "x in (1, 1e15)"});
  if (c.k >= 2) {
    t.checks.push_back({"digamma_between_0_and_log_k", digamma_inequality(c.k),
                        fmt::format("psi({}) = {}", c.k, format_double(digamma_integer(c.k)))});
  } else {
    t.checks.push_back({"digamma_between_0_and_log_k", false,
                        fmt::format("psi(1) = {} < 0; not applicable for k = 1",
                                    format_double(digamma_integer(1))),
                        true});
  }
  const DirichletValues lv = dirichlet_values(field);
  t.checks.push_back({"l_log_derivative_below_log_D", l_log_strict_inequality(lv),
                      fmt::format("L'/L(1, eps) = {}", format_double(lv.log_derivative))});
  return t;
}

// ---------------------------------------------------------------- output

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return "";
        else if constexpr (std::is_same_v<V, i64>) return std::to_string(v);
        else if constexpr (std::is_same_v<V, double>) return format_double(v);
        else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
        else return v;
      },
      cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
        else return v;
      },
      cell);
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (!(tail_tol > 0.0)) fail("--tail-tol must be positive");
  if (relative_tail_tol < 0.0) fail("--relative-tail-tol must be nonnegative");
  if (k < 1) fail("--k must be >= 1");
  if (m.lo < 1 || m.lo > m.hi) fail("--m range must satisfy 1 <= lo <= hi");
  if (primes && (primes->lo > primes->hi || primes->lo < 1)) fail("--primes range must be ordered");
  if (p && *p < 1) fail("--p must be positive");
  if (draws < 1) fail("--draws must be positive");
  if (workers < 1) fail("--workers must be positive");
}

unsigned default_workers() {
  if (const char* env = std::getenv("GZAVG_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Range parse_range(const std::string& text) {
  const auto pos = text.find("..");
  try {
    std::size_t used = 0;
    if (pos == std::string::npos) {
      const i64 v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const std::string a = text.substr(0, pos), b = text.substr(pos + 2);
    Range r;
    r.lo = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    r.hi = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    if (r.lo > r.hi) throw Error(ErrorCode::ConfigError, "range " + text + " is not ordered");
    return r;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ConfigError, "bad range '" + text + "', expected a..b");
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out) {
  CLI::App app{"Averaged Gross-Zagier kernels, oldform bounds and nonvanishing certificates", "gzavg"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.workers = default_workers();
  std::string primes, mrange, format = "csv", level;
  std::optional<double> tail_tol;

  auto common = [&](CLI::App* s) {
    s->add_option("--D", cfg.D, "fundamental discriminant (odd, negative)");
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--output", cfg.output, "output file (default stdout)");
  };
  auto kernel_opts = [&](CLI::App* s) {
    common(s);
    s->add_option("--k", cfg.k, "weight parameter (weight 2k)");
    s->add_option("--class", cfg.class_index, "ideal class index in the sorted class group");
    s->add_option("--tail-tol", tail_tol, "absolute tail truncation tolerance (kernel 1e-4, certify 1e-6)");
    s->add_option("--workers", cfg.workers, "worker threads (default $GZAVG_WORKERS or cores)");
  };

  auto* cg = app.add_subcommand("classgroup", "reduced forms, h, u and r_A(m)");
  common(cg);
  cg->add_option("--m", mrange, "m range a..b (default 1..20)");

  auto* kn = app.add_subcommand("kernel", "coefficients a_m(Phi_nu) and a_m(g)");
  kernel_opts(kn);
  kn->add_option("--p", cfg.p, "prime");
  kn->add_option("--level", level, "1, p or p2 (default p2 with --p, else 1)")
      ->check(CLI::IsMember({"1", "p", "p2"}));
  kn->add_option("--m", mrange, "m range a..b (default 1..10)");

  auto* va = app.add_subcommand("verify-asymptotics", "large-p predictions against exact coefficients");
  kernel_opts(va);
  va->add_option("--primes", primes, "prime range a..b (default 2..200)");
  va->add_option("--m", mrange, "m range a..b (default 1..5)");
  va->add_option("--relative-tail-tol", cfg.relative_tail_tol,
                 "tail tolerance relative to the summed tail bound (default 0.01)");

  auto* so = app.add_subcommand("selftest-oldforms", "Gram, orthogonality and Euler-factor properties");
  common(so);
  so->add_option("--draws", cfg.draws, "random draws (default 1000)");
  so->add_option("--seed", cfg.seed, "random seed");
  so->add_option("--eigenvalues", cfg.eigenvalues, "eigenvalue table level,weight,p,a_p");

  auto* ce = app.add_subcommand("certify", "nonvanishing certificates over a prime range");
  kernel_opts(ce);
  ce->add_option("--primes", primes, "prime range a..b");
  ce->add_option("--p", cfg.p, "single prime");

  auto* eb = app.add_subcommand("effective-bound", "the inequality p > 10^4 k |D|");
  common(eb);
  eb->add_option("--k", cfg.k, "weight parameter");
  eb->add_option("--p", cfg.p, "p (any positive integer)");
  eb->add_option("--primes", primes, "prime range a..b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, help_out, help_out);
      return std::nullopt;
    }
    throw Error(ErrorCode::ConfigError, e.what());
  }

  if (cg->parsed()) cfg.command = Command::ClassGroup;
  else if (kn->parsed()) cfg.command = Command::Kernel;
  else if (va->parsed()) cfg.command = Command::VerifyAsymptotics;
  else if (so->parsed()) cfg.command = Command::SelftestOldforms;
  else if (ce->parsed()) cfg.command = Command::Certify;
  else cfg.command = Command::EffectiveBound;

  cfg.format = format == "json" ? Format::Json : Format::Csv;
  switch (cfg.command) {
    case Command::ClassGroup: cfg.m = {1, 20}; break;
    case Command::Kernel: cfg.m = {1, 10}; break;
    case Command::VerifyAsymptotics:
      cfg.m = {1, 5};
      cfg.primes = Range{2, 200};
      break;
    default: break;
  }
  if (!mrange.empty()) cfg.m = parse_range(mrange);
  if (!primes.empty()) cfg.primes = parse_range(primes);
  if (cfg.command == Command::Kernel) {
    if (level.empty()) cfg.level = cfg.p ? LevelArg::P2 : LevelArg::One;
    else cfg.level = level == "1" ? LevelArg::One : (level == "p" ? LevelArg::P : LevelArg::P2);
  }
  if (tail_tol) cfg.tail_tol = *tail_tol;
  else if (cfg.command == Command::Certify) cfg.tail_tol = 1e-6;
  else if (cfg.command == Command::VerifyAsymptotics) cfg.tail_tol = 1e-12;
  else if (cfg.command == Command::Kernel) cfg.tail_tol = 1e-4;
  cfg.validate();
  return cfg;
}

EigenvalueTable parse_eigenvalues(std::istream& in) {
  EigenvalueTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string norm = line;
    for (char& ch : norm)
      if (ch == ',') ch = ' ';
    std::istringstream fields(norm);
    std::vector<std::string> tok;
    for (std::string s; fields >> s;) tok.push_back(s);
    if (!header) {
      if (tok != std::vector<std::string>{"level", "weight", "p", "a_p"})
        throw Error(ErrorCode::ParseError,
                    fmt::format("line {}: expected header level,weight,p,a_p", lineno));
      header = true;
      continue;
    }
    if (tok.size() != 4)
      throw Error(ErrorCode::ParseError, fmt::format("line {}: expected 4 fields", lineno));
    EigenvalueRow row;
    row.line = lineno;
    try {
      std::size_t used = 0;
      auto as_int = [&](const std::string& s) {
        const i64 v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      row.level = as_int(tok[0]);
      row.weight = static_cast<int>(as_int(tok[1]));
      row.p = as_int(tok[2]);
      row.a_p = std::stod(tok[3], &used);
      if (used != tok[3].size() || !std::isfinite(row.a_p)) throw std::invalid_argument(tok[3]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: non-numeric field", lineno));
    }
    if (!is_prime(row.p) || row.weight < 2 || row.weight % 2 != 0 ||
        (row.level != 1 && row.level != row.p))
      throw Error(ErrorCode::ParseError,
                  fmt::format("line {}: need prime p, even weight >= 2, level 1 or p", lineno));
    row.ramanujan_violation = std::abs(row.a_p) > ramanujan_bound(row.p, row.weight / 2);
    table.rows.push_back(row);
  }
  if (!header) throw Error(ErrorCode::ParseError, "line 1: missing header");
  return table;
}

EigenvalueTable ingest_eigenvalues(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_eigenvalues(in);
}

bool Table::all_passed() const {
  for (const auto& c : checks)
    if (!c.informational && !c.passed) return false;
  return true;
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += "\r\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.config) cfg[k] = cell_json(v);
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : t.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"informational", c.informational},
                      {"detail", c.detail}});
  return j.dump(2) + "\n";
}

Table build_table(const RunConfig& c) {
  switch (c.command) {
    case Command::ClassGroup: return classgroup_table(c);
    case Command::Kernel: return kernel_table(c);
    case Command::VerifyAsymptotics: return asymptotics_table(c);
    case Command::SelftestOldforms: return selftest_table(c);
    case Command::Certify: return certify_table(c);
    case Command::EffectiveBound: return effective_bound_table(c);
  }
  throw Error(ErrorCode::ConfigError, "unknown command");
}

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return kExitConfig;
    case ErrorCode::IoError: return kExitIo;
    case ErrorCode::ParseError: return kExitParse;
    default: return kExitDomain;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Table t = build_table(config);
    const std::string text = config.format == Format::Json ? to_json(t) : to_csv(t);
    if (config.output) {
      std::ofstream f(*config.output, std::ios::binary);
      if (!f) throw Error(ErrorCode::IoError, "cannot write " + *config.output);
      f << text;
      if (!f) throw Error(ErrorCode::IoError, "write failed: " + *config.output);
    } else {
      out << text;
    }
    for (const auto& c : t.checks)
      if (!c.passed)
        err << (c.informational ? "note: " : "check failed: ") << c.name
            << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    return t.all_passed() ? kExitOk : kExitChecksFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  if (!cfg) return kExitOk;
  return run(*cfg, out, err);
}

}  // namespace gzavg::cli
