#pragma once

// Oldform contribution bounds for level p^2 and the nonvanishing certificate:
// a_1(g) against the total contribution of forms descended from levels 1 and p.

#include <optional>
#include <string>
#include <vector>

#include "gzavg/kernel.hpp"
#include "gzavg/special.hpp"

namespace gzavg {

enum class Family { Level1, LevelPSplit, LevelPInert };
enum class Verdict { Certified, NotCertified };
enum class Conditionality { Unconditional, ConditionalOnNonnegativity };

std::string to_string(Family f);
std::string to_string(Verdict v);
std::string to_string(Conditionality c);

struct BoundComponent {
  std::string name;
  double value = 0.0;
};

struct ContributionBound {
  Family family = Family::Level1;
  double bound_value = 0.0;
  std::vector<BoundComponent> components;
  double dimension_cap = 0.0;  // k/12 + 1 for level 1, unused otherwise
  i64 dimension = 0;           // newforms of weight 2k in the originating level
  double applied_cap = 0.0;    // multiplier actually used (level 1)
};

// dim S_{2k}(Gamma_0(N)) for N = 1 or N prime.
i64 cusp_form_dimension(i64 N, int k);
// Newforms of weight 2k and level N (N = 1 or prime).
i64 newform_dimension(i64 N, int k);

// 2^{4k-1} pi^{2k} / (2k-2)! |D|^{-1/2}
double average_prefactor(int k, const FieldData& field);
// 192 |D|^{3/2} (log|D| + 1)
double level1_error_bound(const FieldData& field);

ContributionBound bound_level1(int k, i64 p, const FieldData& field, const DirichletValues& l_values);
ContributionBound bound_levelp(int k, i64 p, const FieldData& field, const DirichletValues& l_values,
                               bool split);

// Same families evaluated from caller-supplied c_2/c_1 ratios, one per newform.
ContributionBound bound_level1_from_ratios(int k, i64 p, const std::vector<double>& c2_over_c1);
ContributionBound bound_levelp_from_ratios(int k, i64 p, const FieldData& field, bool split,
                                           const std::vector<double>& c2_over_c1);

struct Precondition {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Certificate {
  int k = 2;
  i64 p = 0;
  FieldData field;
  IdealClassForm form;
  int eps_p = 0;
  double a1_g = 0.0;
  double a1_g_error = 0.0;
  std::vector<ContributionBound> bounds;
  double oldform_total = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::NotCertified;
  Conditionality conditionality = Conditionality::ConditionalOnNonnegativity;
  std::vector<Precondition> preconditions_checked;
  // 2^{4k-1} pi^{2k}/(2k-2)! |D|^{-1/2} h/u
  double shortcut_bound = 0.0;
  // large-p predictions of a_1(g): normalized main term, the formula as
  // printed, and 2 pi |D|^{-1/2} h/u log p^2
  double predicted_a1 = 0.0;
  double predicted_a1_literal = 0.0;
  double predicted_a1_alternate = 0.0;
  bool effective_bound = false;  // p > 10^4 k |D|
  std::vector<std::string> notes;
};

// Throws RamifiedPrime if p | D and LLogBoundFails if |L'/L(1, eps)| > log|D|.
Certificate certify_nonvanishing(int k, i64 p, const FieldData& field, const IdealClassForm& form,
                                 double tail_tol);
Certificate certify_nonvanishing(const KernelContext& ctx, const DirichletValues& l_values, i64 p,
                                 double tail_tol);

// p > 10^4 k |D|
bool effective_bound_check(int k, i64 p, const FieldData& field);

// Inequalities used to reach the shortcut bound.
bool log_quartic_inequality(double x);         // log x < 4 x^{1/4}, x > 1
bool digamma_inequality(int k);                // 0 < psi(k) < log k
bool l_log_strict_inequality(const DirichletValues& v);  // |L'/L(1, eps)| < log|D|

}  // namespace gzavg
