#pragma once

// Oldforms in level p^2 descended from an eigenform g of level 1 or p:
// Satake roots, Euler-factor ratios L(s, g_q x Theta)/L(s, g x Theta),
// central derivatives, Petersson Gram matrices in units of (g, g) and
// Gram-Schmidt in the raw basis (f_1, f_p[, f_{p^2}]).

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gzavg/quadratic.hpp"

namespace gzavg {

enum class OriginLevel { One, P };
enum class Shift { Level1ToP, Level1ToP2, LevelPToP2 };
enum class FeSign { Odd, Even };

struct SatakeLocal {
  i64 p = 2;
  int k = 1;
  double a_p = 0.0;
  std::complex<double> alpha;
  std::complex<double> beta;
  // theta side; only the product enters
  std::optional<std::complex<double>> gamma;
  std::optional<std::complex<double>> delta;
  bool ramanujan = true;  // |a_p| <= 2 p^{k - 1/2}
};

// Roots of X^2 - a_p X + p^{2k-1}.
SatakeLocal satake_from_ap(i64 p, int k, double a_p);

// Theta parameters with gamma * delta = eps(p): (1, 1) split, (1, -1) inert,
// (1, 0) ramified.
SatakeLocal with_theta(SatakeLocal local, const FieldData& field);

double ramanujan_bound(i64 p, int k);

// Polynomial in T = p^{-s}; coefficients[i] multiplies T^i.
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double t) const;
  double coefficient(std::size_t i) const;
};

struct RationalFactor {
  Polynomial numerator;
  Polynomial denominator;

  double operator()(double t) const { return numerator(t) / denominator(t); }
};

// Throws MissingThetaParams for Level1ToP2 when gamma or delta is unset.
RationalFactor euler_transfer(const SatakeLocal& local, Shift shift);

// L'(k, g_p x Theta). Odd: ((a+b) p^{-k} - a_p p^{-2k}) L_at_k. Even: product
// rule with L'/L(k, g x Theta) = 2 log 2pi - log(p|D|) - 2 psi(k).
double derivative_center(const SatakeLocal& local, FeSign fe_sign, double L_at_k,
                         const FieldData& field);

// L'/L(k, g x Theta) used by the even case.
double even_log_derivative(const SatakeLocal& local, const FieldData& field);

struct GramMatrix {
  OriginLevel origin_level = OriginLevel::One;
  Eigen::MatrixXd entries;  // basis (f_1, f_p, f_{p^2}) or (f_1, f_p)
};

GramMatrix gram(OriginLevel origin_level, const SatakeLocal& local);

// Smallest eigenvalue after scaling to unit diagonal; same sign pattern as
// the Gram matrix itself, whose entries span many orders of magnitude.
double smallest_eigenvalue(const GramMatrix& g);

struct OrthoBasis {
  OriginLevel origin_level = OriginLevel::One;
  // row i: tilde f_i in the raw basis (unit lower triangular)
  Eigen::MatrixXd coefficients;
  // f~_p = f_p - c f_1
  double paper_fp_coefficient = 0.0;
  double solved_fp_coefficient = 0.0;
  // f~_{p^2} = f_{p^2} - C_p f_p - C_1 f_1 (level 1 only)
  std::optional<double> paper_Cp;
  std::optional<double> paper_C1;
  std::optional<double> solved_Cp;
  std::optional<double> solved_C1;
  // closed forms obtained by solving the 2x2 normal equations symbolically
  std::optional<double> derived_Cp;
  std::optional<double> derived_C1;
  // max |(f~_i, f~_j)| / sqrt((f~_i,f~_i)(f~_j,f~_j)) over i < j
  double orthogonality_residual = 0.0;
  Eigen::VectorXd norms;  // (f~_i, f~_i)
};

// Throws SingularGram when the Gram matrix is not positive definite.
OrthoBasis orthogonalize(const GramMatrix& gram, const SatakeLocal& local);

}  // namespace gzavg
