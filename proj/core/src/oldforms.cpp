#include "gzavg/oldforms.hpp"

#include <algorithm>
#include <cmath>

#include "gzavg/error.hpp"
#include "gzavg/special.hpp"

namespace gzavg {

namespace {

double pw(i64 p, double e) { return std::pow(static_cast<double>(p), e); }

}  // namespace

double ramanujan_bound(i64 p, int k) { return 2.0 * pw(p, k - 0.5); }

SatakeLocal satake_from_ap(i64 p, int k, double a_p) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "weight parameter k must be >= 1");
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  SatakeLocal s;
  s.p = p;
  s.k = k;
  s.a_p = a_p;
  const double norm = pw(p, 2 * k - 1);
  const double disc = a_p * a_p - 4.0 * norm;
  if (disc <= 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    s.alpha = {0.5 * a_p, im};
    s.beta = {0.5 * a_p, -im};
  } else {
    // larger root first, the other from the product to avoid cancellation
    const double r = 0.5 * (a_p + std::copysign(std::sqrt(disc), a_p));
    s.alpha = r;
    s.beta = norm / r;
  }
  s.ramanujan = std::abs(a_p) <= ramanujan_bound(p, k) * (1.0 + 1e-15);
  return s;
}

SatakeLocal with_theta(SatakeLocal local, const FieldData& field) {
  local.gamma = 1.0;
  local.delta = static_cast<double>(kronecker_epsilon(field, local.p));
  return local;
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::coefficient(std::size_t i) const {
  return i < coefficients.size() ? coefficients[i] : 0.0;
}

RationalFactor euler_transfer(const SatakeLocal& local, Shift shift) {
  const double sum_ab = (local.alpha + local.beta).real();
  const double a = local.a_p;
  const double pk = pw(local.p, 2 * local.k - 1);
  RationalFactor f;
  switch (shift) {
    case Shift::Level1ToP:
      f.numerator.coefficients = {0.0, sum_ab, -a};
      f.denominator.coefficients = {1.0, 0.0, -pk};
      break;
    case Shift::LevelPToP2:
      f.numerator.coefficients = {0.0, sum_ab, -a};
      f.denominator.coefficients = {1.0};
      break;
    case Shift::Level1ToP2: {
      if (!local.gamma || !local.delta)
        throw Error(ErrorCode::MissingThetaParams, "level1_to_p2 needs gamma and delta");
      const auto ab = local.alpha * local.beta;
      const auto abgd = ab * *local.gamma * *local.delta;
      if (std::abs(abgd.imag()) > 1e-9 * std::max(1.0, std::abs(abgd)))
        throw Error(ErrorCode::InvalidArgument, "alpha beta gamma delta is not real");
      const double c2 = (local.alpha * local.alpha + 1.0 + local.beta * local.beta).real();
      const double c3 = sum_ab * a;
      const double c4 = pk;
      f.numerator.coefficients = {0.0, 0.0, c2, -c3, c4};
      f.denominator.coefficients = {1.0, 0.0, -abgd.real()};
      break;
    }
  }
  return f;
}

double even_log_derivative(const SatakeLocal& local, const FieldData& field) {
  return 2.0 * std::log(2.0 * kPi) -
         std::log(static_cast<double>(local.p) * static_cast<double>(field.abs_d())) -
         2.0 * digamma_integer(local.k);
}

double derivative_center(const SatakeLocal& local, FeSign fe_sign, double L_at_k,
                         const FieldData& field) {
  const double sum_ab = (local.alpha + local.beta).real();
  const double t1 = pw(local.p, -local.k);
  const double t2 = pw(local.p, -2 * local.k);
  const double factor = euler_transfer(local, Shift::LevelPToP2)(t1);
  if (fe_sign == FeSign::Odd) return factor * L_at_k;
  const double logp = std::log(static_cast<double>(local.p));
  const double dfactor = -logp * (sum_ab * t1 - 2.0 * local.a_p * t2);
  return L_at_k * (dfactor + even_log_derivative(local, field) * factor);
}

GramMatrix gram(OriginLevel origin_level, const SatakeLocal& local) {
  const double p = static_cast<double>(local.p);
  const int k = local.k;
  const double a = local.a_p;
  GramMatrix g;
  g.origin_level = origin_level;
  if (origin_level == OriginLevel::One) {
    g.entries.resize(3, 3);
    g.entries(0, 0) = p * (p + 1.0);
    g.entries(1, 0) = std::pow(p, 2.0 - 2 * k) * a;
    g.entries(1, 1) = p * (p + 1.0) * std::pow(p, -2.0 * k);
    g.entries(2, 0) = std::pow(p, 2.0 - 4 * k) * a * a - std::pow(p, 1.0 - 2 * k);
    g.entries(2, 1) = std::pow(p, 2.0 - 4 * k) * a;
    g.entries(2, 2) = std::pow(p, 1.0 - 4 * k) * (p + 1.0);
    g.entries(0, 1) = g.entries(1, 0);
    g.entries(0, 2) = g.entries(2, 0);
    g.entries(1, 2) = g.entries(2, 1);
  } else {
    g.entries.resize(2, 2);
    g.entries(0, 0) = p;
    g.entries(1, 1) = std::pow(p, 1.0 - 2 * k);
    g.entries(1, 0) = std::pow(p, 1.0 - 2 * k) * a;
    g.entries(0, 1) = g.entries(1, 0);
  }
  return g;
}

double smallest_eigenvalue(const GramMatrix& g) {
  const Eigen::VectorXd d = g.entries.diagonal();
  if ((d.array() <= 0.0).any()) return d.minCoeff();
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = s.asDiagonal() * g.entries * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

OrthoBasis orthogonalize(const GramMatrix& g, const SatakeLocal& local) {
  const Eigen::MatrixXd& G = g.entries;
  const Eigen::Index n = G.rows();
  // entries span many orders of magnitude; judge definiteness after diagonal scaling
  const Eigen::VectorXd d = G.diagonal().cwiseSqrt();
  if ((G.diagonal().array() <= 0.0).any())
    throw Error(ErrorCode::SingularGram, "Gram matrix has a nonpositive diagonal entry");
  const Eigen::MatrixXd S = d.cwiseInverse().asDiagonal() * G * d.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-13)
    throw Error(ErrorCode::SingularGram, "Gram matrix is not positive definite");

  OrthoBasis out;
  out.origin_level = g.origin_level;
  out.coefficients = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 1; j < n; ++j) {
    // raw f_j minus its projection onto span(f_0..f_{j-1}) = span(f~_0..f~_{j-1})
    const Eigen::VectorXd c = S.topLeftCorner(j, j).ldlt().solve(S.col(j).head(j));
    for (Eigen::Index i = 0; i < j; ++i) out.coefficients(j, i) = -c(i) * d(j) / d(i);
  }
  const Eigen::MatrixXd M = out.coefficients * G * out.coefficients.transpose();
  out.norms = M.diagonal();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      out.orthogonality_residual = std::max(
          out.orthogonality_residual, std::abs(M(i, j)) / std::sqrt(M(i, i) * M(j, j)));

  const double p = static_cast<double>(local.p);
  const int k = local.k;
  const double a = local.a_p;
  const double t = std::pow(p, -2.0 * k);
  out.solved_fp_coefficient = -out.coefficients(1, 0);
  if (g.origin_level == OriginLevel::P) {
    out.paper_fp_coefficient = t * a;
    return out;
  }
  out.paper_fp_coefficient = t * (p / (p + 1.0)) * a;
  out.solved_Cp = -out.coefficients(2, 1);
  out.solved_C1 = -out.coefficients(2, 0);
  const double delta = (p + 1.0) * (p + 1.0) - std::pow(p, 2.0 - 2 * k) * a * a;
  out.paper_Cp = (1.0 - 1.0 / delta) * t * a;
  out.paper_C1 = (-1.0 / delta) * std::pow(p, 1.0 - 4 * k) / (p + 1.0) * a * a - t / (p + 1.0);
  out.derived_Cp = a * std::pow(p, 1.0 - 2 * k) * ((p + 2.0) - std::pow(p, 1.0 - 2 * k) * a * a) / delta;
  out.derived_C1 = (std::pow(p, 1.0 - 4 * k) * a * a - t * (p + 1.0)) / delta;
  return out;
}

}  // namespace gzavg
