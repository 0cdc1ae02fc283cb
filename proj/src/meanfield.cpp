#include "rgl/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"

namespace rgl {

namespace {

constexpr cd I_UNIT{0.0, 1.0};

void check_levels(int alpha, int eta, int N) {
  if (alpha < 1 || alpha > N || eta < 1 || eta > N) throw DomainError("level index out of range");
  if (alpha == eta) throw DomainError("alpha must differ from the condensate level");
}

}  // namespace

std::array<cd, 4> quadratic_block(int alpha, const LiouvParams& params, int eta) {
  params.validate();
  check_levels(alpha, eta, params.n_levels);
  const double g = params.gamma_tl();
  const double p = params.p;
  const double delta = params.eps[alpha - 1] - params.eps[eta - 1];
  // Pair-creation (cbar dbar) and pair-annihilation (c d) coefficients.
  const double create = alpha > eta ? g * (1.0 - p) : g * (1.0 + p);
  const double annihilate = alpha > eta ? g * (1.0 + p) : g * (1.0 - p);
  // Commutators [c, L0] and [dbar, L0] expressed in the (c, dbar) basis.
  return {-(I_UNIT * delta + g), cd(create), cd(-annihilate), -(I_UNIT * delta - g)};
}

std::pair<cd, cd> quadratic_block_rates(int alpha, const LiouvParams& params, int eta) {
  auto b = quadratic_block(alpha, params, eta);
  Eigen::Matrix2cd M;
  M << b[0], b[1], b[2], b[3];
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(M, true);
  if (es.info() != Eigen::Success) throw NumericError("2x2 block eigensolve failed");
  cd l0 = es.eigenvalues()[0], l1 = es.eigenvalues()[1];
  const double scale = std::max({1.0, std::abs(l0), std::abs(l1)});
  // Coalescing eigenvalues leave the block without two independent modes.
  if (std::abs(l0 - l1) <= 1e-12 * scale) throw NumericError("defective quadratic block (p = 0)");
  if (l0.real() > l1.real()) std::swap(l0, l1);
  // l0 is the annihilation-type rate of e_alpha; l1 belongs to the creation
  // partner of f_alpha, whose rate is -l1.
  return {l0, -l1};
}

TLPrediction tl_prediction(const LiouvParams& params) {
  params.validate();
  if (params.p == 0.0) throw DomainError("p = 0: the thermodynamic limit has no isolated gap");
  TLPrediction out;
  const int N = params.n_levels;
  out.condensate_level = params.p > 0 ? 1 : N;
  out.gap_per_atom = -std::abs(params.p) * params.gamma;
  for (int a = 1; a <= N; ++a) {
    if (a == out.condensate_level) continue;
    auto [e, f] = quadratic_block_rates(a, params, out.condensate_level);
    out.quasiboson_rates.push_back(e);
    out.quasiboson_rates.push_back(f);
  }
  out.vacuum_constant_zero = true;
  return out;
}

GapScalingFit gap_scaling_fit(const SectorLabel& sector, std::vector<GapSample> samples, int order) {
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.L < b.L; });
  std::set<std::int64_t> distinct;
  for (const auto& s : samples) distinct.insert(s.L);
  if (distinct.size() < 5 || static_cast<int>(distinct.size()) < order + 1)
    throw DomainError("gap scaling fit needs at least max(5, order+1) distinct sizes");
  const auto n = static_cast<Eigen::Index>(samples.size());
  const int m = order + 1;
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = 1.0 / static_cast<double>(samples[static_cast<std::size_t>(i)].L);
    y[i] = samples[static_cast<std::size_t>(i)].value;
  }
  const double xm = x.mean();
  const double xs = std::max((x.array() - xm).abs().maxCoeff(), 1e-300);
  Eigen::MatrixXd X(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    double u = (x[i] - xm) / xs, pw = 1.0;
    for (int k = 0; k < m; ++k, pw *= u) X(i, k) = pw;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  GapScalingFit out;
  out.sector = sector;
  out.samples = samples;
  out.order = order;
  out.condition_number = sv[m - 1] > 0.0 ? sv[0] / sv[m - 1] : std::numeric_limits<double>::infinity();
  if (!(sv[m - 1] > 1e-13 * sv[0])) throw NumericError("rank-deficient gap scaling design matrix");
  Eigen::VectorXd b = svd.solve(y);
  Eigen::VectorXd r = X * b - y;
  out.residual_norm = r.norm();
  const Eigen::Index dof = n - m;
  Eigen::MatrixXd cov_b = Eigen::MatrixXd::Constant(m, m, std::numeric_limits<double>::quiet_NaN());
  if (dof > 0) {
    const double sigma2 = r.squaredNorm() / static_cast<double>(dof);
    Eigen::MatrixXd Vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
    cov_b = sigma2 * Vs * Vs.transpose();
  }
  // b_k multiplies ((x - xm)/xs)^k; expand into powers of x.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      T(j, k) += binom * std::pow(-xm, k - j) / std::pow(xs, k);
    }
  }
  Eigen::VectorXd a = T * b;
  Eigen::MatrixXd cov_a = T * cov_b * T.transpose();
  for (int k = 0; k < m; ++k) {
    out.coefficients.push_back(a[k]);
    out.stderr_.push_back(dof > 0 ? std::sqrt(std::max(0.0, cov_a(k, k)))
                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

double two_term_gap_prediction(const SectorLabel& sector, std::int64_t L, double p, double gamma) {
  if (!(p > 0.0)) throw DomainError("two-term gap prediction is stated for p > 0");
  double sign;
  if (sector == SectorLabel{1, -1, 0})
    sign = 1.0;
  else if (sector == SectorLabel{1, 0, -1})
    sign = -1.0;
  else
    throw DomainError("two-term gap prediction covers sectors (1,-1,0) and (1,0,-1)");
  return -p * gamma + gamma / static_cast<double>(L) * (0.5 * sign - 1.5 * p);
}

cd slowest_mode(const LiouvParams& params, const SectorLabel& sector) {
  SectorMatrix m = build_sector_matrix(params, sector);
  cd im_part = 0.0;
  for (int a = 0; a < params.n_levels; ++a) im_part -= I_UNIT * params.eps[a] * static_cast<double>(sector[a]);
  const cd shift = -std::abs(params.p) * params.gamma * static_cast<double>(params.n_atoms) + im_part;
  const int count = static_cast<int>(std::min<std::int64_t>(6, m.dim));
  auto spec = target_eigenvalues_near(m, shift, count);
  cd best = spec.eigenvalues.front();
  for (const cd& l : spec.eigenvalues)
    if (l.real() > best.real()) best = l;
  return best;
}

std::vector<ExtrapolationRow> finite_size_extrapolation_check(const std::vector<std::int64_t>& sizes,
                                                              double p, double gamma) {
  std::vector<ExtrapolationRow> rows;
  for (std::int64_t L : sizes) {
    LiouvParams params;
    params.n_levels = 3;
    params.n_atoms = L;
    params.eps = {0.0, 0.0, 0.0};
    params.gamma = gamma;
    params.gamma0 = gamma;
    params.p = p;
    for (const SectorLabel& s : {SectorLabel{1, -1, 0}, SectorLabel{1, 0, -1}}) {
      ExtrapolationRow row;
      row.sector = s;
      row.L = L;
      row.exact = slowest_mode(params, s).real();
      row.predicted = static_cast<double>(L) * two_term_gap_prediction(s, L, p, gamma);
      row.delta = row.exact - row.predicted;
      rows.push_back(row);
    }
  }
  return rows;
}

void to_json(nlohmann::json& j, const GapScalingFit& f) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : f.samples) samples.push_back({{"L", s.L}, {"value", s.value}});
  nlohmann::json se = nlohmann::json::array();
  for (double v : f.stderr_) {
    if (std::isfinite(v))
      se.push_back(v);
    else
      se.push_back(nullptr);
  }
  j = nlohmann::json{{"sector", f.sector},
                     {"coefficients", f.coefficients},
                     {"stderr", se},
                     {"samples", samples},
                     {"residual_norm", f.residual_norm},
                     {"condition_number", f.condition_number},
                     {"order", f.order}};
}

void write_gap_csv(std::ostream& os, const GapScalingFit& f) {
  os << "L,inv_L,value,fit\n" << std::setprecision(17);
  for (const auto& s : f.samples) {
    double x = 1.0 / static_cast<double>(s.L), fit = 0.0, pw = 1.0;
    for (double c : f.coefficients) {
      fit += c * pw;
      pw *= x;
    }
    os << s.L << ',' << x << ',' << s.value << ',' << fit << '\n';
  }
}

}  // namespace rgl
