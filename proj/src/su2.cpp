// Exact SU(2) sector solutions via the Heine-Stieltjes polynomial method.
//
// With charges Q_j at positions a_j the rational equations are the
// equilibrium conditions of the roots of a monic polynomial P of degree M
// satisfying A P'' + B P' + V P = 0, A = prod (x - a_j),
// B = A sum Q_j / (x - a_j), V linear. Fixing the leading coefficient of V
// turns this into an (M+1)-dimensional eigenproblem on monomials.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"
#include "rgl/rg.hpp"

namespace rgl {

namespace {

constexpr cd I_UNIT{0.0, 1.0};

// Coefficient vector (lowest degree first) of a product of linear factors.
std::vector<cd> poly_from_roots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (cd r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<cd> poly_add_scaled(std::vector<cd> a, const std::vector<cd>& b, cd s) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
  return a;
}

cd poly_eval(const Eigen::VectorXcd& c, cd x) {
  cd acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

cd poly_deriv_eval(const Eigen::VectorXcd& c, cd x) {
  cd acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * c[i];
  return acc;
}

Eigen::VectorXcd monic_roots(const Eigen::VectorXcd& c) {
  const Eigen::Index M = c.size() - 1;
  if (M == 0) return Eigen::VectorXcd();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(M, M);
  for (Eigen::Index i = 1; i < M; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < M; ++i) comp(i, M - 1) = -c[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  return es.eigenvalues();
}

// Solutions of a sector with s1 >= 0.
std::vector<SpectralSolution> stieltjes_sector(const LiouvParams& params, const SectorLabel& s) {
  const std::int64_t L = params.n_atoms;
  const double s1 = static_cast<double>(s[0]);
  const auto M = static_cast<Eigen::Index>(L - s[0]);
  const cd q = I_UNIT / params.p;
  const std::vector<cd> pos{I_UNIT, -I_UNIT, q};
  const std::vector<double> Q{s1 + 2.0, s1, -static_cast<double>(L)};
  const double Qsum = Q[0] + Q[1] + Q[2];

  std::vector<cd> A = poly_from_roots(pos);
  std::vector<cd> B;
  for (int j = 0; j < 3; ++j) {
    std::vector<cd> others;
    for (int k = 0; k < 3; ++k)
      if (k != j) others.push_back(pos[k]);
    B = poly_add_scaled(B, poly_from_roots(others), Q[j]);
  }
  const double Md = static_cast<double>(M);
  const cd v1 = -(Md * (Md - 1.0) + Md * Qsum);

  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  for (Eigen::Index n = 0; n <= M; ++n) {
    const double nd = static_cast<double>(n);
    // A * n(n-1) x^{n-2}
    if (n >= 2)
      for (std::size_t d = 0; d < A.size(); ++d) {
        Eigen::Index deg = n - 2 + static_cast<Eigen::Index>(d);
        if (deg <= M) T(deg, n) += nd * (nd - 1.0) * A[d];
      }
    // B * n x^{n-1}
    if (n >= 1)
      for (std::size_t d = 0; d < B.size(); ++d) {
        Eigen::Index deg = n - 1 + static_cast<Eigen::Index>(d);
        if (deg <= M) T(deg, n) += nd * B[d];
      }
    // v1 x^{n+1}
    if (n + 1 <= M) T(n + 1, n) += v1;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, true);
  if (es.info() != Eigen::Success) throw NumericError("Stieltjes eigenproblem failed");

  std::vector<SpectralSolution> out;
  const double Ld = static_cast<double>(L);
  for (Eigen::Index k = 0; k <= M; ++k) {
    Eigen::VectorXcd c = es.eigenvectors().col(k);
    if (std::abs(c[M]) < 1e-300) throw NumericError("Stieltjes eigenvector with vanishing leading term");
    c /= c[M];
    SpectralSolution sol;
    sol.sector = s;
    sol.params_snapshot = params;
    sol.e = monic_roots(c);
    // Symmetric functions straight from the coefficients, avoiding
    // ill-conditioned multiple roots.
    cd sum_c = M > 0 ? -c[M - 1] : cd(0.0);
    cd Pq = poly_eval(c, q);
    if (std::abs(Pq) == 0.0) throw SingularityError("Stieltjes polynomial vanishes at i/p");
    cd sum_f = Md * q + (1.0 / (params.p * params.p) - 1.0) * poly_deriv_eval(c, q) / Pq;
    cd l = 0.0;
    for (int a = 0; a < 2; ++a) l -= I_UNIT * params.eps[a] * static_cast<double>(s[a]);
    l -= params.gamma * (Ld * Ld + Ld);
    l += 0.5 * (params.gamma - params.gamma0) * static_cast<double>(s.sum_squares());
    l -= I_UNIT * Ld * params.gamma * params.p / 2.0 * (sum_c + sum_f);
    sol.eigenvalue = l;
    try {
      sol.residual_norm = M > 0 ? residual_su2(sol.e, L, s, params.p).cwiseAbs().maxCoeff() : 0.0;
    } catch (const SingularityError&) {
      sol.residual_norm = std::numeric_limits<double>::infinity();
    }
    sol.converged = true;
    out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace

std::vector<SpectralSolution> su2_all_solutions(const LiouvParams& params, const SectorLabel& s) {
  params.validate();
  if (params.n_levels != 2) throw DomainError("su2_all_solutions needs n_levels = 2");
  if (params.p == 0.0) throw DomainError("p = 0 has no finite RG solution; use exact diagonalization");
  validate_sector(params.n_atoms, s);
  if (s[0] >= 0) return stieltjes_sector(params, s);
  LiouvParams mirror = params;
  mirror.p = -params.p;
  mirror.eps = {params.eps[1], params.eps[0]};
  auto sols = stieltjes_sector(mirror, SectorLabel{s[1], s[0]});
  for (auto& sol : sols) sol.level_reversed = true;
  return sols;
}

std::vector<cd> su2_spectrum_from_rg(const LiouvParams& params) {
  std::vector<cd> out;
  for (const auto& s : enumerate_sectors(params))
    for (const auto& sol : su2_all_solutions(params, s)) out.push_back(sol.eigenvalue);
  return out;
}

RPReport su2_rp_relation_check(const LiouvParams& params, double tol) {
  params.validate();
  if (params.n_levels != 2) throw DomainError("su2_rp_relation_check needs n_levels = 2");
  auto basis = enumerate_occupations(2, params.n_atoms);
  SparseMatrixC K11 = ladder_matrix(basis, 0, 0), K22 = ladder_matrix(basis, 1, 1);
  SparseMatrixC Sz = 0.5 * (K22 - K11);
  SparseMatrixC Sp = ladder_matrix(basis, 1, 0), Sm = ladder_matrix(basis, 0, 1);
  const double h = params.eps[0] - params.eps[1];
  SparseMatrixC H = -h * Sz;
  SparseMatrixC Lrp = vectorized_lindbladian(
      H, {Sz, Sp, Sm},
      {4.0 * params.gamma0, params.gamma * (1.0 - params.p), params.gamma * (1.0 + params.p)});
  OracleMatrix rp;
  rp.n_levels = 2;
  rp.n_atoms = params.n_atoms;
  rp.single_basis = basis;
  rp.matrix = Lrp;

  RPReport rep;
  for (const auto& s : enumerate_sectors(params)) {
    auto a = full_spectrum(rp.project(s), s).eigenvalues;
    auto b = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
    const double shift = params.gamma0 * static_cast<double>(s[0] * s[1]);
    for (auto& v : b) v += shift;
    double d = multiset_distance(a, b);
    rep.max_shift_error = std::max(rep.max_shift_error, d);
    if (s.is_zero()) rep.zero_sector_error = d;
    rep.shifts.emplace_back(s, shift);
  }
  rep.passed = rep.max_shift_error <= tol;
  return rep;
}

}  // namespace rgl
