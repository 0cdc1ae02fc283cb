#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"

using namespace rgl;

namespace {

LiouvParams params3(std::int64_t L, double p, std::vector<double> eps = {-1, 0, 1},
                    double gamma = 1.0, double gamma0 = 1.0) {
  LiouvParams q;
  q.n_levels = 3;
  q.n_atoms = L;
  q.eps = std::move(eps);
  q.gamma = gamma;
  q.gamma0 = gamma0;
  q.p = p;
  return q;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool contains_real_part(const std::vector<cd>& ev, double re, double tol) {
  return std::any_of(ev.begin(), ev.end(), [&](cd l) { return std::abs(l.real() - re) <= tol; });
}

}  // namespace

TEST_CASE("stencil matches the vectorized oracle for three levels") {
  for (std::int64_t L = 1; L <= 4; ++L) {
    for (double p : {0.0, 0.3, -0.7}) {
      auto params = params3(L, p, {-0.4, 0.3, 1.1}, 1.3, 0.6);
      auto oracle = build_oracle_matrix(params);
      for (const auto& s : enumerate_sectors(params)) {
        auto m = build_sector_matrix(params, s);
        auto m3 = build_sector_matrix_su3(params, s);
        CHECK(max_abs(m.dense() - oracle.project(s)) <= 1e-12);
        CHECK(max_abs(m3.dense() - m.dense()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("stencil matches the oracle for two and four levels") {
  for (int N : {2, 4}) {
    LiouvParams q;
    q.n_levels = N;
    q.n_atoms = 3;
    q.eps.resize(N);
    for (int a = 0; a < N; ++a) q.eps[a] = 0.37 * a - 0.2 * a * a;
    q.gamma = 0.9;
    q.gamma0 = 1.4;
    q.p = 0.45;
    auto oracle = build_oracle_matrix(q);
    for (const auto& s : enumerate_sectors(q))
      CHECK(max_abs(build_sector_matrix(q, s).dense() - oracle.project(s)) <= 1e-12);
  }
}

TEST_CASE("oracle has no matrix elements between sectors") {
  auto params = params3(3, 0.4);
  auto oracle = build_oracle_matrix(params);
  CHECK(weak_symmetry_defect(oracle, 3) <= 1e-12);
  std::vector<int> owner(static_cast<std::size_t>(oracle.matrix.rows()), -1);
  auto sectors = enumerate_sectors(params);
  for (std::size_t i = 0; i < sectors.size(); ++i)
    for (auto idx : oracle.sector_indices(sectors[i])) owner[static_cast<std::size_t>(idx)] = static_cast<int>(i);
  CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
  for (int c = 0; c < oracle.matrix.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(oracle.matrix, c); it; ++it)
      if (std::abs(it.value()) > 0.0) CHECK(owner[it.row()] == owner[it.col()]);
}

TEST_CASE("oracle preserves the trace") {
  auto params = params3(3, -0.35, {0.2, -0.5, 0.9}, 1.0, 0.3);
  auto oracle = build_oracle_matrix(params);
  const auto D = oracle.single_dim();
  Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(D * D);
  for (std::int64_t i = 0; i < D; ++i) tr[i * D + i] = 1.0;
  Eigen::RowVectorXcd out = tr * Eigen::MatrixXcd(oracle.matrix);
  CHECK(out.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("a perturbed rate is detected by the oracle comparison") {
  auto params = params3(2, 0.3);
  Eigen::MatrixXd rates = restricted_rates(params);
  rates(2, 0) *= 1.0 + 1e-6;
  auto mutated = build_oracle_matrix(params, rates);
  double worst = 0.0;
  for (const auto& s : enumerate_sectors(params))
    worst = std::max(worst, max_abs(build_sector_matrix(params, s).dense() - mutated.project(s)));
  CHECK(worst > 1e-8);
}

TEST_CASE("generic rates break the closed form but keep weak symmetry") {
  auto params = params3(2, 0.3);
  Eigen::MatrixXd rates = restricted_rates(params);
  rates(1, 0) = 0.123;
  auto oracle = build_oracle_matrix(params, rates);
  CHECK(weak_symmetry_defect(oracle, 3) <= 1e-12);
}

TEST_CASE("spectrum at L = 10 contains the reference slow modes") {
  auto params = params3(10, 0.5);
  auto a = full_spectrum(build_sector_matrix(params, {1, -1, 0}));
  auto b = full_spectrum(build_sector_matrix(params, {1, 0, -1}));
  CHECK(a.eigenvalues.size() == 55);
  CHECK(contains_real_part(a.eigenvalues, -5.297, 5e-4));
  CHECK(contains_real_part(b.eigenvalues, -6.388, 5e-4));
  auto near = [](const std::vector<cd>& ev, cd target) {
    double d = 1e300;
    for (cd l : ev) d = std::min(d, std::abs(l - target));
    return d;
  };
  CHECK(near(a.eigenvalues, cd(-5.296719, 1.0)) <= 1e-6);
  CHECK(near(b.eigenvalues, cd(-6.387656, 2.0)) <= 1e-6);
}

TEST_CASE("p = 0 spectrum is organized in bands") {
  auto params = params3(6, 0.0);
  auto table = p0_band_check(params);
  CHECK(table.passed);
  CHECK(table.unmatched == 0);
  REQUIRE(table.rows.size() == 7);
  for (const auto& r : table.rows) CHECK(r.observed == r.expected);
}

TEST_CASE("conjugate sectors have conjugate spectra and nothing grows") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    auto params = params3(4, 0.9 * u(rng), {u(rng), u(rng), u(rng)}, 1.0 + 0.5 * u(rng), 1.0 + 0.5 * u(rng));
    for (const auto& s : enumerate_sectors(params)) {
      auto sp = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
      auto sn = full_spectrum(build_sector_matrix(params, s.negated())).eigenvalues;
      for (auto& l : sn) l = std::conj(l);
      CHECK(multiset_distance(sp, sn) <= 1e-9);
      for (cd l : sp) CHECK(l.real() <= 1e-9 * 16.0 * params.gamma);
    }
  }
}

TEST_CASE("steady state is a trace-normalized kernel vector") {
  auto params = params3(5, 0.25);
  auto ss = steady_state(params);
  CHECK(std::abs(ss.eigenvalue) <= 1e-9);
  CHECK_FALSE(ss.degenerate);
  CHECK(std::abs(ss.rho.sum() - 1.0) <= 1e-12);
  auto m = build_sector_matrix(params, {0, 0, 0});
  Eigen::VectorXcd r = m.entries * ss.rho;
  CHECK(r.norm() <= 1e-9);
  for (int i = 0; i < ss.rho.size(); ++i) {
    CHECK(ss.rho[i].real() >= -1e-12);
    CHECK(std::abs(ss.rho[i].imag()) <= 1e-10);
  }
}

TEST_CASE("dissipative gap scans the slow sectors") {
  auto params = params3(4, 0.5);
  auto g = dissipative_gap(params);
  CHECK(g.gap > 0.0);
  CHECK(g.sector.max_component() <= 1);
  double best = 1e300;
  for (const auto& s : enumerate_sectors(params)) {
    if (s.max_component() > 1 && !s.is_zero()) continue;
    for (cd l : full_spectrum(build_sector_matrix(params, s)).eigenvalues)
      if (std::abs(l) > 1e-9) best = std::min(best, std::abs(l.real()));
  }
  CHECK(g.gap == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("shift-invert agrees with dense diagonalization") {
  auto params = params3(12, 0.4);
  SectorLabel s{1, 0, -1};
  auto m = build_sector_matrix(params, s);
  auto dense = full_spectrum(m).eigenvalues;
  cd shift(-0.4 * 12, 2.0);
  ShiftInvertOptions opts;
  opts.tol = 1e-12;
  auto part = target_eigenvalues_near(m, shift, 6, opts);
  REQUIRE(part.eigenvalues.size() == 6);
  std::sort(dense.begin(), dense.end(),
            [&](cd a, cd b) { return std::abs(a - shift) < std::abs(b - shift); });
  std::vector<cd> want(dense.begin(), dense.begin() + 6);
  CHECK(multiset_distance(part.eigenvalues, want) <= 1e-9);
  CHECK(part.method == SpectrumMethod::shift_invert_partial);
}

TEST_CASE("dense spectrum residuals are small") {
  auto m = build_sector_matrix(params3(6, 0.3), {1, -1, 0});
  auto sp = full_spectrum(m, DenseOptions{4000, true});
  REQUIRE(sp.eigenvectors.has_value());
  for (double r : sp.residual_norms) CHECK(r <= 1e-9);
  for (std::size_t i = 1; i < sp.eigenvalues.size(); ++i)
    CHECK(sp.eigenvalues[i - 1].real() <= sp.eigenvalues[i].real());
}

TEST_CASE("integrals of motion commute and rebuild the Liouvillian") {
  for (double p : {0.3, -0.6}) {
    auto rep = integrability_check(params3(2, p, {0.3, -0.2, 0.5}, 1.0, 0.7));
    CHECK(rep.commutator <= 1e-12);
    CHECK(rep.reconstruction <= 1e-12);
  }
}

TEST_CASE("evolution conserves trace and relaxes to the steady state") {
  auto params = params3(3, 0.5);
  auto basis = enumerate_occupations(3, 3);
  const auto D = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(D, D);
  rho0(D - 1, D - 1) = 1.0;
  Eigen::MatrixXcd obs = Eigen::MatrixXcd::Zero(D, D);
  for (Eigen::Index i = 0; i < D; ++i) obs(i, i) = static_cast<double>(basis[i][0]);
  auto res = evolve_expectation(params, rho0, obs, {0.0, 0.5, 200.0});
  for (cd t : res.traces) CHECK(std::abs(t - 1.0) <= 1e-9);
  CHECK(std::abs(res.values[0] - static_cast<double>(basis[D - 1][0])) <= 1e-9);
  auto ss = steady_state(params);
  cd expect = 0.0;
  for (std::size_t i = 0; i < ss.basis.size(); ++i) expect += ss.rho[i] * static_cast<double>(ss.basis[i].k[0]);
  CHECK(std::abs(res.values[2] - expect) <= 1e-8);
}

TEST_CASE("multiset distance") {
  CHECK(multiset_distance({1.0, 2.0}, {2.0, 1.0}) == 0.0);
  CHECK(multiset_distance({1.0}, {1.0, 2.0}) == std::numeric_limits<double>::infinity());
  CHECK(multiset_distance({cd(0, 1)}, {cd(0, 1.5)}) == doctest::Approx(0.5));
}

TEST_CASE("resource limits are enforced") {
  MemoryBudget tiny{1 << 12};
  CHECK_THROWS_AS(full_spectrum(build_sector_matrix(params3(10, 0.2), {0, 0, 0}), DenseOptions{10, false}),
                  ResourceError);
  CHECK_THROWS_AS(build_oracle_matrix(params3(4, 0.2), std::nullopt, tiny), ResourceError);
  CHECK_THROWS_AS(build_sector_matrix(params3(3, 0.2), {4, -4, 0}), DomainError);
}

TEST_CASE("csv and coo writers") {
  auto m = build_sector_matrix(params3(1, 0.2), {1, -1, 0});
  std::ostringstream coo;
  write_coo(coo, m);
  CHECK(coo.str().find(' ') != std::string::npos);
  std::ostringstream csv;
  write_spectrum_csv(csv, {full_spectrum(m)}, 3);
  CHECK(csv.str().rfind("sector_s1,sector_s2,sector_s3,re,im", 0) == 0);
}
