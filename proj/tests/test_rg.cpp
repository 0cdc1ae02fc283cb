#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"
#include "rgl/rg.hpp"

using namespace rgl;

namespace {

constexpr cd I_UNIT{0.0, 1.0};

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

VectorC random_points(std::mt19937& rng, Eigen::Index n, double radius) {
  std::normal_distribution<double> g(0.0, radius);
  VectorC v(n);
  for (auto& x : v) x = cd(g(rng), g(rng));
  return v;
}

cd acot(cd c) { return std::atan(1.0 / c); }

double nearest(const std::vector<cd>& ev, cd l) {
  double d = std::numeric_limits<double>::infinity();
  for (cd x : ev) d = std::min(d, std::abs(x - l));
  return d;
}

// Relative finite-difference error of an analytic Jacobian (holomorphic
// residual, so a real step suffices).
template <class R, class J>
double jacobian_fd_error(const VectorC& x, R residual, J jacobian) {
  Eigen::MatrixXcd A = jacobian(x);
  Eigen::MatrixXcd F(A.rows(), A.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
    VectorC xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    F.col(k) = (residual(xp) - residual(xm)) / (2.0 * h);
  }
  return (A - F).norm() / std::max(1e-300, A.norm());
}

}  // namespace

TEST_CASE("mapping constants") {
  auto mc = mapping_constants(params3(5, 0.4, {0, 0, 0}, 1.7));
  CHECK(std::abs(std::cos(mc.z) / std::sin(mc.z) - I_UNIT / 0.4) <= 1e-12);
  CHECK(std::abs(2.0 * mc.g * std::cos(mc.z) + 1.7) <= 1e-12);
  CHECK(std::abs(mc.g * std::sin(mc.z) - I_UNIT * 1.7 * 0.4 / 2.0) <= 1e-12);
  REQUIRE(mc.chi.size() == 3);
  CHECK(mc.chi[0] == cd(0, -2));
  CHECK(mc.chi[2] == cd(0, 2));
  CHECK_THROWS_AS(mapping_constants(params3(5, 0.0)), DomainError);
}

TEST_CASE("SU(3) Jacobian matches finite differences") {
  std::mt19937 rng(3);
  for (auto [L, s] : {std::pair<std::int64_t, SectorLabel>{1, {0, 0, 0}}, {2, {0, 0, 0}},
                      {4, {0, 0, 0}}, {10, {0, 0, 0}}, {5, {1, 0, -1}}, {6, {-1, 2, -1}}}) {
    auto m = spectral_counts(L, s);
    for (int trial = 0; trial < 10; ++trial) {
      VectorC e = random_points(rng, m[0], 3.0), w = random_points(rng, m[1], 3.0);
      VectorC x(e.size() + w.size());
      x << e, w;
      auto res = [&](const VectorC& y) { return residual_su3(y.head(e.size()), y.tail(w.size()), L, s, 0.35); };
      auto jac = [&](const VectorC& y) { return jacobian_su3(y.head(e.size()), y.tail(w.size()), L, s, 0.35); };
      CHECK(jacobian_fd_error(x, res, jac) <= 1e-6);
    }
  }
}

TEST_CASE("SU(2) Jacobian matches finite differences") {
  std::mt19937 rng(5);
  for (auto s : {SectorLabel{0, 0}, SectorLabel{2, -2}, SectorLabel{-1, 1}}) {
    std::int64_t L = 6;
    VectorC c = random_points(rng, spectral_counts(L, s)[0], 2.0);
    auto res = [&](const VectorC& y) { return residual_su2(y, L, s, -0.6); };
    auto jac = [&](const VectorC& y) { return jacobian_su2(y, L, s, -0.6); };
    CHECK(jacobian_fd_error(c, res, jac) <= 1e-6);
  }
}

TEST_CASE("rational and trigonometric SU(2) equations are related pointwise") {
  std::mt19937 rng(9);
  for (double p : {0.3, -0.55}) {
    for (std::int64_t L : {3, 5}) {
      SectorLabel s{1, -1};
      VectorC c = random_points(rng, spectral_counts(L, s)[0], 1.5);
      VectorC E(c.size());
      for (Eigen::Index i = 0; i < c.size(); ++i) E[i] = acot(c[i]);
      VectorC rat = residual_su2(c, L, s, p);
      VectorC trig = residual_su2_trig(E, L, p);
      for (Eigen::Index i = 0; i < c.size(); ++i)
        CHECK(std::abs(rat[i] - trig[i] / (1.0 + c[i] * c[i])) <= 1e-10 * (1.0 + std::abs(rat[i])));
    }
  }
}

TEST_CASE("general SU(N) residual reduces to the SU(2) and SU(3) forms") {
  std::mt19937 rng(17);
  LiouvParams two;
  two.n_levels = 2;
  two.n_atoms = 4;
  two.eps = {0.0, 0.0};
  two.p = 0.45;
  VectorC E = random_points(rng, 4, 0.7);
  auto gen = residual_sun_general({E}, two, {0, 0});
  CHECK((gen[0] - residual_su2_trig(E, 4, 0.45)).cwiseAbs().maxCoeff() <= 1e-12);

  // A converged rational SU(3) solution solves the angle-variable equations.
  auto params = params3(4, 0.5);
  auto sol = solve(init_steady_state_guess(4, 0.5), params);
  REQUIRE(sol.converged);
  VectorC E1(sol.e.size()), E2(sol.w.size());
  for (Eigen::Index i = 0; i < E1.size(); ++i) E1[i] = acot(sol.e[i]);
  for (Eigen::Index i = 0; i < E2.size(); ++i) E2[i] = acot(sol.w[i]);
  auto r3 = residual_sun_general({E1, E2}, params, {0, 0, 0});
  CHECK(r3[0].cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(r3[1].cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("middle SU(4) family without neighbours reduces to the constant") {
  LiouvParams q;
  q.n_levels = 4;
  q.n_atoms = 2;
  q.eps = {0, 0, 0, 0};
  q.p = 0.3;
  auto r = residual_sun_general({VectorC(), VectorC::Constant(1, cd(0.4, 0.2)), VectorC()}, q, {0, 1, -1, 0});
  CHECK(std::abs(r[1][0] - 2.0 * I_UNIT) <= 1e-15);
  CHECK_THROWS_AS(residual_sun_general({VectorC()}, q, {0, 1, -1, 0}), DomainError);
}

TEST_CASE("steady state from the circle layout") {
  for (std::int64_t L : {4, 10, 40}) {
    for (double p : {0.1, 0.25, 0.5}) {
      auto sol = solve(init_steady_state_guess(L, p), params3(L, p));
      CHECK(sol.converged);
      CHECK(sol.residual_norm <= 1e-10 * static_cast<double>(L));
      CHECK(std::abs(sol.eigenvalue) <= 1e-8 * static_cast<double>(L * L));
    }
  }
}

TEST_CASE("steady-state families straddle the circle at L = 40") {
  for (double p : {0.1, 0.25, 0.5}) {
    auto sol = solve(init_steady_state_guess(40, p), params3(40, p));
    REQUIRE(sol.converged);
    const cd q = circle_center(p);
    const double R = circle_radius(p);
    double mean = 0.0;
    for (cd e : sol.e) {
      CHECK(std::abs(e - q) > R);
      mean += std::abs(e - q);
    }
    for (cd w : sol.w) {
      CHECK(std::abs(w - q) < R);
      mean += std::abs(w - q);
    }
    mean /= static_cast<double>(sol.e.size() + sol.w.size());
    CHECK(std::abs(mean - R) / R <= 0.05);
  }
}

TEST_CASE("solver is invariant under permutations of the guess") {
  auto params = params3(6, 0.4);
  auto g = init_steady_state_guess(6, 0.4);
  auto a = solve(g, params);
  std::reverse(g.e.begin(), g.e.end());
  std::reverse(g.w.begin(), g.w.end());
  auto b = solve(g, params);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.eigenvalue - b.eigenvalue) <= 1e-10);
  VectorC pe = a.e.reverse(), pw = a.w.reverse();
  VectorC r0 = residual_su3(a.e, a.w, 6, {0, 0, 0}, 0.4);
  VectorC r1 = residual_su3(pe, pw, 6, {0, 0, 0}, 0.4);
  CHECK((r0.head(6).reverse() - r1.head(6)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sector solutions reproduce exact eigenvalues at L = 10") {
  auto params = params3(10, 0.5);
  struct Case {
    SectorLabel s;
    cd expected;
  };
  for (const auto& c : {Case{{1, -1, 0}, cd(-5.296719, 1.0)}, Case{{1, 0, -1}, cd(-6.387656, 2.0)}}) {
    auto sol = solve(init_circle_guess(10, 0.5, c.s, {0.6, 0.1}), params);
    REQUIRE(sol.converged);
    auto ed = full_spectrum(build_sector_matrix(params, c.s)).eigenvalues;
    CHECK(nearest(ed, sol.eigenvalue) <= 1e-8);
    CHECK(std::abs(sol.eigenvalue - c.expected) <= 1e-6);
    // The conjugate sector carries the conjugate eigenvalue.
    auto edn = full_spectrum(build_sector_matrix(params, c.s.negated())).eigenvalues;
    CHECK(nearest(edn, std::conj(sol.eigenvalue)) <= 1e-8);
  }
}

TEST_CASE("continuation in L tracks the slow mode") {
  auto params = params3(3, 0.5);
  SectorLabel s{1, -1, 0};
  auto start = solve(init_circle_guess(3, 0.5, s, {0.6, 0.1}), params);
  REQUIRE(start.converged);
  ContinuationPath path;
  auto end = continue_in_L(start, 10, &path, {});
  CHECK(end.converged);
  CHECK(path.values.size() == 8);
  CHECK(std::abs(end.eigenvalue - cd(-5.296719, 1.0)) <= 1e-6);
  CHECK_THROWS_AS(continue_in_L(end, 5), DomainError);
}

TEST_CASE("continuation in p stays on the exact spectrum") {
  auto params = params3(8, 0.5);
  SectorLabel s{1, 0, -1};
  auto start = solve(init_circle_guess(8, 0.5, s, {0.6, 0.1}), params);
  REQUIRE(start.converged);
  ContinuationPath path;
  auto end = continue_in_p(start, 0.3, 4, &path);
  CHECK(end.converged);
  CHECK(end.params_snapshot.p == doctest::Approx(0.3));
  auto ed = full_spectrum(build_sector_matrix(params3(8, 0.3), s)).eigenvalues;
  CHECK(nearest(ed, end.eigenvalue) <= 1e-8);
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    auto edi = full_spectrum(build_sector_matrix(params3(8, path.values[i]), s)).eigenvalues;
    CHECK(nearest(edi, path.eigenvalues[i]) <= 1e-8);
  }

  auto ss = solve(init_steady_state_guess(10, 0.5), params3(10, 0.5));
  auto ss_end = continue_in_p(ss, 0.1, 4);
  CHECK(std::abs(ss_end.eigenvalue) <= 1e-6);
}

TEST_CASE("random starts only converge onto exact eigenvalues") {
  std::mt19937 rng(23);
  auto params = params3(2, 0.4, {-0.3, 0.2, 0.9}, 1.0, 0.7);
  std::size_t total = 0;
  std::set<std::pair<long long, long long>> found;
  for (const auto& s : enumerate_sectors(params)) {
    auto ed = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
    auto m = spectral_counts(2, s);
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_real_distribution<double> u(0.1, 1.2);
      SpectralSolution g = init_circle_guess(2, 0.4, s, {u(rng), 0.5 * u(rng)});
      g.e += random_points(rng, m[0], 0.8 * trial / 60.0 + 0.05);
      g.w += random_points(rng, m[1], 0.8 * trial / 60.0 + 0.05);
      SpectralSolution sol;
      try {
        sol = solve(g, params);
      } catch (const NumericError&) {
        continue;
      }
      if (!sol.converged || (sol.e.size() && sol.e.cwiseAbs().maxCoeff() > 1e3) ||
          (sol.w.size() && sol.w.cwiseAbs().maxCoeff() > 1e3))
        continue;
      CHECK(nearest(ed, sol.eigenvalue) <= 1e-7);
      found.insert({std::llround(sol.eigenvalue.real() * 1e6), std::llround(sol.eigenvalue.imag() * 1e6)});
    }
    total += ed.size();
  }
  MESSAGE("distinct eigenvalues reached from random starts: " << found.size() << " of " << total);
  CHECK(found.size() > 0);
}

TEST_CASE("solver rejects bad input") {
  auto params = params3(4, 0.5);
  auto g = init_steady_state_guess(4, 0.5);
  g.e.conservativeResize(3);
  CHECK_THROWS_AS(solve(g, params), DomainError);
  CHECK_THROWS_AS(solve(init_steady_state_guess(4, 0.5), params3(4, 0.0)), DomainError);
  CHECK_THROWS_AS(init_steady_state_guess(4, 0.0), DomainError);
  VectorC e(2);
  e << cd(1, 1), cd(1, 1);
  CHECK_THROWS_AS(residual_su3(e, VectorC(), 2, {0, -2, 2}, 0.5, 1e-8), SingularityError);
}

TEST_CASE("empty families give the closed-form eigenvalue") {
  auto params = params3(2, 0.5);
  SectorLabel s{2, 0, -2};
  auto sol = solve(init_circle_guess(2, 0.5, s), params);
  CHECK(sol.converged);
  auto ed = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
  REQUIRE(ed.size() == 1);
  CHECK(std::abs(ed[0] - sol.eigenvalue) <= 1e-12);
}

TEST_CASE("solution JSON round trip") {
  auto sol = solve(init_steady_state_guess(3, 0.25), params3(3, 0.25));
  nlohmann::json j = sol;
  auto back = j.get<SpectralSolution>();
  CHECK(back.sector == sol.sector);
  CHECK((back.e - sol.e).norm() == 0.0);
  CHECK((back.w - sol.w).norm() == 0.0);
  CHECK(back.eigenvalue == sol.eigenvalue);
  CHECK(back.params_snapshot == sol.params_snapshot);
  std::ostringstream os;
  write_solution_csv(os, sol);
  CHECK(os.str().rfind("re,im,family", 0) == 0);
}
