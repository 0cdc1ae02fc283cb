#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rgl/bethe.hpp"
#include "support.hpp"

using namespace rgl;
using rgl::testing::params3;
using rgl::testing::sector_solutions;

namespace {

const std::vector<double> kEps{-1.0, 0.3, 1.0};

SpectralSolution steady_solution(const LiouvParams& params) {
  for (const auto& sol : sector_solutions(params, {0, 0, 0}, 10, 200, 31))
    if (std::abs(sol.eigenvalue) <= 1e-8) return sol;
  FAIL("no steady-state RG solution found");
  return {};
}

}  // namespace

TEST_CASE("constructed vectors are eigenvectors for L = 1, 2, 3") {
  for (std::int64_t L = 1; L <= 3; ++L) {
    auto params = params3(L, 0.4, kEps, 1.0, 0.7);
    int decaying = 0;
    for (const SectorLabel& s : {SectorLabel{0, 0, 0}, SectorLabel{1, -1, 0}, SectorLabel{1, 0, -1},
                                 SectorLabel{0, 1, -1}}) {
      auto matrix = build_sector_matrix(params, s);
      for (const auto& sol : sector_solutions(params, s, 2, 60, 100 + static_cast<unsigned>(L))) {
        auto vec = build_eigenvector_su3(sol, params);
        double res = certify(vec, matrix, sol.eigenvalue);
        CHECK(res <= 1e-8);
        CHECK(vec.residual == res);
        CHECK(vec.components.norm() > 0.0);
        if (sol.eigenvalue.real() < -1e-6) ++decaying;
      }
    }
    CHECK(decaying >= 1);
  }
}

TEST_CASE("steady-state vector is proportional to the exact kernel") {
  auto params = params3(3, 0.4, kEps, 1.0, 0.7);
  auto sol = steady_solution(params);
  auto vec = build_eigenvector_su3(sol, params);
  auto ss = steady_state(params);
  Eigen::VectorXcd v = vec.components / vec.components.sum();
  CHECK((v - ss.rho).norm() <= 1e-8);
}

TEST_CASE("vector direction does not depend on parameter order") {
  auto params = params3(2, 0.4, kEps, 1.0, 0.7);
  auto sols = sector_solutions(params, {0, 0, 0}, 1, 60, 7);
  REQUIRE(!sols.empty());
  auto a = build_eigenvector_su3(sols[0], params);
  auto perm = sols[0];
  perm.e.reverseInPlace();
  perm.w.reverseInPlace();
  auto b = build_eigenvector_su3(perm, params);
  cd overlap = a.components.dot(b.components);
  CHECK(std::abs(std::abs(overlap) - a.components.norm() * b.components.norm()) <=
        1e-10 * a.components.norm() * b.components.norm());
}

TEST_CASE("certification rejects non-eigenvectors") {
  auto params = params3(2, 0.4, kEps, 1.0, 0.7);
  auto sol = steady_solution(params);
  auto matrix = build_sector_matrix(params, {0, 0, 0});
  auto vec = build_eigenvector_su3(sol, params);
  vec.components = Eigen::VectorXcd::Random(vec.components.size());
  CHECK(certify(vec, matrix, sol.eigenvalue) > 1e-3);
  auto good = build_eigenvector_su3(sol, params);
  CHECK(certify(good, matrix, sol.eigenvalue + 0.1) > 1e-3);
}

TEST_CASE("input validation and CSV output") {
  auto params = params3(2, 0.4, kEps, 1.0, 0.7);
  auto sol = steady_solution(params);
  auto bad = sol;
  bad.w.conservativeResize(1);
  CHECK_THROWS_AS(build_eigenvector_su3(bad, params), DomainError);
  auto vec = build_eigenvector_su3(sol, params);
  std::ostringstream os;
  write_bethe_csv(os, vec);
  CHECK(os.str().rfind("k1,k2,k3,re,im", 0) == 0);
}
