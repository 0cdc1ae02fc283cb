#pragma once

#include <limits>
#include <random>
#include <vector>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"
#include "rgl/rg.hpp"

namespace rgl::testing {

inline LiouvParams params3(std::int64_t L, double p, std::vector<double> eps = {-1, 0, 1},
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

inline double nearest(const std::vector<cd>& ev, cd l) {
  double d = std::numeric_limits<double>::infinity();
  for (cd x : ev) d = std::min(d, std::abs(x - l));
  return d;
}

// Converged SU(3) solutions of one sector reached from jittered circle
// layouts whose eigenvalue lies within `match_tol` of the exact sector
// spectrum. Stops after `want` distinct eigenvalues.
inline std::vector<SpectralSolution> sector_solutions(const LiouvParams& params, const SectorLabel& s,
                                                      int want, int trials, unsigned seed,
                                                      double match_tol = 1e-8) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.05);
  auto ed = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
  std::vector<SpectralSolution> out;
  for (int t = 0; t < trials && static_cast<int>(out.size()) < want; ++t) {
    CircleLayout layout{0.2 + 0.8 * u(rng), 0.1 + 0.3 * u(rng)};
    SpectralSolution guess = init_circle_guess(params.n_atoms, params.p, s, layout);
    for (auto& x : guess.e) x += cd(g(rng), g(rng));
    for (auto& x : guess.w) x += cd(g(rng), g(rng));
    SpectralSolution sol;
    try {
      sol = solve(guess, params);
    } catch (const NumericError&) {
      continue;
    }
    if (!sol.converged) continue;
    if ((sol.e.size() && sol.e.cwiseAbs().maxCoeff() > 1e3) || (sol.w.size() && sol.w.cwiseAbs().maxCoeff() > 1e3))
      continue;
    if (nearest(ed, sol.eigenvalue) > match_tol) continue;
    bool dup = false;
    for (const auto& o : out) dup = dup || std::abs(o.eigenvalue - sol.eigenvalue) <= 1e-7;
    if (!dup) out.push_back(sol);
  }
  return out;
}

}  // namespace rgl::testing
