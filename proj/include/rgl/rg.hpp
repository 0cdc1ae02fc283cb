#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgl/model.hpp"

namespace rgl {

using cd = std::complex<double>;
using VectorC = Eigen::VectorXcd;

/// Constants mapping the two-copy RG integrals onto the Liouvillian:
/// cot z = i/p on the branch where 2 g cos z = -gamma, g = gamma sqrt(1-p^2)/2,
/// chi_a = i(2a - N - 1) for a = 1..N.
struct RGMappingConstants {
  cd z;
  double g = 0.0;
  std::vector<cd> chi;
};

RGMappingConstants mapping_constants(const LiouvParams& params);

/// One solution of the RG equations. For SU(2) only `e` is used.
struct SpectralSolution {
  SectorLabel sector;
  VectorC e;
  VectorC w;
  double residual_norm = 0.0;
  cd eigenvalue{0.0, 0.0};
  LiouvParams params_snapshot;
  bool converged = false;
  int iterations = 0;
  double sensitivity = 0.0;  // ||J^{-1}|| * residual
  // SU(2) sectors with s1 < 0 are solved in the level-reversed model; the
  // sector and params_snapshot then describe that mirror image.
  bool level_reversed = false;
};

void to_json(nlohmann::json& j, const SpectralSolution& s);
void from_json(const nlohmann::json& j, SpectralSolution& s);

/// Rows "re,im,family" for plotting parameter layouts.
void write_solution_csv(std::ostream& os, const SpectralSolution& s);

// ---------------------------------------------------------------- SU(3)

/// Rational SU(3) residual; length M1 + M2 with the e-block first.
VectorC residual_su3(const VectorC& e, const VectorC& w, std::int64_t L, const SectorLabel& s,
                     double p, double collision_tol = 0.0);

/// Analytic Jacobian of residual_su3 with respect to (e, w).
Eigen::MatrixXcd jacobian_su3(const VectorC& e, const VectorC& w, std::int64_t L,
                              const SectorLabel& s, double p);

// ---------------------------------------------------------------- SU(2)

/// Rational SU(2) residual in c_i = cot E_i.
VectorC residual_su2(const VectorC& c, std::int64_t L, const SectorLabel& s, double p,
                     double collision_tol = 0.0);
Eigen::MatrixXcd jacobian_su2(const VectorC& c, std::int64_t L, const SectorLabel& s, double p);

/// Trigonometric SU(2) equations evaluated in the angle variables E_i,
/// returned as left side minus right side.
VectorC residual_su2_trig(const VectorC& E, std::int64_t L, double p);

// --------------------------------------------------------------- SU(N)

/// Trigonometric residual of the N-1 coupled families, left side minus right
/// side, grouped per family.
std::vector<VectorC> residual_sun_general(const std::vector<VectorC>& E, const LiouvParams& params,
                                          const SectorLabel& s);

// -------------------------------------------------------------- solver

struct SolveOptions {
  double tol = 0.0;             // 0 selects 1e-10 * L
  int max_iterations = 200;
  double step_cap = 0.5;        // max step relative to nearest-neighbour distance
  double collision_tol = 1e-8;  // multiplied by max(1, 1/|p|)
  double blowup = 1e6;          // |x| beyond this multiple of scale counts as divergence
};

/// Damped Newton with Armijo backtracking on ||r||^2. Dispatches on the
/// number of levels (2 or 3) of `params`.
SpectralSolution solve(const SpectralSolution& guess, const LiouvParams& params,
                       const SolveOptions& opts = {});

/// Closed-form eigenvalue for N = 2 or 3.
cd eigenvalue_from_solution(const SpectralSolution& sol, const LiouvParams& params);

/// Arc layout around the circle of radius |1 - 1/p| centred at i/p: e on an
/// outer arc, w on an inner arc, both leaving a gap around +i.
struct CircleLayout {
  double gap = 0.3;      // angular half-width of the depletion around +i
  double spread = 0.0;   // relative radial offset; 0 selects 0.5/sqrt(L)
};

SpectralSolution init_steady_state_guess(std::int64_t L, double p, const CircleLayout& layout = {});

/// Same layout for arbitrary family sizes (used for sector guesses).
SpectralSolution init_circle_guess(std::int64_t L, double p, const SectorLabel& s,
                                   const CircleLayout& layout = {});

struct ContinuationPath {
  std::vector<double> values;     // p or L along the path
  std::vector<cd> eigenvalues;
  std::vector<double> residuals;
};

/// Tracks a converged solution while moving p to target_p with adaptive steps.
SpectralSolution continue_in_p(const SpectralSolution& from, double target_p, int steps,
                               ContinuationPath* path = nullptr, const SolveOptions& opts = {});

/// Grows L one atom at a time (adds one parameter per family, seeded by
/// interpolating the current layout) up to target_L.
SpectralSolution continue_in_L(const SpectralSolution& from, std::int64_t target_L,
                               ContinuationPath* path = nullptr, const SolveOptions& opts = {});

/// Circle radius |1 - 1/p| and centre i/p.
double circle_radius(double p);
cd circle_center(double p);

// ------------------------------------------------------------ SU(2) exact

/// Every SU(2) sector solution from the polynomial (Heine-Stieltjes)
/// eigenproblem. Sectors with s1 < 0 are obtained by level reversal.
std::vector<SpectralSolution> su2_all_solutions(const LiouvParams& params, const SectorLabel& s);

/// Eigenvalues of the full N = 2 spectrum obtained from su2_all_solutions.
std::vector<cd> su2_spectrum_from_rg(const LiouvParams& params);

struct RPReport {
  double max_shift_error = 0.0;     // multiset distance after the shift
  double zero_sector_error = 0.0;   // s = 0 coincidence
  std::vector<std::pair<SectorLabel, double>> shifts;  // applied Gamma0 s1 s2
  bool passed = false;
};

/// Compares the collective-spin Liouvillian (field h, dephasing
/// sqrt(4 gamma0) S_z) with the N = 2 model sector by sector. The field is
/// mapped to eps = (h/2, -h/2).
RPReport su2_rp_relation_check(const LiouvParams& params, double tol = 1e-9);

}  // namespace rgl
