#pragma once

#include <array>
#include <complex>
#include <ostream>
#include <utility>
#include <vector>

#include "rgl/model.hpp"

namespace rgl {

using cd = std::complex<double>;

/// Thermodynamic-limit quasiboson picture around the condensate level eta.
struct TLPrediction {
  int condensate_level = 1;           // 1-based: 1 for p > 0, N for p < 0
  double gap_per_atom = 0.0;          // -|p| gamma
  std::vector<cd> quasiboson_rates;   // 2(N-1) entries, in rescaled units gamma = Gamma L
  bool vacuum_constant_zero = true;
};

TLPrediction tl_prediction(const LiouvParams& params);

/// Eigenrates of the 2x2 dynamical block of (c_alpha, dbar_alpha) in the
/// quadratic fluctuation Liouvillian, obtained numerically. Levels are
/// 1-based. The first entry is the e-type rate, the second the f-type rate.
std::pair<cd, cd> quadratic_block_rates(int alpha, const LiouvParams& params, int eta);

/// The 2x2 block itself (row/column order c, dbar), for inspection.
std::array<cd, 4> quadratic_block(int alpha, const LiouvParams& params, int eta);

struct GapSample {
  std::int64_t L = 0;
  double value = 0.0;  // Re(l) / L
};

/// Least-squares polynomial of order 4 in 1/L.
struct GapScalingFit {
  SectorLabel sector;
  std::vector<GapSample> samples;
  std::vector<double> coefficients;  // powers of 1/L, lowest first
  std::vector<double> stderr_;       // NaN when the fit has no residual degrees of freedom
  double residual_norm = 0.0;
  double condition_number = 0.0;     // of the centred design matrix
  int order = 4;
};

GapScalingFit gap_scaling_fit(const SectorLabel& sector, std::vector<GapSample> samples, int order = 4);

/// Two-term large-L prediction of Re(l)/L for the slow sectors (1,-1,0)
/// and (1,0,-1): -|p| gamma + (gamma / L) (+-1/2 - 3|p|/2).
double two_term_gap_prediction(const SectorLabel& sector, std::int64_t L, double p, double gamma);

struct ExtrapolationRow {
  SectorLabel sector;
  std::int64_t L = 0;
  double exact = 0.0;       // largest Re(l) in the sector
  double predicted = 0.0;   // L * two-term prediction
  double delta = 0.0;
};

/// Compares exact slow-mode real parts against the two-term expansion for
/// each L in `sizes` (sectors (1,-1,0) and (1,0,-1), N = 3, gamma0 = gamma).
std::vector<ExtrapolationRow> finite_size_extrapolation_check(const std::vector<std::int64_t>& sizes,
                                                              double p, double gamma);

/// Largest real part among eigenvalues in a sector, located with a
/// shift-invert search around the thermodynamic-limit estimate.
cd slowest_mode(const LiouvParams& params, const SectorLabel& sector);

void to_json(nlohmann::json& j, const GapScalingFit& f);
void write_gap_csv(std::ostream& os, const GapScalingFit& f);

}  // namespace rgl
