#pragma once

#include <ostream>

#include "rgl/ed.hpp"
#include "rgl/rg.hpp"

namespace rgl {

/// Unnormalized Liouvillian eigenvector built from an SU(3) RG solution.
struct BetheVector {
  SectorLabel sector;
  Eigen::VectorXcd components;  // sector basis order of enumerate_basis
  SpectralSolution source;
  double residual = -1.0;       // set by certify; negative until then
};

/// Applies the two-copy creation-operator product to the reference state
/// |L,0,0> (x) |0,0,L>. Each w-parameter either creates through K_32(w) or
/// is absorbed into one e-parameter, which then creates through K_31(w);
/// all such assignments are summed. Cost grows combinatorially with M2 and
/// is intended for L <= 3.
BetheVector build_eigenvector_su3(const SpectralSolution& sol, const LiouvParams& params);

/// ||M v - l v|| / ||v||; records the value in vec.residual.
double certify(BetheVector& vec, const SectorMatrix& matrix, cd l);

/// CSV of k_1..k_N, re, im per component.
void write_bethe_csv(std::ostream& os, const BetheVector& vec);

}  // namespace rgl
