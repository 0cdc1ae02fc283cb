#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rgl/model.hpp"

namespace rgl {

using cd = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cd, Eigen::ColMajor, std::int64_t>;

enum class BuildMethod { closed_form, oracle };
enum class SpectrumMethod { dense_full, shift_invert_partial };

const char* to_string(BuildMethod m);
const char* to_string(SpectrumMethod m);

/// Liouvillian restricted to one weak-symmetry sector, in the basis order of
/// enumerate_basis.
struct SectorMatrix {
  SectorLabel sector;
  std::int64_t dim = 0;
  std::vector<SectorBasisState> basis;
  SparseMatrixC entries;
  BuildMethod build_method = BuildMethod::closed_form;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(entries); }
  /// Max absolute column sum.
  double norm1() const;
};

/// Sector matrix from the closed-form stencil: one diagonal element plus
/// the N(N-1) hopping families k -> k + e_a - e_c. Valid for any N.
SectorMatrix build_sector_matrix(const LiouvParams& params, const SectorLabel& sector,
                                 const MemoryBudget& budget = {});

/// Same stencil, restricted to three-level atoms.
SectorMatrix build_sector_matrix_su3(const LiouvParams& params, const SectorLabel& sector,
                                     const MemoryBudget& budget = {});

/// Jump-rate table x(a, c) for the operator K_ac = a_a^dagger a_c, using the
/// three-value restriction: gamma0 on the diagonal, gamma*(1-p) for a > c,
/// gamma*(1+p) for a < c.
Eigen::MatrixXd restricted_rates(const LiouvParams& params);

/// Full doubled-space Liouvillian assembled from its vectorized definition.
/// The doubled index of |k><j| is index(k) * D + index(j), with the
/// single-copy order of enumerate_occupations.
struct OracleMatrix {
  int n_levels = 0;
  std::int64_t n_atoms = 0;
  std::vector<Occupation> single_basis;
  SparseMatrixC matrix;

  std::int64_t single_dim() const { return static_cast<std::int64_t>(single_basis.size()); }
  /// Index of an occupation vector in single_basis; -1 when absent.
  std::int64_t index_of(const Occupation& k) const;
  /// Dense sub-block on the doubled states of one sector, in the order of
  /// enumerate_basis.
  Eigen::MatrixXcd project(const SectorLabel& s) const;
  /// Doubled-space indices of a sector's basis states.
  std::vector<std::int64_t> sector_indices(const SectorLabel& s) const;
};

/// Vectorized Lindblad generator -i[H, .] + sum_n rates_n D[jumps_n].
SparseMatrixC vectorized_lindbladian(const SparseMatrixC& H, const std::vector<SparseMatrixC>& jumps,
                                     const std::vector<double>& rates);

/// Brute-force builder. `rates` overrides the restricted three-value table
/// (entry (a, c) multiplies the dissipator of K_ac).
OracleMatrix build_oracle_matrix(const LiouvParams& params,
                                 const std::optional<Eigen::MatrixXd>& rates = std::nullopt,
                                 const MemoryBudget& budget = {});

/// Single-copy Schwinger-boson ladder matrix K_ac = a_a^dagger a_c on the
/// symmetric irrep.
SparseMatrixC ladder_matrix(const std::vector<Occupation>& basis, int a, int c);

struct SpectrumResult {
  SectorLabel sector;
  std::vector<cd> eigenvalues;
  std::optional<Eigen::MatrixXcd> eigenvectors;  // columns, unit 2-norm
  SpectrumMethod method = SpectrumMethod::dense_full;
  std::vector<double> residual_norms;  // ||M v - l v|| for unit v
};

struct DenseOptions {
  std::int64_t dense_limit = 4000;
  bool keep_vectors = false;
};

/// All eigenvalues, sorted ascending by (Re, Im).
SpectrumResult full_spectrum(const SectorMatrix& matrix, const DenseOptions& opts = {});
SpectrumResult full_spectrum(const Eigen::MatrixXcd& matrix, const SectorLabel& sector,
                             const DenseOptions& opts = {});

struct ShiftInvertOptions {
  double tol = 1e-8;           // residual bound relative to ||M||_1
  int subspace = 0;            // 0 selects max(20, 4 * count)
  int max_restarts = 300;
  bool keep_vectors = false;
};

/// The `count` eigenvalues closest to `shift`, sorted by distance to it.
SpectrumResult target_eigenvalues_near(const SectorMatrix& matrix, cd shift, int count,
                                       const ShiftInvertOptions& opts = {});

struct SteadyStateResult {
  cd eigenvalue;
  std::vector<SectorBasisState> basis;
  Eigen::VectorXcd rho;          // trace-normalized populations over basis
  std::vector<cd> near_zero;     // every eigenvalue within tolerance of 0
  bool degenerate = false;
};

/// Kernel vector of the s = 0 sector, normalized to unit trace.
SteadyStateResult steady_state(const LiouvParams& params, double zero_tol = 1e-9,
                               const MemoryBudget& budget = {});

struct GapResult {
  double gap = 0.0;
  SectorLabel sector;
  cd eigenvalue;
};

/// Smallest |Re l| over nonzero modes of the s = 0 sector and all sectors
/// whose largest component equals one.
GapResult dissipative_gap(const LiouvParams& params, double zero_tol = 1e-9,
                          const MemoryBudget& budget = {});

struct BandRow {
  std::int64_t lambda = 0;
  double predicted = 0.0;         // -gamma (lambda^2 + 2 lambda)
  std::int64_t expected = 0;      // (lambda + 1)^3
  std::int64_t observed = 0;
  double max_deviation = 0.0;
};

struct BandTable {
  std::vector<BandRow> rows;
  std::int64_t unmatched = 0;  // eigenvalues not assigned to any band
  bool passed = false;
};

/// p = 0 check: real parts minus (gamma - gamma0)/2 sum s^2 must equal
/// -gamma (lambda^2 + 2 lambda) with multiplicity (lambda+1)^3.
BandTable p0_band_check(const LiouvParams& params, double tol = 1e-9,
                        const MemoryBudget& budget = {});

struct EvolutionResult {
  std::vector<double> times;
  std::vector<cd> values;
  std::vector<cd> traces;
  double max_condition = 0.0;    // worst eigenvector-matrix condition number
  bool ill_conditioned = false;
};

/// Tr(O rho(t)) by sector-wise spectral decomposition. rho0 and observable
/// are D x D matrices in the single-copy occupation basis.
EvolutionResult evolve_expectation(const LiouvParams& params, const Eigen::MatrixXcd& rho0,
                                   const Eigen::MatrixXcd& observable,
                                   const std::vector<double>& times,
                                   double condition_threshold = 1e10,
                                   const MemoryBudget& budget = {});

/// Max |[S_a, L]| entry over all levels for the oracle matrix.
double weak_symmetry_defect(const OracleMatrix& oracle, int n_levels);

struct IntegrabilityReport {
  double commutator = 0.0;       // max |[R1, R2]| entry
  double reconstruction = 0.0;   // max |g sin z (R1 - R2) + L_C - L| entry
};

/// Builds the two integrals of motion of the two-copy model with the
/// Liouvillian mapping constants and compares against the oracle.
IntegrabilityReport integrability_check(const LiouvParams& params);

/// Largest pairing distance after greedily matching each element of `a`
/// to its nearest unused element of `b`; infinity on size mismatch.
double multiset_distance(const std::vector<cd>& a, const std::vector<cd>& b);

/// CSV with columns sector_s1..sN, re, im, method, residual.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumResult>& spectra,
                        int n_levels, bool header = true);

/// Coordinate list, one "row col re im" line per stored entry.
void write_coo(std::ostream& os, const SectorMatrix& m);

}  // namespace rgl
