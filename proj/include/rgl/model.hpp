#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rgl {

using Occupation = std::vector<std::int64_t>;

/// Physical specification of one collective N-level Liouvillian.
///
/// Levels are indexed 0..N-1 in code. Jumps from level c to a higher level
/// a > c carry rate gamma*(1-p), jumps downward carry gamma*(1+p), and
/// dephasing K_aa carries gamma0.
struct LiouvParams {
  int n_levels = 3;
  std::int64_t n_atoms = 1;
  std::vector<double> eps{0.0, 0.0, 0.0};
  double gamma = 1.0;
  double gamma0 = 1.0;
  double p = 0.0;

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// Rescaled rate used by the thermodynamic-limit analysis.
  double gamma_tl() const { return gamma * static_cast<double>(n_atoms); }
  double gamma0_tl() const { return gamma0 * static_cast<double>(n_atoms); }

  bool operator==(const LiouvParams&) const = default;
};

void to_json(nlohmann::json& j, const LiouvParams& p);
/// Strict parser: unknown keys, missing keys and wrong types raise
/// ValidationError naming the field.
void from_json(const nlohmann::json& j, LiouvParams& p);

/// Weak-symmetry quantum numbers s_a = k_a - jbar_a.
struct SectorLabel {
  std::vector<std::int64_t> s;

  SectorLabel() = default;
  explicit SectorLabel(std::vector<std::int64_t> v) : s(std::move(v)) {}
  SectorLabel(std::initializer_list<std::int64_t> v) : s(v) {}

  int n_levels() const { return static_cast<int>(s.size()); }
  std::int64_t operator[](std::size_t i) const { return s[i]; }
  SectorLabel negated() const;
  std::int64_t sum_squares() const;
  std::int64_t max_component() const;
  bool is_zero() const;
  std::string str() const;

  auto operator<=>(const SectorLabel&) const = default;
};

void to_json(nlohmann::json& j, const SectorLabel& s);
void from_json(const nlohmann::json& j, SectorLabel& s);

/// One doubled-basis vector: first-copy occupations k. The second-copy
/// occupations are k - s for the owning sector.
struct SectorBasisState {
  Occupation k;
  Occupation jbar(const SectorLabel& s) const;
  bool operator==(const SectorBasisState&) const = default;
};

/// Throws DomainError unless sum(s) = 0 and |s_a| <= L.
void validate_sector(std::int64_t L, const SectorLabel& s);

/// Every non-empty sector, ordered lexicographically in (s_2, ..., s_N).
std::vector<SectorLabel> enumerate_sectors(const LiouvParams& params);

/// Number of basis states in a sector. Uses the closed form for N = 3 and
/// explicit counting otherwise.
std::int64_t sector_dimension(std::int64_t L, const SectorLabel& s);

/// Occupations k with sum L, k >= 0 and k - s >= 0, ordered
/// lexicographically in (k_2, ..., k_N).
std::vector<SectorBasisState> enumerate_basis(std::int64_t L, const SectorLabel& s);

/// Single-copy symmetric-irrep basis (all occupations with sum L), in the
/// same lexicographic order as enumerate_basis.
std::vector<Occupation> enumerate_occupations(int n_levels, std::int64_t L);

/// Binomial coefficient C(L+N-1, N-1): dimension of the symmetric irrep.
std::int64_t irrep_dimension(int n_levels, std::int64_t L);

/// M_a = L - sum_{b <= a} s_b for a = 1..N-1.
std::vector<std::int64_t> spectral_counts(std::int64_t L, const SectorLabel& s);

/// Charges (Q+^e, Q-^e, Q+^w, Q-^w) of the rational SU(3) equations.
std::array<double, 4> effective_charges(const SectorLabel& s);

/// Upper bound on the memory a single allocation may claim.
struct MemoryBudget {
  std::size_t bytes = std::size_t{4} << 30;

  /// Throws ResourceError when a dense complex n x n matrix would not fit.
  void check_dense(std::int64_t n, const std::string& what) const;
  /// Throws ResourceError when count complex entries would not fit.
  void check_entries(std::int64_t count, const std::string& what) const;
};

}  // namespace rgl
