#include "rgl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "rgl/errors.hpp"

namespace rgl {

void LiouvParams::validate() const {
  if (n_levels < 2) throw DomainError("n_levels must be >= 2");
  if (n_atoms < 1) throw DomainError("n_atoms must be >= 1");
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (!(gamma0 >= 0.0)) throw DomainError("gamma0 must be >= 0");
  if (!(std::abs(p) <= 1.0)) throw DomainError("|p| must be <= 1");
  if (eps.size() != static_cast<std::size_t>(n_levels))
    throw DomainError("eps must have exactly n_levels entries");
  for (double e : eps)
    if (!std::isfinite(e)) throw DomainError("eps entries must be finite");
}

void to_json(nlohmann::json& j, const LiouvParams& p) {
  j = nlohmann::json{{"n_levels", p.n_levels}, {"n_atoms", p.n_atoms}, {"eps", p.eps},
                     {"gamma", p.gamma},       {"gamma0", p.gamma0},   {"p", p.p}};
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer_field(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer())
    throw ValidationError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

void from_json(const nlohmann::json& j, LiouvParams& p) {
  if (!j.is_object()) throw ValidationError("parameter document must be a JSON object");
  static const std::set<std::string> known{"n_levels", "n_atoms", "eps", "gamma", "gamma0", "p"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ValidationError("unknown field '" + key + "'");
  LiouvParams out;
  out.n_levels = static_cast<int>(integer_field(j, "n_levels"));
  out.n_atoms = integer_field(j, "n_atoms");
  const auto& e = require(j, "eps");
  if (!e.is_array()) throw ValidationError("field 'eps' must be an array");
  out.eps.clear();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i].is_number())
      throw ValidationError("field 'eps[" + std::to_string(i) + "]' must be a number");
    out.eps.push_back(e[i].get<double>());
  }
  out.gamma = number_field(j, "gamma");
  out.gamma0 = number_field(j, "gamma0");
  out.p = number_field(j, "p");
  try {
    out.validate();
  } catch (const DomainError& err) {
    throw ValidationError(err.what());
  }
  p = std::move(out);
}

SectorLabel SectorLabel::negated() const {
  SectorLabel out = *this;
  for (auto& v : out.s) v = -v;
  return out;
}

std::int64_t SectorLabel::sum_squares() const {
  std::int64_t acc = 0;
  for (auto v : s) acc += v * v;
  return acc;
}

std::int64_t SectorLabel::max_component() const {
  return s.empty() ? 0 : *std::max_element(s.begin(), s.end());
}

bool SectorLabel::is_zero() const {
  return std::all_of(s.begin(), s.end(), [](auto v) { return v == 0; });
}

std::string SectorLabel::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ')';
  return os.str();
}

void to_json(nlohmann::json& j, const SectorLabel& s) { j = s.s; }
void from_json(const nlohmann::json& j, SectorLabel& s) { s.s = j.get<std::vector<std::int64_t>>(); }

Occupation SectorBasisState::jbar(const SectorLabel& s) const {
  Occupation out(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) out[a] = k[a] - s.s[a];
  return out;
}

void validate_sector(std::int64_t L, const SectorLabel& s) {
  if (s.s.size() < 2) throw DomainError("sector label needs at least two components");
  std::int64_t total = 0;
  for (auto v : s.s) {
    if (v < -L || v > L) throw DomainError("sector component out of range in " + s.str());
    total += v;
  }
  if (total != 0) throw DomainError("sector components must sum to zero: " + s.str());
}

std::vector<SectorLabel> enumerate_sectors(const LiouvParams& params) {
  params.validate();
  const int N = params.n_levels;
  const std::int64_t L = params.n_atoms;
  std::vector<SectorLabel> out;
  std::vector<std::int64_t> tail(N - 1, -L);
  // Odometer over (s_2, ..., s_N) with the last entry varying fastest.
  while (true) {
    std::int64_t rest = std::accumulate(tail.begin(), tail.end(), std::int64_t{0});
    std::int64_t s1 = -rest;
    if (s1 >= -L && s1 <= L) {
      std::int64_t positive = std::max<std::int64_t>(s1, 0);
      for (auto v : tail) positive += std::max<std::int64_t>(v, 0);
      if (positive <= L) {
        std::vector<std::int64_t> s{s1};
        s.insert(s.end(), tail.begin(), tail.end());
        out.emplace_back(std::move(s));
      }
    }
    int pos = N - 2;
    while (pos >= 0 && tail[pos] == L) tail[pos--] = -L;
    if (pos < 0) break;
    ++tail[pos];
  }
  return out;
}

namespace {

// Visits occupations with sum L and k_a >= lower_a in lexicographic order of
// (k_2, ..., k_N).
template <class F>
void visit_occupations(int N, std::int64_t L, const std::vector<std::int64_t>& lower, F&& f) {
  Occupation k(N, 0);
  std::int64_t lower_sum = std::accumulate(lower.begin(), lower.end(), std::int64_t{0});
  if (lower_sum > L) return;
  auto rec = [&](auto&& self, int a, std::int64_t used) -> void {
    if (a == N) {
      k[0] = L - used;
      if (k[0] >= lower[0]) f(k);
      return;
    }
    // Remaining lower bounds for the levels still to be filled (including 0).
    std::int64_t reserve = lower[0];
    for (int b = a + 1; b < N; ++b) reserve += lower[b];
    for (std::int64_t v = lower[a]; used + v + reserve <= L; ++v) {
      k[a] = v;
      self(self, a + 1, used + v);
    }
  };
  rec(rec, 1, 0);
}

}  // namespace

std::vector<SectorBasisState> enumerate_basis(std::int64_t L, const SectorLabel& s) {
  validate_sector(L, s);
  const int N = s.n_levels();
  std::vector<std::int64_t> lower(N);
  for (int a = 0; a < N; ++a) lower[a] = std::max<std::int64_t>(0, s.s[a]);
  std::vector<SectorBasisState> out;
  visit_occupations(N, L, lower, [&](const Occupation& k) { out.push_back({k}); });
  return out;
}

std::vector<Occupation> enumerate_occupations(int n_levels, std::int64_t L) {
  std::vector<Occupation> out;
  visit_occupations(n_levels, L, std::vector<std::int64_t>(n_levels, 0),
                    [&](const Occupation& k) { out.push_back(k); });
  return out;
}

std::int64_t irrep_dimension(int n_levels, std::int64_t L) {
  // C(L + N - 1, N - 1) evaluated incrementally; every partial product is an
  // exact binomial coefficient.
  std::int64_t r = 1;
  for (int i = 1; i < n_levels; ++i) r = r * (L + i) / i;
  return r;
}

std::int64_t sector_dimension(std::int64_t L, const SectorLabel& s) {
  validate_sector(L, s);
  if (s.n_levels() == 3) {
    std::int64_t smax = std::max({std::abs(s[1]), std::abs(s[2]), std::abs(s[1] + s[2])});
    return (L - smax + 1) * (L - smax + 2) / 2;
  }
  return static_cast<std::int64_t>(enumerate_basis(L, s).size());
}

std::vector<std::int64_t> spectral_counts(std::int64_t L, const SectorLabel& s) {
  validate_sector(L, s);
  std::vector<std::int64_t> out;
  std::int64_t partial = 0;
  for (int a = 0; a + 1 < s.n_levels(); ++a) {
    partial += s[a];
    out.push_back(L - partial);
  }
  return out;
}

std::array<double, 4> effective_charges(const SectorLabel& s) {
  if (s.n_levels() != 3) throw DomainError("effective charges are defined for N = 3 only");
  double a = 0.5 * static_cast<double>(s[0] - s[1]);
  double b = 0.5 * static_cast<double>(s[1] - s[2]);
  return {2.0 + a, a, 2.0 + b, b};
}

void MemoryBudget::check_dense(std::int64_t n, const std::string& what) const {
  long double need = static_cast<long double>(n) * static_cast<long double>(n) * 16.0L;
  if (need > static_cast<long double>(bytes))
    throw ResourceError(what + ": dense " + std::to_string(n) + "x" + std::to_string(n) +
                        " complex matrix exceeds memory budget of " + std::to_string(bytes) +
                        " bytes");
}

void MemoryBudget::check_entries(std::int64_t count, const std::string& what) const {
  long double need = static_cast<long double>(count) * 16.0L;
  if (need > static_cast<long double>(bytes))
    throw ResourceError(what + ": " + std::to_string(count) +
                        " complex entries exceed memory budget of " + std::to_string(bytes) +
                        " bytes");
}

}  // namespace rgl
