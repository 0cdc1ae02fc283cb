#include "rgl/ed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "rgl/errors.hpp"
#include "rgl/rg.hpp"

namespace rgl {

namespace {

constexpr cd I_UNIT{0.0, 1.0};

using Triplet = Eigen::Triplet<cd, std::int64_t>;

std::map<Occupation, std::int64_t> index_map(const std::vector<SectorBasisState>& basis) {
  std::map<Occupation, std::int64_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i].k, static_cast<std::int64_t>(i));
  return idx;
}

void sort_spectrum(std::vector<cd>& ev, std::vector<double>& res, Eigen::MatrixXcd* vecs) {
  std::vector<std::size_t> order(ev.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
    return ev[a].imag() < ev[b].imag();
  });
  std::vector<cd> e2;
  std::vector<double> r2;
  for (auto i : order) {
    e2.push_back(ev[i]);
    r2.push_back(res[i]);
  }
  if (vecs) {
    Eigen::MatrixXcd v2(vecs->rows(), vecs->cols());
    for (std::size_t c = 0; c < order.size(); ++c) v2.col(c) = vecs->col(order[c]);
    *vecs = std::move(v2);
  }
  ev = std::move(e2);
  res = std::move(r2);
}

}  // namespace

const char* to_string(BuildMethod m) { return m == BuildMethod::oracle ? "oracle" : "closed_form"; }
const char* to_string(SpectrumMethod m) {
  return m == SpectrumMethod::dense_full ? "dense_full" : "shift_invert_partial";
}

double SectorMatrix::norm1() const {
  double best = 0.0;
  for (std::int64_t c = 0; c < entries.outerSize(); ++c) {
    double acc = 0.0;
    for (SparseMatrixC::InnerIterator it(entries, c); it; ++it) acc += std::abs(it.value());
    best = std::max(best, acc);
  }
  return best;
}

Eigen::MatrixXd restricted_rates(const LiouvParams& params) {
  const int N = params.n_levels;
  Eigen::MatrixXd x(N, N);
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c)
      x(a, c) = a == c ? params.gamma0
                       : (a > c ? params.gamma * (1.0 - params.p) : params.gamma * (1.0 + params.p));
  return x;
}

SectorMatrix build_sector_matrix(const LiouvParams& params, const SectorLabel& sector,
                                 const MemoryBudget& budget) {
  params.validate();
  if (sector.n_levels() != params.n_levels)
    throw DomainError("sector " + sector.str() + " does not match n_levels");
  const int N = params.n_levels;
  const std::int64_t L = params.n_atoms;
  SectorMatrix out;
  out.sector = sector;
  out.basis = enumerate_basis(L, sector);
  out.dim = static_cast<std::int64_t>(out.basis.size());
  out.build_method = BuildMethod::closed_form;
  budget.check_entries(out.dim * (1 + N * (N - 1)), "sector " + sector.str());

  const Eigen::MatrixXd x = restricted_rates(params);
  const double G = params.gamma, G0 = params.gamma0, p = params.p;
  const double Ld = static_cast<double>(L);
  cd constant = -G * (Ld * Ld + (N - 1) * Ld) - 0.5 * G0 * static_cast<double>(sector.sum_squares());
  for (int a = 0; a < N; ++a) constant += -I_UNIT * params.eps[a] * static_cast<double>(sector[a]);

  auto idx = index_map(out.basis);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(out.dim) * (1 + N * (N - 1)));
  Occupation target;
  for (std::int64_t col = 0; col < out.dim; ++col) {
    const Occupation& k = out.basis[col].k;
    Occupation j = out.basis[col].jbar(sector);
    double diag = 0.0;
    for (int a = 0; a < N; ++a) {
      double ka = static_cast<double>(k[a]), ja = static_cast<double>(j[a]);
      diag += 0.5 * G * (ka * ka + ja * ja);
      diag -= 0.5 * G * p * static_cast<double>(2 * (a + 1) - N - 1) * (ka + ja);
    }
    trip.emplace_back(col, col, constant + diag);
    for (int c = 0; c < N; ++c) {
      if (k[c] == 0 || j[c] == 0) continue;
      for (int a = 0; a < N; ++a) {
        if (a == c) continue;
        target = k;
        --target[c];
        ++target[a];
        auto it = idx.find(target);
        if (it == idx.end()) continue;
        double amp = std::sqrt(static_cast<double>(k[c]) * static_cast<double>(k[a] + 1) *
                               static_cast<double>(j[c]) * static_cast<double>(j[a] + 1));
        trip.emplace_back(it->second, col, x(a, c) * amp);
      }
    }
  }
  out.entries.resize(out.dim, out.dim);
  out.entries.setFromTriplets(trip.begin(), trip.end());
  out.entries.makeCompressed();
  return out;
}

SectorMatrix build_sector_matrix_su3(const LiouvParams& params, const SectorLabel& sector,
                                     const MemoryBudget& budget) {
  if (params.n_levels != 3) throw DomainError("build_sector_matrix_su3 requires n_levels = 3");
  return build_sector_matrix(params, sector, budget);
}

SparseMatrixC ladder_matrix(const std::vector<Occupation>& basis, int a, int c) {
  std::map<Occupation, std::int64_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], static_cast<std::int64_t>(i));
  const auto D = static_cast<std::int64_t>(basis.size());
  std::vector<Triplet> trip;
  for (std::int64_t col = 0; col < D; ++col) {
    const Occupation& k = basis[col];
    if (a == c) {
      if (k[a] != 0) trip.emplace_back(col, col, static_cast<double>(k[a]));
      continue;
    }
    if (k[c] == 0) continue;
    Occupation t = k;
    --t[c];
    ++t[a];
    trip.emplace_back(idx.at(t), col,
                      std::sqrt(static_cast<double>(k[c]) * static_cast<double>(k[a] + 1)));
  }
  SparseMatrixC m(D, D);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

std::int64_t OracleMatrix::index_of(const Occupation& k) const {
  for (std::size_t i = 0; i < single_basis.size(); ++i)
    if (single_basis[i] == k) return static_cast<std::int64_t>(i);
  return -1;
}

std::vector<std::int64_t> OracleMatrix::sector_indices(const SectorLabel& s) const {
  auto basis = enumerate_basis(n_atoms, s);
  const std::int64_t D = single_dim();
  std::vector<std::int64_t> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(index_of(b.k) * D + index_of(b.jbar(s)));
  return out;
}

Eigen::MatrixXcd OracleMatrix::project(const SectorLabel& s) const {
  auto ids = sector_indices(s);
  const auto n = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(matrix);
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = dense(ids[r], ids[c]);
  return out;
}

SparseMatrixC vectorized_lindbladian(const SparseMatrixC& H, const std::vector<SparseMatrixC>& jumps,
                                     const std::vector<double>& rates) {
  const std::int64_t D = H.rows();
  SparseMatrixC id(D, D);
  id.setIdentity();
  SparseMatrixC HT = H.transpose();
  SparseMatrixC Lm = -I_UNIT * (SparseMatrixC(Eigen::kroneckerProduct(H, id)) -
                                SparseMatrixC(Eigen::kroneckerProduct(id, HT)));
  for (std::size_t n = 0; n < jumps.size(); ++n) {
    const SparseMatrixC& W = jumps[n];
    SparseMatrixC Wc = W.conjugate();
    SparseMatrixC WdW = SparseMatrixC(W.adjoint()) * W;
    SparseMatrixC WdWT = WdW.transpose();
    SparseMatrixC term = SparseMatrixC(Eigen::kroneckerProduct(W, Wc)) -
                         0.5 * SparseMatrixC(Eigen::kroneckerProduct(WdW, id)) -
                         0.5 * SparseMatrixC(Eigen::kroneckerProduct(id, WdWT));
    Lm += rates[n] * term;
  }
  return Lm;
}

OracleMatrix build_oracle_matrix(const LiouvParams& params, const std::optional<Eigen::MatrixXd>& rates,
                                 const MemoryBudget& budget) {
  params.validate();
  const int N = params.n_levels;
  OracleMatrix out;
  out.n_levels = N;
  out.n_atoms = params.n_atoms;
  out.single_basis = enumerate_occupations(N, params.n_atoms);
  const std::int64_t D = out.single_dim();
  budget.check_entries(D * D * (2 * N * N + 1), "oracle");
  const Eigen::MatrixXd x = rates ? *rates : restricted_rates(params);
  if (x.rows() != N || x.cols() != N) throw DomainError("rate table must be n_levels x n_levels");

  SparseMatrixC H(D, D);
  std::vector<std::vector<SparseMatrixC>> K(N, std::vector<SparseMatrixC>(N));
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) K[a][c] = ladder_matrix(out.single_basis, a, c);
  for (int a = 0; a < N; ++a) H += params.eps[a] * K[a][a];

  std::vector<SparseMatrixC> jumps;
  std::vector<double> r;
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) {
      if (x(a, c) == 0.0) continue;
      jumps.push_back(K[a][c]);
      r.push_back(x(a, c));
    }
  SparseMatrixC Lm = vectorized_lindbladian(H, jumps, r);
  Lm.prune(cd(0.0, 0.0));
  Lm.makeCompressed();
  out.matrix = std::move(Lm);
  return out;
}

SpectrumResult full_spectrum(const Eigen::MatrixXcd& matrix, const SectorLabel& sector,
                             const DenseOptions& opts) {
  if (matrix.rows() > opts.dense_limit)
    throw ResourceError("sector " + sector.str() + " dimension " + std::to_string(matrix.rows()) +
                        " exceeds dense limit " + std::to_string(opts.dense_limit));
  SpectrumResult out;
  out.sector = sector;
  out.method = SpectrumMethod::dense_full;
  if (matrix.rows() == 0) return out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(matrix, true);
  if (es.info() != Eigen::Success) {
    throw NumericError("dense eigensolver failed for sector " + sector.str() + " (dim " +
                       std::to_string(matrix.rows()) + ", ||M||_F = " +
                       std::to_string(matrix.norm()) + ")");
  }
  Eigen::MatrixXcd V = es.eigenvectors();
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    V.col(i).normalize();
    out.eigenvalues.push_back(ev[i]);
    out.residual_norms.push_back((matrix * V.col(i) - ev[i] * V.col(i)).norm());
  }
  sort_spectrum(out.eigenvalues, out.residual_norms, opts.keep_vectors ? &V : nullptr);
  if (opts.keep_vectors) out.eigenvectors = std::move(V);
  return out;
}

SpectrumResult full_spectrum(const SectorMatrix& matrix, const DenseOptions& opts) {
  if (matrix.dim > opts.dense_limit)
    throw ResourceError("sector " + matrix.sector.str() + " dimension " +
                        std::to_string(matrix.dim) + " exceeds dense limit " +
                        std::to_string(opts.dense_limit));
  return full_spectrum(matrix.dense(), matrix.sector, opts);
}

constexpr std::int64_t kSteadyDenseLimit = 300;

SteadyStateResult steady_state(const LiouvParams& params, double zero_tol, const MemoryBudget& budget) {
  SectorLabel zero(std::vector<std::int64_t>(params.n_levels, 0));
  SectorMatrix m = build_sector_matrix(params, zero, budget);
  const double scale = std::max(1.0, m.norm1());
  SpectrumResult spec;
  // Only the kernel vector is needed, so dense diagonalization is kept for
  // small sectors where it is cheaper than factorizing.
  if (m.dim <= kSteadyDenseLimit) {
    budget.check_dense(m.dim, "steady state");
    spec = full_spectrum(m, DenseOptions{.keep_vectors = true});
  } else {
    spec = target_eigenvalues_near(m, cd(-1e-3 * params.gamma, 0.0), 4,
                                   ShiftInvertOptions{.tol = 1e-12, .keep_vectors = true});
  }
  SteadyStateResult out;
  out.basis = m.basis;
  std::size_t best = 0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (std::abs(spec.eigenvalues[i]) < std::abs(spec.eigenvalues[best])) best = i;
    if (std::abs(spec.eigenvalues[i]) <= zero_tol * scale) out.near_zero.push_back(spec.eigenvalues[i]);
  }
  out.degenerate = out.near_zero.size() > 1;
  out.eigenvalue = spec.eigenvalues[best];
  Eigen::VectorXcd v = spec.eigenvectors->col(static_cast<Eigen::Index>(best));
  // In the s = 0 sector every basis state is diagonal (jbar = k).
  cd trace = v.sum();
  if (std::abs(trace) == 0.0) throw NumericError("steady-state vector has zero trace");
  out.rho = v / trace;
  return out;
}

GapResult dissipative_gap(const LiouvParams& params, double zero_tol, const MemoryBudget& budget) {
  GapResult out;
  out.gap = std::numeric_limits<double>::infinity();
  for (const auto& s : enumerate_sectors(params)) {
    if (!(s.is_zero() || s.max_component() == 1)) continue;
    SectorMatrix m = build_sector_matrix(params, s, budget);
    const double scale = std::max(1.0, m.norm1());
    SpectrumResult spec;
    if (m.dim <= DenseOptions{}.dense_limit) {
      budget.check_dense(m.dim, "gap search");
      spec = full_spectrum(m);
    } else {
      const double guess = -std::abs(params.p) * params.gamma * static_cast<double>(params.n_atoms);
      spec = target_eigenvalues_near(m, cd(guess, 0.0), 8);
    }
    for (const cd& l : spec.eigenvalues) {
      if (std::abs(l) <= zero_tol * scale) continue;
      double g = std::abs(l.real());
      if (g < out.gap - 1e-9 * scale) {
        out.gap = g;
        out.sector = s;
        out.eigenvalue = l;
      }
    }
  }
  return out;
}

BandTable p0_band_check(const LiouvParams& params, double tol, const MemoryBudget& budget) {
  if (params.n_levels != 3) throw DomainError("p0_band_check requires n_levels = 3");
  if (params.p != 0.0) throw DomainError("p0_band_check requires p = 0");
  const std::int64_t L = params.n_atoms;
  BandTable table;
  for (std::int64_t lam = 0; lam <= L; ++lam) {
    BandRow row;
    row.lambda = lam;
    row.predicted = -params.gamma * static_cast<double>(lam * lam + 2 * lam);
    row.expected = (lam + 1) * (lam + 1) * (lam + 1);
    table.rows.push_back(row);
  }
  for (const auto& s : enumerate_sectors(params)) {
    SectorMatrix m = build_sector_matrix(params, s, budget);
    budget.check_dense(m.dim, "band check");
    auto spec = full_spectrum(m);
    const double offset = 0.5 * (params.gamma - params.gamma0) * static_cast<double>(s.sum_squares());
    for (const cd& l : spec.eigenvalues) {
      double r = l.real() - offset;
      double lam_real = -1.0 + std::sqrt(std::max(0.0, 1.0 - r / params.gamma));
      auto lam = static_cast<std::int64_t>(std::llround(lam_real));
      if (lam < 0 || lam > L) {
        ++table.unmatched;
        continue;
      }
      auto& row = table.rows[static_cast<std::size_t>(lam)];
      double dev = std::abs(r - row.predicted);
      if (dev > tol) {
        ++table.unmatched;
        continue;
      }
      ++row.observed;
      row.max_deviation = std::max(row.max_deviation, dev);
    }
  }
  table.passed = table.unmatched == 0;
  for (const auto& row : table.rows)
    if (row.observed != row.expected) table.passed = false;
  return table;
}

EvolutionResult evolve_expectation(const LiouvParams& params, const Eigen::MatrixXcd& rho0,
                                   const Eigen::MatrixXcd& observable, const std::vector<double>& times,
                                   double condition_threshold, const MemoryBudget& budget) {
  auto single = enumerate_occupations(params.n_levels, params.n_atoms);
  const auto D = static_cast<Eigen::Index>(single.size());
  if (rho0.rows() != D || rho0.cols() != D || observable.rows() != D || observable.cols() != D)
    throw DomainError("rho0 and observable must be " + std::to_string(D) + "x" + std::to_string(D));
  std::map<Occupation, Eigen::Index> idx;
  for (Eigen::Index i = 0; i < D; ++i) idx.emplace(single[static_cast<std::size_t>(i)], i);

  EvolutionResult out;
  out.times = times;
  out.values.assign(times.size(), cd(0.0, 0.0));
  out.traces.assign(times.size(), cd(0.0, 0.0));
  for (const auto& s : enumerate_sectors(params)) {
    auto basis = enumerate_basis(params.n_atoms, s);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd v0(n), w(n), tr(n);
    for (Eigen::Index b = 0; b < n; ++b) {
      Eigen::Index ik = idx.at(basis[b].k), ij = idx.at(basis[b].jbar(s));
      v0[b] = rho0(ik, ij);
      w[b] = observable(ij, ik);
      tr[b] = ik == ij ? 1.0 : 0.0;
    }
    if (v0.cwiseAbs().maxCoeff() == 0.0) continue;
    SectorMatrix m = build_sector_matrix(params, s, budget);
    budget.check_dense(m.dim, "evolution");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.dense(), true);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in sector " + s.str());
    const Eigen::MatrixXcd& V = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    const auto& sv = svd.singularValues();
    double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                          : std::numeric_limits<double>::infinity();
    out.max_condition = std::max(out.max_condition, cond);
    Eigen::VectorXcd c = V.partialPivLu().solve(v0);
    Eigen::RowVectorXcd wv = w.transpose() * V;
    Eigen::RowVectorXcd tv = tr.transpose() * V;
    const auto& lam = es.eigenvalues();
    for (std::size_t t = 0; t < times.size(); ++t) {
      for (Eigen::Index q = 0; q < n; ++q) {
        cd amp = std::exp(lam[q] * times[t]) * c[q];
        out.values[t] += wv[q] * amp;
        out.traces[t] += tv[q] * amp;
      }
    }
  }
  out.ill_conditioned = out.max_condition > condition_threshold;
  return out;
}

double weak_symmetry_defect(const OracleMatrix& oracle, int n_levels) {
  const std::int64_t D = oracle.single_dim();
  SparseMatrixC id(D, D);
  id.setIdentity();
  double worst = 0.0;
  for (int a = 0; a < n_levels; ++a) {
    SparseMatrixC K = ladder_matrix(oracle.single_basis, a, a);
    SparseMatrixC KT = K.transpose();
    SparseMatrixC S = SparseMatrixC(Eigen::kroneckerProduct(K, id)) -
                      SparseMatrixC(Eigen::kroneckerProduct(id, KT));
    SparseMatrixC comm = SparseMatrixC(S * oracle.matrix) - SparseMatrixC(oracle.matrix * S);
    for (std::int64_t c = 0; c < comm.outerSize(); ++c)
      for (SparseMatrixC::InnerIterator it(comm, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

IntegrabilityReport integrability_check(const LiouvParams& params) {
  params.validate();
  if (params.p == 0.0 || std::abs(params.p) >= 1.0)
    throw DomainError("integrability check needs 0 < |p| < 1");
  const int N = params.n_levels;
  auto basis = enumerate_occupations(N, params.n_atoms);
  const auto D = static_cast<Eigen::Index>(basis.size());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(D, D);
  std::vector<std::vector<Eigen::MatrixXcd>> K1(N, std::vector<Eigen::MatrixXcd>(N)),
      K2(N, std::vector<Eigen::MatrixXcd>(N));
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) {
      Eigen::MatrixXcd k = Eigen::MatrixXcd(ladder_matrix(basis, a, c));
      K1[a][c] = Eigen::kroneckerProduct(k, id);
    }
  // Second copy: K_{ac,2} = -(I (x) K_ca), the dual of the bra generators.
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) {
      Eigen::MatrixXcd k = Eigen::MatrixXcd(ladder_matrix(basis, c, a));
      K2[a][c] = -Eigen::MatrixXcd(Eigen::kroneckerProduct(id, k));
    }
  const RGMappingConstants mc = mapping_constants(params);
  const cd cotz = std::cos(mc.z) / std::sin(mc.z);
  const cd invsin = 1.0 / std::sin(mc.z);
  auto R = [&](int m) {
    const auto& A = m == 1 ? K1 : K2;
    const double sgn = m == 1 ? 1.0 : -1.0;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D * D, D * D);
    for (int a = 0; a < N; ++a) out += mc.chi[a] * A[a][a];
    for (int a = 0; a < N; ++a) out += sgn * cotz * K1[a][a] * K2[a][a];
    for (int a = 0; a < N; ++a)
      for (int c = a + 1; c < N; ++c)
        out += sgn * invsin *
               (std::exp(I_UNIT * mc.z) * K1[a][c] * K2[c][a] +
                std::exp(-I_UNIT * mc.z) * K1[c][a] * K2[a][c]);
    return out;
  };
  Eigen::MatrixXcd R1 = R(1), R2 = R(2);
  Eigen::MatrixXcd LC = Eigen::MatrixXcd::Zero(D * D, D * D);
  for (int a = 0; a < N; ++a) {
    Eigen::MatrixXcd S = K1[a][a] + K2[a][a];
    LC += -I_UNIT * params.eps[a] * S + 0.5 * (params.gamma - params.gamma0) * S * S;
  }
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) LC -= params.gamma * K1[a][c] * K1[c][a];
  Eigen::MatrixXcd Lo = Eigen::MatrixXcd(build_oracle_matrix(params).matrix);
  IntegrabilityReport rep;
  rep.commutator = (R1 * R2 - R2 * R1).cwiseAbs().maxCoeff();
  rep.reconstruction = (mc.g * std::sin(mc.z) * (R1 - R2) + LC - Lo).cwiseAbs().maxCoeff();
  return rep;
}

double multiset_distance(const std::vector<cd>& a, const std::vector<cd>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cd& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        bi = j;
      }
    }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumResult>& spectra, int n_levels,
                        bool header) {
  if (header) {
    for (int a = 1; a <= n_levels; ++a) os << "sector_s" << a << ',';
    os << "re,im,method,residual\n";
  }
  os << std::setprecision(17);
  for (const auto& sp : spectra) {
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
      for (auto v : sp.sector.s) os << v << ',';
      os << sp.eigenvalues[i].real() << ',' << sp.eigenvalues[i].imag() << ',' << to_string(sp.method)
         << ',' << (i < sp.residual_norms.size() ? sp.residual_norms[i] : 0.0) << '\n';
    }
  }
}

void write_coo(std::ostream& os, const SectorMatrix& m) {
  os << "# sector " << m.sector.str() << " dim " << m.dim << " build " << to_string(m.build_method)
     << "\n# row col re im (zero-based, basis order lexicographic in (k_2..k_N))\n";
  os << std::setprecision(17);
  for (std::int64_t c = 0; c < m.entries.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(m.entries, c); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

}  // namespace rgl
