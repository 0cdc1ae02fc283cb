#include "rgl/rg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "rgl/errors.hpp"

namespace rgl {

namespace {

constexpr cd I_UNIT{0.0, 1.0};

cd pole_q(double p) {
  if (p == 0.0) throw DomainError("the rational RG equations need p != 0");
  return I_UNIT / p;
}

void check_pair(cd a, cd b, double tol, const std::string& what) {
  if (std::abs(a - b) <= tol)
    throw SingularityError("collision between " + what + " at (" + std::to_string(a.real()) + "," +
                           std::to_string(a.imag()) + ")");
}

// Charges placed at +i, -i and (optionally) i/p for one rational family.
struct FamilyCharges {
  double q_plus = 0.0;
  double q_minus = 0.0;
  double q_pole = 0.0;  // coefficient of 1/(x - i/p)
};

// Residual of a single family x coupled to another family y (weight -1).
void family_residual(const VectorC& x, const VectorC& y, const FamilyCharges& ch, cd q,
                     double tol, const char* name, Eigen::Ref<VectorC> out) {
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    cd acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == i) continue;
      check_pair(x[i], x[k], tol, std::string(name) + "[" + std::to_string(i) + "] and " + name + "[" +
                                      std::to_string(k) + "]");
      acc += 2.0 / (x[i] - x[k]);
    }
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      check_pair(x[i], y[k], tol, std::string(name) + "[" + std::to_string(i) + "] and partner[" +
                                      std::to_string(k) + "]");
      acc -= 1.0 / (x[i] - y[k]);
    }
    if (ch.q_plus != 0.0) {
      check_pair(x[i], I_UNIT, tol, std::string(name) + "[" + std::to_string(i) + "] and +i");
      acc += ch.q_plus / (x[i] - I_UNIT);
    }
    if (ch.q_minus != 0.0) {
      check_pair(x[i], -I_UNIT, tol, std::string(name) + "[" + std::to_string(i) + "] and -i");
      acc += ch.q_minus / (x[i] + I_UNIT);
    }
    if (ch.q_pole != 0.0) {
      check_pair(x[i], q, tol, std::string(name) + "[" + std::to_string(i) + "] and i/p");
      acc += ch.q_pole / (x[i] - q);
    }
    out[i] = acc;
  }
}

// Jacobian rows of one family with respect to (x, y); x occupies columns
// [xoff, xoff + nx) and y columns [yoff, yoff + ny).
void family_jacobian(const VectorC& x, const VectorC& y, const FamilyCharges& ch, cd q,
                     Eigen::Index row0, Eigen::Index xoff, Eigen::Index yoff, Eigen::MatrixXcd& J) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    cd diag = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (k == i) continue;
      cd d2 = (x[i] - x[k]) * (x[i] - x[k]);
      diag -= 2.0 / d2;
      J(row0 + i, xoff + k) = 2.0 / d2;
    }
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      cd d2 = (x[i] - y[k]) * (x[i] - y[k]);
      diag += 1.0 / d2;
      J(row0 + i, yoff + k) = -1.0 / d2;
    }
    if (ch.q_plus != 0.0) diag -= ch.q_plus / ((x[i] - I_UNIT) * (x[i] - I_UNIT));
    if (ch.q_minus != 0.0) diag -= ch.q_minus / ((x[i] + I_UNIT) * (x[i] + I_UNIT));
    if (ch.q_pole != 0.0) diag -= ch.q_pole / ((x[i] - q) * (x[i] - q));
    J(row0 + i, xoff + i) = diag;
  }
}

std::pair<FamilyCharges, FamilyCharges> su3_charges(std::int64_t L, const SectorLabel& s) {
  auto q = effective_charges(s);
  return {FamilyCharges{q[0], q[1], 0.0},
          FamilyCharges{q[2], q[3], -static_cast<double>(L)}};
}

FamilyCharges su2_charges(std::int64_t L, const SectorLabel& s) {
  if (s.n_levels() != 2) throw DomainError("SU(2) equations need a two-component sector");
  double s1 = static_cast<double>(s[0]);
  return FamilyCharges{2.0 + s1, s1, -static_cast<double>(L)};
}

cd cot(cd x) { return std::cos(x) / std::sin(x); }

}  // namespace

RGMappingConstants mapping_constants(const LiouvParams& params) {
  params.validate();
  if (params.p == 0.0) throw DomainError("mapping constants need p != 0");
  RGMappingConstants mc;
  // cot z = i/p; the shift by pi selects the branch with 2 g cos z = -gamma.
  mc.z = std::atan(cd(params.p, 0.0) / I_UNIT) + std::numbers::pi;
  mc.g = params.gamma * std::sqrt(std::max(0.0, 1.0 - params.p * params.p)) / 2.0;
  const int N = params.n_levels;
  for (int a = 1; a <= N; ++a) mc.chi.push_back(I_UNIT * static_cast<double>(2 * a - N - 1));
  return mc;
}

double circle_radius(double p) { return std::abs(1.0 - 1.0 / p); }
cd circle_center(double p) { return pole_q(p); }

VectorC residual_su3(const VectorC& e, const VectorC& w, std::int64_t L, const SectorLabel& s,
                     double p, double collision_tol) {
  const cd q = pole_q(p);
  auto [ce, cw] = su3_charges(L, s);
  VectorC r(e.size() + w.size());
  family_residual(e, w, ce, q, collision_tol, "e", r.head(e.size()));
  family_residual(w, e, cw, q, collision_tol, "w", r.tail(w.size()));
  return r;
}

Eigen::MatrixXcd jacobian_su3(const VectorC& e, const VectorC& w, std::int64_t L,
                              const SectorLabel& s, double p) {
  const cd q = pole_q(p);
  auto [ce, cw] = su3_charges(L, s);
  const Eigen::Index n1 = e.size(), n = e.size() + w.size();
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  family_jacobian(e, w, ce, q, 0, 0, n1, J);
  family_jacobian(w, e, cw, q, n1, n1, 0, J);
  return J;
}

VectorC residual_su2(const VectorC& c, std::int64_t L, const SectorLabel& s, double p,
                     double collision_tol) {
  const cd q = pole_q(p);
  VectorC r(c.size());
  family_residual(c, VectorC(), su2_charges(L, s), q, collision_tol, "c", r);
  return r;
}

Eigen::MatrixXcd jacobian_su2(const VectorC& c, std::int64_t L, const SectorLabel& s, double p) {
  const cd q = pole_q(p);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(c.size(), c.size());
  family_jacobian(c, VectorC(), su2_charges(L, s), q, 0, 0, 0, J);
  return J;
}

VectorC residual_su2_trig(const VectorC& E, std::int64_t L, double p) {
  LiouvParams tmp;
  tmp.n_levels = 2;
  tmp.eps = {0.0, 0.0};
  tmp.p = p;
  tmp.n_atoms = L;
  const cd z = mapping_constants(tmp).z;
  const double Ld = static_cast<double>(L);
  VectorC r(E.size());
  for (Eigen::Index i = 0; i < E.size(); ++i) {
    cd acc = 0.0;
    for (Eigen::Index k = 0; k < E.size(); ++k)
      if (k != i) acc += 2.0 * cot(E[k] - E[i]);
    acc += Ld * cot(E[i]) - Ld * cot(z - E[i]);
    r[i] = acc + 2.0 * I_UNIT;
  }
  return r;
}

std::vector<VectorC> residual_sun_general(const std::vector<VectorC>& E, const LiouvParams& params,
                                          const SectorLabel& s) {
  const int N = params.n_levels;
  if (static_cast<int>(E.size()) != N - 1) throw DomainError("need N-1 parameter families");
  if (s.n_levels() != N) throw DomainError("sector label length must equal n_levels");
  const cd z = mapping_constants(params).z;
  const double Ld = static_cast<double>(params.n_atoms);
  auto cartan = [](int a, int b) { return (a == b ? 2.0 : 0.0) - ((b == a - 1 || b == a + 1) ? 1.0 : 0.0); };
  std::vector<VectorC> out(N - 1);
  for (int a = 0; a < N - 1; ++a) {
    out[a].resize(E[a].size());
    for (Eigen::Index i = 0; i < E[a].size(); ++i) {
      cd acc = 0.0;
      for (int b = 0; b < N - 1; ++b) {
        double A = cartan(b, a);
        if (A == 0.0) continue;
        for (Eigen::Index k = 0; k < E[b].size(); ++k) {
          if (a == b && k == i) continue;
          acc += A * cot(E[b][k] - E[a][i]);
        }
      }
      if (a == 0) acc += Ld * cot(E[a][i]);
      if (a == N - 2) acc -= Ld * cot(z - E[a][i]);
      out[a][i] = acc + 2.0 * I_UNIT;
    }
  }
  return out;
}

cd eigenvalue_from_solution(const SpectralSolution& sol, const LiouvParams& params) {
  const int N = params.n_levels;
  const std::int64_t L = params.n_atoms;
  const double Ld = static_cast<double>(L);
  if (sol.sector.n_levels() != N) throw DomainError("solution sector does not match n_levels");
  const double p = params.p;
  cd l = 0.0;
  for (int a = 0; a < N; ++a) l -= I_UNIT * params.eps[a] * static_cast<double>(sol.sector[a]);
  l -= params.gamma * (Ld * Ld + (N - 1) * Ld);
  l += 0.5 * (params.gamma - params.gamma0) * static_cast<double>(sol.sector.sum_squares());
  auto tail = [&](cd w) {
    cd den = p * w - I_UNIT;
    if (std::abs(den) == 0.0) throw SingularityError("spectral parameter sits on the pole i/p");
    return (I_UNIT * w + p) / den;
  };
  cd bracket = 0.0;
  if (N == 3) {
    for (Eigen::Index i = 0; i < sol.e.size(); ++i) bracket += sol.e[i];
    for (Eigen::Index i = 0; i < sol.w.size(); ++i) bracket += tail(sol.w[i]);
  } else if (N == 2) {
    for (Eigen::Index i = 0; i < sol.e.size(); ++i) bracket += sol.e[i] + tail(sol.e[i]);
  } else {
    throw DomainError("closed-form eigenvalues are implemented for N = 2 and N = 3");
  }
  return l - I_UNIT * Ld * params.gamma * p / 2.0 * bracket;
}

namespace {

struct System {
  int N;
  std::int64_t L;
  SectorLabel s;
  double p;
  Eigen::Index n1;  // size of the first family

  VectorC residual(const VectorC& x, double tol) const {
    if (N == 3) return residual_su3(x.head(n1), x.tail(x.size() - n1), L, s, p, tol);
    return residual_su2(x, L, s, p, tol);
  }
  Eigen::MatrixXcd jacobian(const VectorC& x) const {
    if (N == 3) return jacobian_su3(x.head(n1), x.tail(x.size() - n1), L, s, p);
    return jacobian_su2(x, L, s, p);
  }
};

double min_pair_distance(const VectorC& x) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index k = i + 1; k < x.size(); ++k) best = std::min(best, std::abs(x[i] - x[k]));
  return best;
}

}  // namespace

SpectralSolution solve(const SpectralSolution& guess, const LiouvParams& params, const SolveOptions& opts) {
  params.validate();
  const int N = params.n_levels;
  if (N != 2 && N != 3) throw DomainError("the rational solver handles N = 2 and N = 3");
  if (params.p == 0.0) throw DomainError("p = 0 has no finite RG solution; use exact diagonalization");
  const std::int64_t L = params.n_atoms;
  auto counts = spectral_counts(L, guess.sector);
  if (guess.e.size() != counts[0] || (N == 3 && guess.w.size() != counts[1]))
    throw DomainError("guess cardinalities do not match sector " + guess.sector.str());

  System sys{N, L, guess.sector, params.p, guess.e.size()};
  const double scale = std::max(1.0, 1.0 / std::abs(params.p));
  const double coll = opts.collision_tol * scale;
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-10 * static_cast<double>(L);

  VectorC x(guess.e.size() + (N == 3 ? guess.w.size() : 0));
  x.head(guess.e.size()) = guess.e;
  if (N == 3) x.tail(guess.w.size()) = guess.w;

  SpectralSolution out = guess;
  out.params_snapshot = params;
  out.converged = false;

  if (x.size() == 0) {
    out.residual_norm = 0.0;
    out.converged = true;
    out.eigenvalue = eigenvalue_from_solution(out, params);
    return out;
  }

  VectorC r = sys.residual(x, coll);
  double f = r.squaredNorm();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (r.cwiseAbs().maxCoeff() <= tol) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXcd J = sys.jacobian(x);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    VectorC dx = lu.solve(-r);
    if (!dx.allFinite()) {
      throw NumericError("singular Jacobian; closest pair distance " +
                         std::to_string(min_pair_distance(x)));
    }
    // Step cap relative to each parameter's nearest neighbour.
    double ratio = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double dmin = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < x.size(); ++k)
        if (k != i) dmin = std::min(dmin, std::abs(x[i] - x[k]));
      dmin = std::min({dmin, std::abs(x[i] - I_UNIT), std::abs(x[i] + I_UNIT)});
      if (dmin > 0.0 && std::isfinite(dmin)) ratio = std::max(ratio, std::abs(dx[i]) / dmin);
    }
    double t = ratio > opts.step_cap ? opts.step_cap / ratio : 1.0;
    bool accepted = false;
    VectorC xt, rt;
    double ft = 0.0;
    for (int bt = 0; bt < 40; ++bt) {
      xt = x + t * dx;
      try {
        rt = sys.residual(xt, coll);
        ft = rt.squaredNorm();
        if (std::isfinite(ft) && ft <= (1.0 - 1e-4 * t) * f) {
          accepted = true;
          break;
        }
      } catch (const SingularityError&) {
      }
      t *= 0.5;
    }
    if (!accepted) break;
    x = xt;
    r = rt;
    f = ft;
    if (x.cwiseAbs().maxCoeff() > opts.blowup * scale) break;
  }
  if (!out.converged && r.cwiseAbs().maxCoeff() <= tol) out.converged = true;
  out.iterations = it;
  out.e = x.head(guess.e.size());
  if (N == 3) out.w = x.tail(guess.w.size());
  out.residual_norm = r.cwiseAbs().maxCoeff();
  out.eigenvalue = eigenvalue_from_solution(out, params);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sys.jacobian(x));
  const auto& sv = svd.singularValues();
  out.sensitivity = sv[sv.size() - 1] > 0.0 ? out.residual_norm / sv[sv.size() - 1]
                                            : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

VectorC arc(std::int64_t M, cd q, double rad, double phi0, double gap) {
  VectorC out(M);
  if (M == 1) {
    out[0] = q + rad * std::exp(I_UNIT * (phi0 + std::numbers::pi));
  } else {
    for (std::int64_t i = 0; i < M; ++i) {
      double th = gap + (2.0 * std::numbers::pi - 2.0 * gap) * static_cast<double>(i) /
                            static_cast<double>(M - 1);
      out[i] = q + rad * std::exp(I_UNIT * (phi0 + th));
    }
  }
  return out;
}

}  // namespace

SpectralSolution init_circle_guess(std::int64_t L, double p, const SectorLabel& s, const CircleLayout& layout) {
  if (p == 0.0 || std::abs(p) >= 1.0)
    throw DomainError("circle initialization is unsupported for |p| in {0, 1}");
  auto counts = spectral_counts(L, s);
  const cd q = circle_center(p);
  const double R = circle_radius(p);
  const double phi0 = std::arg(I_UNIT - q);
  const double d = layout.spread > 0.0 ? layout.spread : 0.5 / std::sqrt(static_cast<double>(L));
  SpectralSolution g;
  g.sector = s;
  if (s.n_levels() == 3) {
    g.e = arc(counts[0], q, R * (1.0 + d), phi0, layout.gap);
    g.w = arc(counts[1], q, R * (1.0 - d), phi0, layout.gap);
  } else {
    g.e = arc(counts[0], q, R, phi0, layout.gap);
  }
  return g;
}

SpectralSolution init_steady_state_guess(std::int64_t L, double p, const CircleLayout& layout) {
  return init_circle_guess(L, p, SectorLabel{0, 0, 0}, layout);
}

SpectralSolution continue_in_p(const SpectralSolution& from, double target_p, int steps,
                               ContinuationPath* path, const SolveOptions& opts) {
  if (!from.converged) throw DomainError("continuation needs a converged source solution");
  if (steps < 1) steps = 1;
  LiouvParams params = from.params_snapshot;
  const double p0 = params.p;
  double h = (target_p - p0) / steps;
  const double h_min = std::abs(target_p - p0) * 1e-6 + 1e-12;
  SpectralSolution cur = from, prev;
  bool have_prev = false;
  double p = p0;
  if (path) {
    path->values.push_back(p);
    path->eigenvalues.push_back(cur.eigenvalue);
    path->residuals.push_back(cur.residual_norm);
  }
  while ((target_p - p) * (h > 0 ? 1 : -1) > 1e-15) {
    double step = (std::abs(target_p - p) < std::abs(h)) ? target_p - p : h;
    SpectralSolution guess = cur;
    if (have_prev) {
      // Secant predictor along the path.
      double ratio = step / (cur.params_snapshot.p - prev.params_snapshot.p);
      guess.e = cur.e + ratio * (cur.e - prev.e);
      guess.w = cur.w + ratio * (cur.w - prev.w);
    }
    LiouvParams next = params;
    next.p = p + step;
    SpectralSolution sol;
    bool ok = false;
    try {
      sol = solve(guess, next, opts);
      ok = sol.converged;
    } catch (const NumericError&) {
      ok = false;
    }
    if (!ok) {
      h = step / 2.0;
      if (std::abs(h) < h_min)
        throw NumericError("p-continuation step underflow near p = " + std::to_string(p) +
                           "; last good eigenvalue (" + std::to_string(cur.eigenvalue.real()) + "," +
                           std::to_string(cur.eigenvalue.imag()) + ")");
      continue;
    }
    prev = cur;
    have_prev = true;
    cur = sol;
    p = next.p;
    params = next;
    if (path) {
      path->values.push_back(p);
      path->eigenvalues.push_back(cur.eigenvalue);
      path->residuals.push_back(cur.residual_norm);
    }
    h = step * 1.5;
  }
  return cur;
}

namespace {

// Interpolates a family of M points (ordered by angle around q) to M + 1
// points, keeping the angular and radial profile.
VectorC grow_family(const VectorC& x, cd q, double R, double phi0) {
  const Eigen::Index M = x.size();
  VectorC out(M + 1);
  if (M == 0) {
    out[0] = q + R * std::exp(I_UNIT * (phi0 + std::numbers::pi));
    return out;
  }
  std::vector<std::pair<double, double>> polar;
  for (Eigen::Index i = 0; i < M; ++i) {
    cd d = x[i] - q;
    double th = std::arg(d) - phi0;
    while (th < 0) th += 2.0 * std::numbers::pi;
    while (th >= 2.0 * std::numbers::pi) th -= 2.0 * std::numbers::pi;
    polar.emplace_back(th, std::abs(d));
  }
  std::sort(polar.begin(), polar.end());
  if (M == 1) {
    out[0] = q + polar[0].second * std::exp(I_UNIT * (phi0 + polar[0].first - 0.2));
    out[1] = q + polar[0].second * std::exp(I_UNIT * (phi0 + polar[0].first + 0.2));
    return out;
  }
  for (Eigen::Index j = 0; j <= M; ++j) {
    double pos = static_cast<double>(j) * static_cast<double>(M - 1) / static_cast<double>(M);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min<std::size_t>(lo + 1, static_cast<std::size_t>(M - 1));
    double frac = pos - static_cast<double>(lo);
    double th = (1 - frac) * polar[lo].first + frac * polar[hi].first;
    double rad = (1 - frac) * polar[lo].second + frac * polar[hi].second;
    out[j] = q + rad * std::exp(I_UNIT * (phi0 + th));
  }
  return out;
}

}  // namespace

SpectralSolution continue_in_L(const SpectralSolution& from, std::int64_t target_L, ContinuationPath* path,
                               const SolveOptions& opts) {
  if (!from.converged) throw DomainError("continuation needs a converged source solution");
  LiouvParams params = from.params_snapshot;
  if (target_L < params.n_atoms) throw DomainError("L-continuation only grows the system");
  const cd q = circle_center(params.p);
  const double R = circle_radius(params.p);
  const double phi0 = std::arg(I_UNIT - q);
  SpectralSolution cur = from;
  if (path) {
    path->values.push_back(static_cast<double>(params.n_atoms));
    path->eigenvalues.push_back(cur.eigenvalue);
    path->residuals.push_back(cur.residual_norm);
  }
  while (params.n_atoms < target_L) {
    params.n_atoms += 1;
    SpectralSolution guess = cur;
    guess.e = grow_family(cur.e, q, R, phi0);
    if (params.n_levels == 3) guess.w = grow_family(cur.w, q, R, phi0);
    SpectralSolution sol = solve(guess, params, opts);
    if (!sol.converged)
      throw NumericError("L-continuation failed at L = " + std::to_string(params.n_atoms) +
                         " (residual " + std::to_string(sol.residual_norm) + ")");
    cur = sol;
    if (path) {
      path->values.push_back(static_cast<double>(params.n_atoms));
      path->eigenvalues.push_back(cur.eigenvalue);
      path->residuals.push_back(cur.residual_norm);
    }
  }
  return cur;
}

void to_json(nlohmann::json& j, const SpectralSolution& s) {
  auto arr = [](const VectorC& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({{"re", v[i].real()}, {"im", v[i].imag()}});
    return a;
  };
  j = nlohmann::json{{"sector", s.sector},
                     {"e", arr(s.e)},
                     {"w", arr(s.w)},
                     {"residual", s.residual_norm},
                     {"eigenvalue", {{"re", s.eigenvalue.real()}, {"im", s.eigenvalue.imag()}}},
                     {"params", s.params_snapshot},
                     {"converged", s.converged},
                     {"iterations", s.iterations},
                     {"sensitivity", s.sensitivity},
                     {"level_reversed", s.level_reversed}};
}

void from_json(const nlohmann::json& j, SpectralSolution& s) {
  auto arr = [](const nlohmann::json& a) {
    VectorC v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = cd(a[i].at("re").get<double>(), a[i].at("im").get<double>());
    return v;
  };
  s.sector = j.at("sector").get<SectorLabel>();
  s.e = arr(j.at("e"));
  s.w = arr(j.at("w"));
  s.residual_norm = j.at("residual").get<double>();
  s.eigenvalue = cd(j.at("eigenvalue").at("re").get<double>(), j.at("eigenvalue").at("im").get<double>());
  s.params_snapshot = j.at("params").get<LiouvParams>();
  s.converged = j.value("converged", false);
  s.iterations = j.value("iterations", 0);
  s.sensitivity = j.value("sensitivity", 0.0);
  s.level_reversed = j.value("level_reversed", false);
}

void write_solution_csv(std::ostream& os, const SpectralSolution& s) {
  os << "re,im,family\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < s.e.size(); ++i) os << s.e[i].real() << ',' << s.e[i].imag() << ",e\n";
  for (Eigen::Index i = 0; i < s.w.size(); ++i) os << s.w[i].real() << ',' << s.w[i].imag() << ",w\n";
}

}  // namespace rgl
