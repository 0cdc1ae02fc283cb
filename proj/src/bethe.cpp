#include "rgl/bethe.hpp"

#include <functional>
#include <iomanip>
#include <map>

#include "rgl/errors.hpp"

namespace rgl {

namespace {

constexpr cd I_UNIT{0.0, 1.0};

// Doubled-space state stored as a D x D matrix: entry (k, j) is the
// amplitude of |k> (x) |j>.
struct TwoCopy {
  std::vector<std::vector<Eigen::MatrixXcd>> K;  // single-copy K_ac

  // Creation operator K_ac(x) = X(-E) K_ac,1 + X(z - E) K_ac,2 with
  // cot E = x, X(u) = exp(iu)/sin(u), and K_ac,2 = -(I (x) K_ca).
  Eigen::MatrixXcd apply(int a, int c, cd x, double p, const Eigen::MatrixXcd& V) const {
    const cd first = I_UNIT - x;
    const cd second = (I_UNIT * x + p) / (p * x - I_UNIT) + I_UNIT;
    return first * (K[a][c] * V) - second * (V * K[c][a].transpose());
  }
};

// exp(-i(E1 - E2)) / sin(E1 - E2) with cot E1 = e, cot E2 = w.
cd insertion_weight(cd e, cd w) {
  if (std::abs(w - e) == 0.0) throw SingularityError("w coincides with an e parameter");
  return (e * w + 1.0) / (w - e) - I_UNIT;
}

}  // namespace

BetheVector build_eigenvector_su3(const SpectralSolution& sol, const LiouvParams& params) {
  if (params.n_levels != 3) throw DomainError("build_eigenvector_su3 needs n_levels = 3");
  if (params.p == 0.0) throw DomainError("Bethe vectors need p != 0");
  const std::int64_t L = params.n_atoms;
  auto counts = spectral_counts(L, sol.sector);
  if (sol.e.size() != counts[0] || sol.w.size() != counts[1])
    throw DomainError("solution cardinalities do not match sector " + sol.sector.str());
  const double p = params.p;

  auto single = enumerate_occupations(3, L);
  const auto D = static_cast<Eigen::Index>(single.size());
  std::map<Occupation, Eigen::Index> idx;
  for (Eigen::Index i = 0; i < D; ++i) idx.emplace(single[static_cast<std::size_t>(i)], i);
  TwoCopy ops;
  ops.K.assign(3, std::vector<Eigen::MatrixXcd>(3));
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) ops.K[a][c] = Eigen::MatrixXcd(ladder_matrix(single, a, c));

  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(D, D);
  ref(idx.at(Occupation{L, 0, 0}), idx.at(Occupation{0, 0, L})) = 1.0;

  const Eigen::Index M1 = sol.e.size(), M2 = sol.w.size();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(D, D);
  std::vector<Eigen::Index> assign(static_cast<std::size_t>(M2), -1);  // -1: creates via K_32
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(M1), -1);   // w index absorbed by e_i

  std::function<void(Eigen::Index, cd)> expand = [&](Eigen::Index j, cd coef) {
    if (j == M2) {
      Eigen::MatrixXcd V = ref;
      for (Eigen::Index i = 0; i < M1; ++i) {
        Eigen::Index o = owner[static_cast<std::size_t>(i)];
        V = o < 0 ? ops.apply(1, 0, sol.e[i], p, V) : ops.apply(2, 0, sol.w[o], p, V);
      }
      for (Eigen::Index jj = 0; jj < M2; ++jj)
        if (assign[static_cast<std::size_t>(jj)] < 0) V = ops.apply(2, 1, sol.w[jj], p, V);
      total += coef * V;
      return;
    }
    assign[static_cast<std::size_t>(j)] = -1;
    expand(j + 1, coef);
    for (Eigen::Index i = 0; i < M1; ++i) {
      if (owner[static_cast<std::size_t>(i)] >= 0) continue;
      owner[static_cast<std::size_t>(i)] = j;
      assign[static_cast<std::size_t>(j)] = i;
      expand(j + 1, coef * insertion_weight(sol.e[i], sol.w[j]));
      owner[static_cast<std::size_t>(i)] = -1;
    }
    assign[static_cast<std::size_t>(j)] = -1;
  };
  expand(0, cd(1.0, 0.0));

  BetheVector out;
  out.sector = sol.sector;
  out.source = sol;
  auto basis = enumerate_basis(L, sol.sector);
  out.components.resize(static_cast<Eigen::Index>(basis.size()));
  double inside = 0.0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    cd v = total(idx.at(basis[b].k), idx.at(basis[b].jbar(sol.sector)));
    out.components[static_cast<Eigen::Index>(b)] = v;
    inside += std::norm(v);
  }
  const double all = total.squaredNorm();
  if (all == 0.0) throw NumericError("Bethe construction produced the zero vector");
  if (all - inside > 1e-20 * all)
    throw NumericError("Bethe construction leaked outside sector " + sol.sector.str());
  return out;
}

double certify(BetheVector& vec, const SectorMatrix& matrix, cd l) {
  if (matrix.dim != vec.components.size() || !(matrix.sector == vec.sector))
    throw DomainError("Bethe vector and sector matrix do not match");
  double n = vec.components.norm();
  if (n == 0.0) throw NumericError("cannot certify the zero vector");
  Eigen::VectorXcd r = matrix.entries * vec.components - l * vec.components;
  vec.residual = r.norm() / n;
  return vec.residual;
}

void write_bethe_csv(std::ostream& os, const BetheVector& vec) {
  const auto basis = enumerate_basis(vec.source.params_snapshot.n_atoms, vec.sector);
  for (int a = 1; a <= vec.sector.n_levels(); ++a) os << 'k' << a << ',';
  os << "re,im\n" << std::setprecision(17);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    for (auto v : basis[b].k) os << v << ',';
    const cd c = vec.components[static_cast<Eigen::Index>(b)];
    os << c.real() << ',' << c.imag() << '\n';
  }
}

}  // namespace rgl
