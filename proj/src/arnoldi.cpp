// Shift-invert Arnoldi with explicit restarts on a sparse LU factorization.

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "rgl/ed.hpp"
#include "rgl/errors.hpp"

namespace rgl {

namespace {

using SparseInt = Eigen::SparseMatrix<cd, Eigen::ColMajor, int>;

struct Ritz {
  cd lambda;
  Eigen::VectorXcd x;
  double residual;
};

}  // namespace

SpectrumResult target_eigenvalues_near(const SectorMatrix& matrix, cd shift, int count,
                                       const ShiftInvertOptions& opts) {
  if (count < 1) throw DomainError("count must be positive");
  const Eigen::Index n = matrix.dim;
  if (count > n) throw DomainError("count exceeds sector dimension");
  const int m_req = opts.subspace > 0 ? opts.subspace : std::max(20, 4 * count);

  SpectrumResult out;
  out.sector = matrix.sector;
  out.method = SpectrumMethod::shift_invert_partial;

  // Tiny sectors: the Krylov space would span everything anyway.
  if (n <= m_req + 1) {
    auto full = full_spectrum(matrix, DenseOptions{.keep_vectors = true});
    std::vector<std::size_t> order(full.eigenvalues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return std::abs(full.eigenvalues[a] - shift) < std::abs(full.eigenvalues[b] - shift);
    });
    Eigen::MatrixXcd V(n, count);
    for (int i = 0; i < count; ++i) {
      out.eigenvalues.push_back(full.eigenvalues[order[i]]);
      out.residual_norms.push_back(full.residual_norms[order[i]]);
      V.col(i) = full.eigenvectors->col(static_cast<Eigen::Index>(order[i]));
    }
    if (opts.keep_vectors) out.eigenvectors = std::move(V);
    return out;
  }

  const int m = static_cast<int>(std::min<Eigen::Index>(m_req, n - 1));
  SparseInt A = SparseInt(matrix.entries.cast<cd>());
  SparseInt shifted = A;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseInt, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success)
    throw NumericError("sparse LU failed at shift (" + std::to_string(shift.real()) + "," +
                       std::to_string(shift.imag()) + ") in sector " + matrix.sector.str() +
                       "; the shift may coincide with an eigenvalue, try a different shift");

  const double scale = std::max(1.0, matrix.norm1());
  const double bound = opts.tol * scale;

  // Deterministic start vector.
  Eigen::VectorXcd start(n);
  for (Eigen::Index i = 0; i < n; ++i)
    start[i] = cd(1.0 + 0.1 * std::sin(0.7 * static_cast<double>(i)), 0.05 * std::cos(1.3 * static_cast<double>(i)));
  start.normalize();

  std::vector<Ritz> wanted;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    V.col(0) = start;
    int k_used = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd w = lu.solve(V.col(j));
      // Classical Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXcd h = V.leftCols(j + 1).adjoint() * w;
        w -= V.leftCols(j + 1) * h;
        H.col(j).head(j + 1) += h;
      }
      double beta = w.norm();
      H(j + 1, j) = beta;
      if (beta < 1e-14 * H.col(j).head(j + 1).norm()) {
        k_used = j + 1;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    Eigen::MatrixXcd Hk = H.topLeftCorner(k_used, k_used);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hk, true);
    if (es.info() != Eigen::Success) throw NumericError("Arnoldi projection eigensolve failed");
    std::vector<int> order(k_used);
    for (int i = 0; i < k_used; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    wanted.clear();
    const int take = std::min(count, k_used);
    bool done = take == count;
    for (int i = 0; i < take; ++i) {
      cd theta = es.eigenvalues()[order[i]];
      if (std::abs(theta) == 0.0) {
        done = false;
        continue;
      }
      Eigen::VectorXcd x = V.leftCols(k_used) * es.eigenvectors().col(order[i]);
      x.normalize();
      cd lambda = shift + 1.0 / theta;
      double res = (A * x - lambda * x).norm();
      wanted.push_back({lambda, x, res});
      if (res > bound) done = false;
    }
    if (done) break;
    if (restart == opts.max_restarts)
      throw NumericError("shift-invert Arnoldi did not converge in sector " + matrix.sector.str() +
                         " after " + std::to_string(opts.max_restarts) +
                         " restarts; try a different shift");
    start = Eigen::VectorXcd::Zero(n);
    for (const auto& r : wanted) start += r.x;
    if (start.norm() == 0.0) start = wanted.front().x;
    start.normalize();
  }
  std::stable_sort(wanted.begin(), wanted.end(), [&](const Ritz& a, const Ritz& b) {
    return std::abs(a.lambda - shift) < std::abs(b.lambda - shift);
  });
  Eigen::MatrixXcd V(n, static_cast<Eigen::Index>(wanted.size()));
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    out.eigenvalues.push_back(wanted[i].lambda);
    out.residual_norms.push_back(wanted[i].residual);
    V.col(static_cast<Eigen::Index>(i)) = wanted[i].x;
  }
  if (opts.keep_vectors) out.eigenvectors = std::move(V);
  return out;
}

}  // namespace rgl
