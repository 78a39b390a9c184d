#pragma once

// Dense kernels for small problems: linear solves, a real Schur form with
// eigenvalues reordered by distance from a reference eigenvalue, and
// Lawson-Hanson non-negative least squares.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmpcalc/error.hpp"

namespace cmpcalc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

inline constexpr double kMaxCondition = 1e12;

// Residual contract: |Ax - b|_max <= 1e-9 (|A|_max |x|_max + |b|_max).
inline Vector solve_linear(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw InputError("solve_linear: matrix is not square");
  if (a.rows() != b.size()) throw InputError("solve_linear: dimension mismatch");
  if (a.rows() == 0) throw InputError("solve_linear: empty system");
  require_finite(a, "solve_linear matrix");
  require_finite(b, "solve_linear right-hand side");

  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxCondition >= 1.0)) {
    throw NumericalError("singular or ill-conditioned linear system (rcond " + std::to_string(rcond) + ")");
  }
  Vector x = lu.solve(b);
  // One step of refinement.
  x += lu.solve(b - a * x);
  const double residual = max_abs(Vector(a * x - b));
  if (residual > 1e-9 * (max_abs(a) * max_abs(x) + max_abs(b))) {
    throw NumericalError("linear solve residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return x;
}

struct SchurForm {
  Matrix u;  // orthogonal
  Matrix v;  // upper quasi-triangular, M = U V U^T
  std::vector<std::complex<double>> eigenvalues;  // diagonal order; pairs adjacent
  std::vector<std::size_t> block_sizes;           // 1 or 2 per diagonal block
};

struct SchurOptions {
  // Eigenvalue to sort around. Defaults to the eigenvalue of largest real part.
  std::optional<double> reference;
  // Reject forms whose first two diagonal entries are not real 1x1 blocks.
  bool require_real_leading = true;
};

namespace detail {

inline std::vector<std::complex<double>> block_eigenvalues(const Matrix& t, std::size_t start, std::size_t size) {
  if (size == 1) return {std::complex<double>(t(start, start), 0.0)};
  const double a = t(start, start), b = t(start, start + 1);
  const double c = t(start + 1, start), d = t(start + 1, start + 1);
  const double mean = 0.5 * (a + d);
  const double disc = 0.25 * (a - d) * (a - d) + b * c;
  if (disc >= 0) {
    const double r = std::sqrt(disc);
    return {{mean + r, 0.0}, {mean - r, 0.0}};
  }
  const double im = std::sqrt(-disc);
  return {{mean, im}, {mean, -im}};
}

// Exchanges adjacent diagonal blocks of sizes p (at `start`) and q by an
// orthogonal similarity. The invariant subspace of the trailing block is
// range([-X; I]) with A11 X - X A22 = A12.
inline void swap_blocks(Matrix& t, Matrix& u, Eigen::Index start, Eigen::Index p, Eigen::Index q) {
  const Eigen::Index n = p + q;
  const Matrix a11 = t.block(start, start, p, p);
  const Matrix a22 = t.block(start + p, start + p, q, q);
  const Matrix a12 = t.block(start, start + p, p, q);

  Matrix kron = Matrix::Zero(p * q, p * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    kron.block(j * p, j * p, p, p) += a11;
    for (Eigen::Index i = 0; i < q; ++i) {
      kron.block(j * p, i * p, p, p) -= a22(i, j) * Matrix::Identity(p, p);
    }
  }
  Eigen::FullPivLU<Matrix> lu(kron);
  if (!lu.isInvertible()) throw NumericalError("cannot reorder Schur blocks with equal eigenvalues");
  const Vector vec_x = lu.solve(Eigen::Map<const Vector>(a12.data(), p * q));
  const Matrix x = Eigen::Map<const Matrix>(vec_x.data(), p, q);

  Matrix basis(n, q);
  basis.topRows(p) = -x;
  basis.bottomRows(q) = Matrix::Identity(q, q);
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix rot = qr.householderQ() * Matrix::Identity(n, n);

  t.middleRows(start, n) = rot.transpose() * t.middleRows(start, n);
  t.middleCols(start, n) = t.middleCols(start, n) * rot;
  u.middleCols(start, n) = u.middleCols(start, n) * rot;

  const double leak = t.block(start + q, start, p, q).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, t.block(start, start, n, n).cwiseAbs().maxCoeff());
  if (leak > 1e-8 * scale) throw NumericalError("Schur block swap is numerically unstable");
  t.block(start + q, start, p, q).setZero();
}

}  // namespace detail

// Real Schur form with diagonal blocks ordered by ascending |lambda - reference|.
inline SchurForm sorted_real_schur(const Matrix& m, const SchurOptions& options = {}) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("sorted_real_schur: need a non-empty square matrix");
  require_finite(m, "sorted_real_schur input");

  Eigen::RealSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success) throw NumericalError("real Schur decomposition did not converge");
  Matrix t = schur.matrixT();
  Matrix u = schur.matrixU();
  const Eigen::Index n = t.rows();

  std::vector<std::size_t> blocks;
  for (Eigen::Index i = 0; i < n;) {
    const bool pair = i + 1 < n && t(i + 1, i) != 0.0;
    blocks.push_back(pair ? 2 : 1);
    i += pair ? 2 : 1;
  }
  // Entries below the block diagonal are rounding noise.
  for (Eigen::Index j = 0, b = 0; b < static_cast<Eigen::Index>(blocks.size()); j += blocks[b], ++b) {
    for (Eigen::Index i = j + static_cast<Eigen::Index>(blocks[b]); i < n; ++i) {
      for (Eigen::Index k = j; k < j + static_cast<Eigen::Index>(blocks[b]); ++k) t(i, k) = 0.0;
    }
  }

  auto eigen_at = [&](std::size_t start, std::size_t size) { return detail::block_eigenvalues(t, start, size); };

  std::complex<double> reference;
  if (options.reference) {
    reference = *options.reference;
  } else {
    bool first = true;
    for (std::size_t b = 0, start = 0; b < blocks.size(); start += blocks[b], ++b) {
      for (auto lambda : eigen_at(start, blocks[b])) {
        if (first || lambda.real() > reference.real()) reference = lambda;
        first = false;
      }
    }
  }
  const double tie = 1e-12 * (1.0 + std::abs(reference) + max_abs(m));
  auto key = [&](std::size_t start, std::size_t size) {
    double best = INFINITY;
    for (auto lambda : eigen_at(start, size)) best = std::min(best, std::abs(lambda - reference));
    return best;
  };

  // Bubble sort over blocks; each exchange is an orthogonal similarity.
  for (bool swapped = true; swapped;) {
    swapped = false;
    std::size_t start = 0;
    for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
      const std::size_t next = start + blocks[b];
      if (key(next, blocks[b + 1]) < key(start, blocks[b]) - tie) {
        detail::swap_blocks(t, u, static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(blocks[b]),
                            static_cast<Eigen::Index>(blocks[b + 1]));
        std::swap(blocks[b], blocks[b + 1]);
        swapped = true;
      }
      start += blocks[b];
    }
  }

  SchurForm form;
  for (std::size_t b = 0, start = 0; b < blocks.size(); start += blocks[b], ++b) {
    for (auto lambda : eigen_at(start, blocks[b])) form.eigenvalues.push_back(lambda);
  }
  form.block_sizes = std::move(blocks);
  form.u = std::move(u);
  form.v = std::move(t);

  if (options.require_real_leading) {
    const std::size_t leading = std::min<std::size_t>(2, static_cast<std::size_t>(n));
    std::size_t covered = 0;
    for (std::size_t b = 0; covered < leading; covered += form.block_sizes[b], ++b) {
      if (form.block_sizes[b] != 1) {
        throw ComplexPairError("leading eigenvalues include a complex conjugate pair");
      }
    }
  }
  return form;
}

struct NnlsOptions {
  double tolerance = 1e-10;
  // 0 selects 10 q^2 for q unknowns.
  std::size_t max_iterations = 0;
};

// argmin |A x - b|^2 subject to x >= 0 (Lawson-Hanson active set).
inline Vector nnls(const Matrix& a, const Vector& b, const NnlsOptions& options = {}) {
  if (a.rows() != b.size()) throw InputError("nnls: dimension mismatch");
  if (a.cols() == 0 || a.rows() == 0) throw InputError("nnls: empty system");
  require_finite(a, "nnls matrix");
  require_finite(b, "nnls right-hand side");

  const Eigen::Index q = a.cols();
  const std::size_t cap =
      options.max_iterations ? options.max_iterations : std::max<std::size_t>(10 * static_cast<std::size_t>(q * q), 10);
  const double tol = options.tolerance;

  Vector x = Vector::Zero(q);
  std::vector<bool> passive(static_cast<std::size_t>(q), false);
  std::vector<bool> blocked(static_cast<std::size_t>(q), false);
  std::size_t iterations = 0;

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < q; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Matrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    const Vector zs = sub.colPivHouseholderQr().solve(b);
    Vector z = Vector::Zero(q);
    for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
  };
  auto bump = [&]() {
    if (++iterations > cap) {
      throw NumericalError("nnls did not converge within " + std::to_string(cap) + " iterations");
    }
  };

  Vector w = a.transpose() * (b - a * x);
  for (;;) {
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      if (passive[sj] || blocked[sj] || w(j) <= tol) continue;
      if (entering < 0 || w(j) > w(entering)) entering = j;
    }
    if (entering < 0) break;
    bump();
    passive[static_cast<std::size_t>(entering)] = true;

    bool first_solve = true;
    for (;;) {
      const Vector z = solve_passive();
      if (first_solve && z(entering) <= 0) {
        // Rounding made the entering column useless; skip it until x changes.
        passive[static_cast<std::size_t>(entering)] = false;
        blocked[static_cast<std::size_t>(entering)] = true;
        break;
      }
      first_solve = false;
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (!passive[static_cast<std::size_t>(j)] || z(j) > 0) continue;
        feasible = false;
        const double step = x(j) - z(j);
        alpha = std::min(alpha, step > 0 ? x(j) / step : 0.0);
      }
      if (feasible) {
        x = z;
        break;
      }
      bump();
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < q; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (passive[sj] && x(j) <= tol * std::max(1.0, std::abs(z(j)))) {
          passive[sj] = false;
          x(j) = 0.0;
        }
      }
    }
    if (!first_solve) std::fill(blocked.begin(), blocked.end(), false);
    w = a.transpose() * (b - a * x);
  }
  return x;
}

// Rank by column-pivoted QR with the default Eigen threshold.
inline std::size_t numerical_rank(const Matrix& m) {
  return static_cast<std::size_t>(m.colPivHouseholderQr().rank());
}

}  // namespace cmpcalc
