#pragma once

// Orders objects from a square expert rating matrix with equal row sums. The
// second vector of the sorted real Schur form (eigenvalues ordered by distance
// from the Perron root, which equals the common row sum) is rescaled to [0,1]
// and gives both the ordering and a fuzzy 2-clustering chi = [vec, 1 - vec].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "cmpcalc/csv.hpp"
#include "cmpcalc/error.hpp"
#include "cmpcalc/numerics.hpp"

namespace cmpcalc {

class RatingMatrix {
 public:
  // Diagonal of `off_diag` is ignored and refilled so that every row sums to
  // the largest off-diagonal row sum.
  static RatingMatrix assemble(const Matrix& off_diag) {
    if (off_diag.rows() != off_diag.cols()) throw InputError("rating matrix must be square");
    if (off_diag.rows() < 2) throw InputError("rating matrix needs at least 2 objects");
    const Eigen::Index n = off_diag.rows();
    Matrix r = off_diag;
    Vector sums = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        if (!std::isfinite(r(i, j)) || r(i, j) < 0) {
          throw InputError("negative or non-finite rating at (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ")");
        }
        sums(i) += r(i, j);
      }
    }
    const double target = sums.maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) r(i, i) = target - sums(i);
    return RatingMatrix(std::move(r), target);
  }

  // Adds c to the diagonal; eigenvectors and the sorted order are unchanged.
  RatingMatrix shifted(double c) const {
    Matrix r = entries_;
    r.diagonal().array() += c;
    return RatingMatrix(std::move(r), target_ + c);
  }

  const Matrix& entries() const noexcept { return entries_; }
  double row_sum_target() const noexcept { return target_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

 private:
  RatingMatrix(Matrix entries, double target) : entries_(std::move(entries)), target_(target) {}

  Matrix entries_;
  double target_;
};

struct FiedlerCut {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> non_positive;
};

struct SortResult {
  Vector vec;                       // rescaled u2 in [0,1]
  std::vector<std::size_t> order;   // descending vec
  Matrix chi;                       // n x 2, [vec, 1 - vec]
  Matrix coupled;                   // (chi^T chi)^-1 chi^T R chi
  Vector schur_u1;
  Vector schur_u2;
  double v11 = 0, v12 = 0, v22 = 0;
  std::complex<double> lambda2;
  bool orientation_flipped = false;
  FiedlerCut fiedler_cut;
};

inline SortResult sort_objects(const RatingMatrix& ratings) {
  const Matrix& r = ratings.entries();
  const double target = ratings.row_sum_target();
  const Eigen::Index n = r.rows();
  const double scale = std::max(1.0, std::abs(target));

  SchurOptions options;
  options.reference = target;
  options.require_real_leading = false;
  SchurForm schur = sorted_real_schur(r, options);

  if (std::abs(schur.eigenvalues[0] - std::complex<double>(target)) > 1e-8 * scale) {
    throw NumericalError("leading eigenvalue does not match the row sum");
  }
  const auto lambda2 = schur.eigenvalues[1];
  if (schur.block_sizes[0] != 1 || schur.block_sizes[1] != 1 || std::abs(lambda2.imag()) > 1e-9 * scale) {
    throw ComplexPairError(
        "second eigenvalue is part of a complex conjugate pair; the assumption of two fuzzy clusters is "
        "questionable");
  }
  if (std::abs(lambda2 - std::complex<double>(target)) <= 1e-9 * scale) {
    throw DegenerateError("second eigenvalue coincides with the row sum");
  }
  if (n >= 3) {
    const double d2 = std::abs(lambda2 - std::complex<double>(target));
    const double d3 = std::abs(schur.eigenvalues[2] - std::complex<double>(target));
    if (std::abs(d3 - d2) <= 1e-9 * scale) {
      throw DegenerateError("second and third eigenvalues are equally far from the row sum");
    }
  }

  Matrix& u = schur.u;
  Matrix& v = schur.v;
  auto flip = [&](Eigen::Index k) {
    u.col(k) *= -1.0;
    v.row(k) *= -1.0;
    v.col(k) *= -1.0;
  };
  if (u.col(0).sum() < 0) flip(0);

  SortResult out;
  out.lambda2 = lambda2;
  Vector u2 = u.col(1);
  const double lo = u2.minCoeff(), hi = u2.maxCoeff();
  if (!(hi - lo > 1e-12 * std::max(1.0, u2.norm()))) throw DegenerateError("second Schur vector is constant");
  Vector vec = (u2.array() - lo) / (hi - lo);

  // Orientation: the first object not at 1/2 must lie at or above 1/2.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (vec(i) < 1.0 - vec(i)) {
      vec = (1.0 - vec.array()).matrix();
      flip(1);
      out.orientation_flipped = true;
      break;
    }
    if (vec(i) > 1.0 - vec(i)) break;
  }

  out.vec = vec;
  out.schur_u1 = u.col(0);
  out.schur_u2 = u.col(1);
  out.v11 = v(0, 0);
  out.v12 = v(0, 1);
  out.v22 = v(1, 1);

  out.chi.resize(n, 2);
  out.chi.col(0) = vec;
  out.chi.col(1) = (1.0 - vec.array()).matrix();

  const Matrix gram = out.chi.transpose() * out.chi;
  Eigen::JacobiSVD<Matrix> svd(gram);
  const auto sv = svd.singularValues();
  if (!(sv(1) > 0) || sv(0) / sv(1) > kMaxCondition) {
    throw DegenerateError("chi^T chi is too ill-conditioned to invert");
  }
  out.coupled = gram.lu().solve(out.chi.transpose() * r * out.chi);

  out.order.resize(static_cast<std::size_t>(n));
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return vec(static_cast<Eigen::Index>(a)) > vec(static_cast<Eigen::Index>(b)); });

  for (Eigen::Index i = 0; i < n; ++i) {
    (out.schur_u2(i) > 0 ? out.fiedler_cut.positive : out.fiedler_cut.non_positive)
        .push_back(static_cast<std::size_t>(i));
  }
  return out;
}

struct SymmetrizationCheck {
  Matrix d;                     // -v12 u1 u2^T
  Matrix c;                     // chi^T (R + D) chi
  double symmetry_defect = 0;   // max |C - C^T|
  double formula_defect = 0;    // max |C_ij - (v11 a_i a_j + v22 b_i b_j)|
  double span_defect = 0;       // chi columns outside span(u1, u2)
};

inline SymmetrizationCheck symmetrize_check(const SortResult& s, const RatingMatrix& ratings) {
  SymmetrizationCheck out;
  out.d = -s.v12 * s.schur_u1 * s.schur_u2.transpose();
  out.c = s.chi.transpose() * (ratings.entries() + out.d) * s.chi;
  out.symmetry_defect = max_abs(Matrix(out.c - out.c.transpose()));

  Matrix basis(s.chi.rows(), 2);
  basis.col(0) = s.schur_u1;
  basis.col(1) = s.schur_u2;
  const Matrix coeff = basis.transpose() * s.chi;  // row 0: alpha, row 1: beta
  out.span_defect = max_abs(Matrix(basis * coeff - s.chi));
  Matrix formula(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      formula(i, j) = s.v11 * coeff(0, i) * coeff(0, j) + s.v22 * coeff(1, i) * coeff(1, j);
    }
  }
  out.formula_defect = max_abs(Matrix(out.c - formula));
  return out;
}

struct LabeledRatings {
  std::vector<std::string> labels;
  RatingMatrix ratings;
};

// First row and column carry the object labels; diagonal cells may be blank.
inline LabeledRatings parse_ratings_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.size() < 3) throw InputError("ratings CSV needs a header row and at least 2 objects");
  const std::size_t n = rows.size() - 1;
  if (rows[0].size() != n + 1) throw InputError("ratings CSV header must list every object once");
  std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n + 1) throw InputError("ratings CSV row " + std::to_string(i + 2) + " has the wrong width");
    if (row[0] != labels[i]) {
      throw InputError("ratings CSV row label '" + row[0] + "' does not match column label '" + labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = row[j + 1];
      if (i == j) continue;
      const auto value = csv::to_number(cell);
      if (!value) throw InputError("ratings CSV: '" + cell + "' is not a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *value;
    }
  }
  return {std::move(labels), RatingMatrix::assemble(m)};
}

}  // namespace cmpcalc
