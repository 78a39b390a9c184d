#pragma once

// Learns a non-negative weight per characteristic bit from pairwise
// commonalities. Each unordered object pair contributes one equation: the sum
// of the weights of the bits both objects share should match a similarity
// target exp(-scale |x_j - x_k|^2).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmpcalc/csv.hpp"
#include "cmpcalc/error.hpp"
#include "cmpcalc/numerics.hpp"

namespace cmpcalc {

using BitRow = std::vector<std::uint8_t>;

struct FeatureCoding {
  std::vector<std::string> objects;
  std::vector<std::string> characteristics;
  std::vector<BitRow> bits;  // one row per object

  std::size_t object_count() const noexcept { return objects.size(); }
  std::size_t characteristic_count() const noexcept { return characteristics.size(); }
};

inline void validate(const FeatureCoding& coding) {
  auto unique = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()).size() == v.size(); };
  if (!unique(coding.objects)) throw InputError("object labels must be unique");
  if (!unique(coding.characteristics)) throw InputError("characteristic labels must be unique");
  if (coding.bits.size() != coding.objects.size()) throw InputError("one bit row per object is required");
  for (std::size_t i = 0; i < coding.bits.size(); ++i) {
    if (coding.bits[i].size() != coding.characteristics.size()) {
      throw InputError("bit row for '" + coding.objects[i] + "' has the wrong length");
    }
    for (auto b : coding.bits[i]) {
      if (b > 1) throw InputError("bits must be 0 or 1");
    }
  }
}

// "00011110" -> {0,0,0,1,1,1,1,0}
inline BitRow parse_bits(std::string_view s) {
  BitRow row;
  for (char c : s) {
    if (c != '0' && c != '1') throw InputError("invalid bit string '" + std::string(s) + "'");
    row.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return row;
}

struct PairFeatures {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (j, k), j < k, lexicographic
  std::vector<BitRow> rows;                                 // bitwise AND of the two codings
  Matrix matrix;                                            // rows as 0/1 doubles
};

inline std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) out.emplace_back(j, k);
  }
  return out;
}

inline PairFeatures commonality_features(const FeatureCoding& coding) {
  validate(coding);
  if (coding.object_count() < 2) throw InputError("need at least 2 objects");
  const std::size_t h = coding.characteristic_count();
  PairFeatures out;
  out.pairs = unordered_pairs(coding.object_count());
  out.matrix = Matrix::Zero(static_cast<Eigen::Index>(out.pairs.size()), static_cast<Eigen::Index>(h));
  for (std::size_t p = 0; p < out.pairs.size(); ++p) {
    const auto& a = coding.bits[out.pairs[p].first];
    const auto& b = coding.bits[out.pairs[p].second];
    BitRow row(h);
    for (std::size_t c = 0; c < h; ++c) {
      row[c] = a[c] & b[c];
      out.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = row[c];
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// coords: one row per object, any number of columns.
inline Vector similarity_targets(const Matrix& coords, double scale = 10.0) {
  if (!coords.allFinite()) throw InputError("coordinates must be finite");
  if (!(scale > 0) || !std::isfinite(scale)) throw InputError("scale must be positive");
  const auto pairs = unordered_pairs(static_cast<std::size_t>(coords.rows()));
  Vector t(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto j = static_cast<Eigen::Index>(pairs[p].first);
    const auto k = static_cast<Eigen::Index>(pairs[p].second);
    t(static_cast<Eigen::Index>(p)) = std::exp(-scale * (coords.row(j) - coords.row(k)).squaredNorm());
  }
  return t;
}

struct WeightModel {
  std::vector<std::optional<double>> weights;  // nullopt: column never observed
  std::vector<std::size_t> active_columns;

  bool learned(std::size_t column) const { return weights.at(column).has_value(); }
};

inline Matrix reduced_design(const Matrix& features, const std::vector<std::size_t>& columns) {
  Matrix out(features.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = features.col(static_cast<Eigen::Index>(columns[i]));
  }
  return out;
}

// Non-negative least squares over the columns that occur in some pair.
inline WeightModel fit_weights(const Matrix& features, const Vector& targets) {
  if (features.rows() != targets.size()) throw InputError("one target per feature row is required");
  if (features.rows() == 0) throw InputError("need at least one pair");
  WeightModel model;
  model.weights.assign(static_cast<std::size_t>(features.cols()), std::nullopt);
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    if (features.col(c).cwiseAbs().maxCoeff() > 0) model.active_columns.push_back(static_cast<std::size_t>(c));
  }
  if (model.active_columns.empty()) throw InputError("feature matrix is zero; nothing to learn");

  const Matrix reduced = reduced_design(features, model.active_columns);
  NnlsOptions options;
  options.max_iterations = 10 * model.active_columns.size() * model.active_columns.size();
  const Vector w = nnls(reduced, targets, options);
  for (std::size_t i = 0; i < model.active_columns.size(); ++i) {
    model.weights[model.active_columns[i]] = w(static_cast<Eigen::Index>(i));
  }
  return model;
}

// Sum of the weights of the 1-bits.
inline double predict(const WeightModel& model, std::span<const std::uint8_t> row) {
  if (row.size() != model.weights.size()) throw InputError("feature row has the wrong length");
  double total = 0.0;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (!row[c]) continue;
    if (!model.weights[c]) throw InputError("feature " + std::to_string(c + 1) + " was never learned");
    total += *model.weights[c];
  }
  return total;
}

// Header: first cell names the object column, the rest are characteristic
// labels. Data rows: label then one 0/1 cell per characteristic, or label and
// a single bit string.
inline FeatureCoding parse_coding_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.size() < 2) throw InputError("coding CSV needs a header row and at least one object");
  FeatureCoding coding;
  coding.characteristics.assign(rows[0].begin() + 1, rows[0].end());
  const std::size_t h = coding.characteristics.size();
  if (h == 0) throw InputError("coding CSV header lists no characteristics");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    coding.objects.push_back(row[0]);
    if (row.size() == 2 && row[1].size() == h) {
      coding.bits.push_back(parse_bits(row[1]));
    } else if (row.size() == h + 1) {
      BitRow bits;
      for (std::size_t c = 1; c <= h; ++c) {
        if (row[c] != "0" && row[c] != "1") throw InputError("coding CSV: '" + row[c] + "' is not a bit");
        bits.push_back(static_cast<std::uint8_t>(row[c][0] - '0'));
      }
      coding.bits.push_back(std::move(bits));
    } else {
      throw InputError("coding CSV row for '" + row[0] + "' has the wrong width");
    }
  }
  validate(coding);
  return coding;
}

struct LabeledCoordinates {
  std::vector<std::string> labels;
  Matrix coords;
};

// Label followed by one or more numbers; a first row with non-numeric cells is
// taken as a header.
inline LabeledCoordinates parse_coordinates_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (!rows.empty()) {
    bool header = false;
    for (std::size_t c = 1; c < rows[0].size(); ++c) header = header || !csv::to_number(rows[0][c]);
    if (header) rows.erase(rows.begin());
  }
  if (rows.empty()) throw InputError("coordinates CSV has no rows");
  const std::size_t d = rows[0].size() - 1;
  if (d == 0) throw InputError("coordinates CSV needs at least one numeric column");
  LabeledCoordinates out;
  out.coords.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d + 1) throw InputError("coordinates CSV row for '" + rows[i][0] + "' has the wrong width");
    out.labels.push_back(rows[i][0]);
    for (std::size_t c = 0; c < d; ++c) {
      const auto value = csv::to_number(rows[i][c + 1]);
      if (!value) throw InputError("coordinates CSV: '" + rows[i][c + 1] + "' is not a number");
      out.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = *value;
    }
  }
  return out;
}

}  // namespace cmpcalc
