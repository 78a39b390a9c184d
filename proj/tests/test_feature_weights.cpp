#include <gtest/gtest.h>

#include <random>

#include "cmpcalc/feature_weights.hpp"
#include "oracles.hpp"
#include "paper_data.hpp"

using namespace cmpcalc;

namespace {

FeatureCoding paper_coding() {
  FeatureCoding c;
  c.objects = paper::kObjects;
  c.characteristics = paper::kCharacteristics;
  for (const auto& s : paper::kCoding) c.bits.push_back(parse_bits(s));
  return c;
}

Matrix paper_coords() {
  Matrix x(5, 1);
  for (int i = 0; i < 5; ++i) x(i, 0) = paper::kVec[i];
  return x;
}

std::string bits_text(const BitRow& row) {
  std::string s;
  for (auto b : row) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

TEST(Commonalities, BitwiseAnd) {
  const auto f = commonality_features(paper_coding());
  ASSERT_EQ(f.pairs.size(), 10u);
  EXPECT_EQ(bits_text(f.rows[0]), "00000000");  // Hansel, Witch
  EXPECT_EQ(bits_text(f.rows[4]), "11100000");  // Witch, Stepmother
  for (std::size_t p = 0; p < 10; ++p) {
    std::string sum;
    for (std::size_t c = 0; c < 8; ++c) {
      if (f.rows[p][c]) sum += (sum.empty() ? "w" : "+w") + std::to_string(c + 1);
    }
    EXPECT_EQ(sum, paper::kSumOfWeights[p]);
  }
  FeatureCoding same = paper_coding();
  same.bits[1] = same.bits[0];
  EXPECT_EQ(commonality_features(same).rows[0], same.bits[0]);
}

TEST(SimilarityTargets, PaperColumn) {
  const Vector t = similarity_targets(paper_coords());
  for (int p = 0; p < 10; ++p) EXPECT_NEAR(t(p), paper::kIntended[p], 1e-4) << p;
  EXPECT_EQ(similarity_targets(Matrix::Constant(3, 2, 0.4)), Vector::Ones(3));
  EXPECT_THROW(similarity_targets(paper_coords(), -1.0), InputError);
}

TEST(FitWeights, PaperWeights) {
  const auto f = commonality_features(paper_coding());
  const auto model = fit_weights(f.matrix, similarity_targets(paper_coords()));
  for (std::size_t c = 0; c < 7; ++c) {
    ASSERT_TRUE(model.learned(c));
    EXPECT_NEAR(*model.weights[c], paper::kWeights[c], 1e-3) << "w" << c + 1;
  }
  EXPECT_FALSE(model.learned(7));
  EXPECT_EQ(numerical_rank(reduced_design(f.matrix, model.active_columns)), 7u);
  for (std::size_t p = 0; p < 10; ++p) EXPECT_NEAR(predict(model, f.rows[p]), paper::kTrained[p], 1e-3) << p;
}

TEST(FitWeights, SinglePair) {
  Matrix a(1, 3);
  a << 1, 0, 0;
  Vector t(1);
  t << 0.5;
  const auto model = fit_weights(a, t);
  EXPECT_NEAR(*model.weights[0], 0.5, 1e-12);
  EXPECT_FALSE(model.learned(1));
  EXPECT_THROW(fit_weights(Matrix::Zero(2, 2), Vector::Ones(2)), InputError);
}

TEST(Predict, Cases) {
  const auto f = commonality_features(paper_coding());
  const auto model = fit_weights(f.matrix, similarity_targets(paper_coords()));
  EXPECT_NEAR(predict(model, parse_bits("01000000")), 0.60954, 1e-3);
  EXPECT_NEAR(predict(model, parse_bits("00010110")), 0.33662, 1e-3);
  EXPECT_EQ(predict(model, parse_bits("00000000")), 0.0);
  EXPECT_THROW(predict(model, parse_bits("00000001")), InputError);
  EXPECT_THROW(predict(model, parse_bits("0")), InputError);
}

TEST(FitWeights, KktOnRandomCodings) {
  std::mt19937_64 rng(67);
  std::bernoulli_distribution bit(0.5);
  for (int i = 0; i < 50; ++i) {
    FeatureCoding c;
    const std::size_t n = 3 + rng() % 5, h = 2 + rng() % 8;
    for (std::size_t k = 0; k < h; ++k) c.characteristics.push_back("c" + std::to_string(k));
    for (std::size_t j = 0; j < n; ++j) {
      c.objects.push_back("o" + std::to_string(j));
      BitRow row;
      for (std::size_t k = 0; k < h; ++k) row.push_back(bit(rng));
      c.bits.push_back(row);
    }
    Matrix x(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x(r, 0) = std::uniform_real_distribution<double>(0, 1)(rng);
      x(r, 1) = std::uniform_real_distribution<double>(0, 1)(rng);
    }
    const auto f = commonality_features(c);
    if (f.matrix.isZero()) continue;
    const Vector t = similarity_targets(x);
    const auto model = fit_weights(f.matrix, t);
    const Matrix a = reduced_design(f.matrix, model.active_columns);
    Vector w(a.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k) w(k) = *model.weights[model.active_columns[static_cast<std::size_t>(k)]];
    const Vector grad = a.transpose() * (a * w - t);
    EXPECT_GE(w.minCoeff(), 0.0);
    EXPECT_GE(grad.minCoeff(), -1e-8);
    EXPECT_LE(max_abs(Vector(w.cwiseProduct(grad))), 1e-8);
  }
}

TEST(ParseCodingCsv, Formats) {
  const auto a = parse_coding_csv("obj,x,y\np,10\nq,11\n");
  const auto b = parse_coding_csv("obj,x,y\np,1,0\nq,1,1\n");
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_EQ(a.characteristics, (std::vector<std::string>{"x", "y"}));
  EXPECT_THROW(parse_coding_csv("obj,x,y\np,102\n"), InputError);
  EXPECT_THROW(parse_coding_csv("obj,x,y\np,1\n"), InputError);
  EXPECT_THROW(parse_coding_csv("obj,x,y\np,10\np,11\n"), InputError);
}

TEST(ParseCoordinatesCsv, HeaderDetection) {
  const auto a = parse_coordinates_csv("name,x\np,0.5\nq,1\n");
  const auto b = parse_coordinates_csv("p,0.5\nq,1\n");
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_THROW(parse_coordinates_csv("p,0.5\nq,x\n"), InputError);
}
