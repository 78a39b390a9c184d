#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cmpcalc/expr.hpp"
#include "cmpcalc/ring.hpp"
#include "oracles.hpp"
#include "paper_data.hpp"

using namespace cmpcalc;

namespace {

ContextPtr ab() { return RingContext::create({"a", "b"}); }

RingElement elem(const ContextPtr& ctx, const std::string& text) { return eval(parse(text), ctx); }

// Table 1 numbering, built from the printed terms.
std::vector<RingElement> table1() {
  const auto ctx = RingContext::create({"A", "B"});
  std::vector<RingElement> out;
  for (const char* t : paper::kTable1) out.push_back(elem(ctx, t));
  return out;
}

}  // namespace

TEST(RingContext, RejectsBadGenerators) {
  EXPECT_THROW(RingContext::create({}), InputError);
  EXPECT_THROW(RingContext::create({"a", "a"}), InputError);
  EXPECT_THROW(RingContext::create({"1a"}), InputError);
  std::vector<std::string> many;
  for (int i = 0; i < 25; ++i) many.push_back("g" + std::to_string(i));
  EXPECT_THROW(RingContext::create(many), SizeError);
  many.pop_back();
  EXPECT_NO_THROW(RingContext::create(many));
}

TEST(Generator, CodingTwoGenerators) {
  const auto ctx = ab();
  EXPECT_EQ(generator(ctx, "a").mask_value(), (1u << 0) | (1u << 2));
  EXPECT_EQ(generator(ctx, "b").mask_value(), (1u << 1) | (1u << 2));
  EXPECT_THROW(generator(ctx, "c"), InputError);
}

TEST(Generator, SubsetsContainingTheGenerator) {
  const auto ctx = RingContext::create({"a", "b", "c"});
  const auto a = generator(ctx, "a");
  std::set<std::uint32_t> expected;
  for (std::uint32_t s = 1; s < 8; ++s) {
    if (s & 1u) expected.insert(s);
  }
  const auto got = a.atom_subsets();
  EXPECT_EQ(std::set<std::uint32_t>(got.begin(), got.end()), expected);
  EXPECT_EQ(got.size(), 4u);
}

TEST(XorAdd, PaperCases) {
  const auto t = table1();
  EXPECT_TRUE(xor_add(t[1], t[1]).is_zero());
  EXPECT_EQ(xor_add(t[1], t[2]), t[4]);
  for (const auto& x : t) EXPECT_EQ(xor_add(t[0], x), x);
}

TEST(AndMul, PaperCases) {
  const auto t = table1();
  EXPECT_EQ(and_mul(t[1], t[1]), t[1]);
  EXPECT_TRUE(and_mul(t[4], t[3]).is_zero());
  for (const auto& x : t) EXPECT_EQ(and_mul(t[7], x), x);
}

TEST(Complement, PaperCases) {
  const auto t = table1();
  EXPECT_EQ(complement(t[0]), t[7]);
  EXPECT_EQ(complement(t[1]), t[6]);
  for (const auto& x : t) EXPECT_EQ(complement(complement(x)), x);
}

TEST(Unite, SmallBlueCircle) {
  const auto ctx = RingContext::create({"A", "B", "C"});
  const auto small = elem(ctx, paper::kTable3[1].term);
  const auto circle = elem(ctx, paper::kTable3[2].term);
  const auto blue = elem(ctx, paper::kTable3[4].term);
  const auto sb = unite(small, blue);
  EXPECT_EQ(sb, elem(ctx, paper::kSmallBlue));
  EXPECT_EQ(unite(sb, circle), elem(ctx, paper::kSmallBlueCircle));
  EXPECT_EQ(unite(circle, RingElement::zero(ctx)), circle);
}

TEST(Geq, PaperCases) {
  const auto t = table1();
  EXPECT_TRUE(geq(t[4], t[5]));
  EXPECT_FALSE(geq(t[3], t[4]));
  for (const auto& x : t) EXPECT_TRUE(geq(x, t[0]));
}

TEST(Atoms, Listing) {
  const auto ctx = ab();
  const auto prod = atoms(elem(ctx, "a*b"));
  ASSERT_EQ(prod.size(), 1u);
  EXPECT_EQ(prod[0], RingElement::atom(ctx, 3));
  EXPECT_TRUE(atoms(RingElement::zero(ctx)).empty());
  const auto a = atoms(generator(ctx, "a"));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], RingElement::atom(ctx, 1));
  EXPECT_EQ(a[1], RingElement::atom(ctx, 3));
}

TEST(GeqDegree, PaperCases) {
  const auto t = table1();
  EXPECT_EQ(geq_degree(t[7]), 8u);
  EXPECT_EQ(geq_degree(t[3]), 2u);
  EXPECT_EQ(geq_degree(t[0]), 1u);
  // degree equals the number of '+' in the >= table row
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(geq_degree(t[i]), static_cast<std::uint64_t>(std::count(paper::kGeq[i], paper::kGeq[i] + 8, '+')));
  }
}

TEST(EnumerateRing, TableOneOrder) {
  const auto got = enumerate_ring(RingContext::create({"A", "B"}));
  const auto want = table1();
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].mask_value(), want[i].mask_value()) << i;
  const auto one = enumerate_ring(RingContext::create({"a"}));
  ASSERT_EQ(one.size(), 2u);
  EXPECT_TRUE(one[0].is_zero());
  EXPECT_EQ(one[1], generator(one[1].context(), "a"));
  EXPECT_EQ(enumerate_ring(RingContext::create({"a", "b", "c"})).size(), 128u);
  EXPECT_THROW(enumerate_ring(RingContext::create({"a", "b", "c", "d", "e"})), SizeError);
}

TEST(EnumerateRing, DistinctAndComplete) {
  const auto all = enumerate_ring(RingContext::create({"a", "b", "c", "d"}));
  ASSERT_EQ(all.size(), 1u << 15);
  std::set<std::uint64_t> masks;
  for (const auto& x : all) masks.insert(x.mask_value());
  EXPECT_EQ(masks.size(), all.size());
}

TEST(RingTables, TableTwoExact) {
  const auto t = table1();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      EXPECT_EQ(xor_add(t[i], t[j]), t[paper::kXor[i][j]]) << i << "+" << j;
      EXPECT_EQ(and_mul(t[i], t[j]), t[paper::kAnd[i][j]]) << i << "*" << j;
      EXPECT_EQ(geq(t[i], t[j]), paper::kGeq[i][j] == '+') << i << ">=" << j;
    }
  }
}

TEST(RingElement, MixedContextsRejected) {
  const auto x = generator(ab(), "a");
  const auto y = generator(ab(), "a");
  EXPECT_THROW(xor_add(x, y), InputError);
}

TEST(RingElement, WideRingOperations) {
  // 24 generators: 2^24 - 1 atoms, well beyond enumeration
  std::vector<std::string> names;
  for (int i = 0; i < 24; ++i) names.push_back("g" + std::to_string(i));
  const auto ctx = RingContext::create(names);
  const auto a = generator(ctx, "g0");
  const auto b = generator(ctx, "g23");
  EXPECT_EQ(a.popcount(), std::size_t{1} << 23);
  EXPECT_EQ(and_mul(a, b).popcount(), std::size_t{1} << 22);
  EXPECT_TRUE(geq(unite(a, b), and_mul(a, b)));
  EXPECT_THROW(geq_degree(a), SizeError);
}

TEST(RingProperties, AxiomsAgainstRegionSets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + trial % 6;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < m; ++k) names.push_back(std::string(1, static_cast<char>('a' + k)));
    const auto ctx = RingContext::create(names);
    const auto x = oracle::random_element(ctx, rng);
    const auto y = oracle::random_element(ctx, rng);
    const auto z = oracle::random_element(ctx, rng);
    const auto rx = oracle::regions_of(x), ry = oracle::regions_of(y);

    EXPECT_EQ(oracle::regions_of(xor_add(x, y)), oracle::sym_diff(rx, ry));
    EXPECT_EQ(oracle::regions_of(and_mul(x, y)), oracle::intersect(rx, ry));
    EXPECT_EQ(oracle::regions_of(unite(x, y)), oracle::set_union(rx, ry));
    EXPECT_EQ(geq(x, y), std::includes(rx.begin(), rx.end(), ry.begin(), ry.end()));
    EXPECT_EQ(geq_degree(x), std::uint64_t{1} << rx.size());

    EXPECT_EQ(xor_add(xor_add(x, y), z), xor_add(x, xor_add(y, z)));
    EXPECT_EQ(and_mul(and_mul(x, y), z), and_mul(x, and_mul(y, z)));
    EXPECT_EQ(and_mul(x, xor_add(y, z)), xor_add(and_mul(x, y), and_mul(x, z)));
    EXPECT_EQ(and_mul(x, x), x);
    EXPECT_TRUE(xor_add(x, x).is_zero());
    EXPECT_EQ(unite(x, y), xor_add(xor_add(x, y), and_mul(x, y)));
  }
}

TEST(RingProperties, PolynomialMatchesTruthTable) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + trial % 5;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < m; ++k) names.push_back(std::string(1, static_cast<char>('p' + k)));
    const auto ctx = RingContext::create(names);
    const auto x = oracle::random_element(ctx, rng);
    // the printed polynomial, read back as a Boolean formula, covers the same regions
    EXPECT_EQ(oracle::regions_of(parse(format_element(x)), names), oracle::regions_of(x));
    EXPECT_EQ(RingElement::from_monomials(ctx, x.monomials()), x);
  }
}
