#pragma once

// Free Boolean ring on m generators. An element is the set of Venn regions
// ("atoms") it covers; atom(S) for a nonempty generator subset S is encoded by
// s = sum_{k in S} 2^k and stored at bit s-1. The region outside every
// generator is not an atom, so unity is the union of the generators and the
// ring has 2^(2^m - 1) elements.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cmpcalc/error.hpp"

namespace cmpcalc {

class RingContext;
using ContextPtr = std::shared_ptr<const RingContext>;

class RingContext {
 public:
  static constexpr std::size_t kMaxGenerators = 24;
  static constexpr std::size_t kMaxEnumerable = 4;

  static ContextPtr create(std::vector<std::string> names) {
    if (names.empty()) throw InputError("ring needs at least one generator");
    if (names.size() > kMaxGenerators) {
      throw SizeError("ring needs between 1 and " + std::to_string(kMaxGenerators) +
                       " generators, got " + std::to_string(names.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
      if (!is_identifier(name)) throw InputError("invalid generator name '" + name + "'");
      if (!seen.insert(name).second) throw InputError("duplicate generator name '" + name + "'");
    }
    return ContextPtr(new RingContext(std::move(names)));
  }

  static bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
  }

  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  std::size_t generator_count() const noexcept { return names_.size(); }
  std::uint32_t atom_count() const noexcept { return (std::uint32_t{1} << names_.size()) - 1; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t k = 0; k < names_.size(); ++k) {
      if (names_[k] == name) return k;
    }
    return std::nullopt;
  }

  // Generator names of subset s in index order, e.g. {a,b}.
  std::string subset_label(std::uint32_t s) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t k = 0; k < names_.size(); ++k) {
      if (s & (std::uint32_t{1} << k)) {
        if (!first) out += ',';
        out += names_[k];
        first = false;
      }
    }
    return out + "}";
  }

 private:
  explicit RingContext(std::vector<std::string> names) : names_(std::move(names)) {}

  std::vector<std::string> names_;
};

// Degree first, then lexicographic on the ascending generator index lists.
// This is the monomial order a < b < ab < ... used for Table-style numbering.
inline bool term_less(std::uint32_t s, std::uint32_t t) {
  const int ps = std::popcount(s), pt = std::popcount(t);
  if (ps != pt) return ps < pt;
  while (s != 0 && t != 0) {
    const int ls = std::countr_zero(s), lt = std::countr_zero(t);
    if (ls != lt) return ls < lt;
    s &= s - 1;
    t &= t - 1;
  }
  return false;
}

class RingElement {
 public:
  explicit RingElement(ContextPtr ctx)
      : ctx_(std::move(ctx)), words_((ctx_->atom_count() + 63) / 64, 0) {}

  static RingElement zero(const ContextPtr& ctx) { return RingElement(ctx); }

  static RingElement unity(const ContextPtr& ctx) {
    RingElement e(ctx);
    std::fill(e.words_.begin(), e.words_.end(), ~std::uint64_t{0});
    e.trim();
    return e;
  }

  static RingElement atom(const ContextPtr& ctx, std::uint32_t subset) {
    if (subset == 0 || subset > ctx->atom_count()) {
      throw InputError("atom subset code " + std::to_string(subset) + " out of range");
    }
    RingElement e(ctx);
    e.set(subset);
    return e;
  }

  // Builds an element from the low atom_count bits of `mask` (bit s-1 = atom s).
  static RingElement from_mask(const ContextPtr& ctx, std::uint64_t mask) {
    if (ctx->atom_count() > 64) throw SizeError("from_mask needs at most 64 atoms");
    RingElement e(ctx);
    e.words_[0] = mask;
    e.trim();
    return e;
  }

  // Element covering exactly the atoms s with pred(s).
  template <class Pred>
  static RingElement with_atoms(const ContextPtr& ctx, Pred pred) {
    RingElement e(ctx);
    for (std::uint32_t s = 1; s <= ctx->atom_count(); ++s) {
      if (pred(s)) e.set(s);
    }
    return e;
  }

  // XOR of the products of the given generator subsets (no constant term).
  static RingElement from_monomials(const ContextPtr& ctx, const std::vector<std::uint32_t>& subsets) {
    const std::uint32_t n = ctx->atom_count();
    std::vector<std::uint8_t> f(std::size_t{n} + 1, 0);
    for (auto t : subsets) {
      if (t == 0 || t > n) throw InputError("monomial subset code out of range");
      f[t] ^= 1;
    }
    subset_zeta(f, ctx->generator_count());
    RingElement e(ctx);
    for (std::uint32_t s = 1; s <= n; ++s) {
      if (f[s]) e.set(s);
    }
    return e;
  }

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool contains_atom(std::uint32_t subset) const {
    const std::uint32_t bit = subset - 1;
    return (words_[bit / 64] >> (bit % 64)) & 1U;
  }

  bool is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t popcount() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  std::uint64_t mask_value() const {
    if (words_.size() > 1) throw SizeError("mask_value needs at most 64 atoms");
    return words_[0];
  }

  // Subset codes of the covered atoms, ascending.
  std::vector<std::uint32_t> atom_subsets() const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)) + 1);
        bits &= bits - 1;
      }
    }
    return out;
  }

  // Generator subsets whose products XOR to this element, in term order.
  std::vector<std::uint32_t> monomials() const {
    const std::uint32_t n = ctx_->atom_count();
    std::vector<std::uint8_t> f(std::size_t{n} + 1, 0);
    for (auto s : atom_subsets()) f[s] = 1;
    subset_zeta(f, ctx_->generator_count());
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 1; t <= n; ++t) {
      if (f[t]) out.push_back(t);
    }
    std::sort(out.begin(), out.end(), term_less);
    return out;
  }

  friend bool operator==(const RingElement& x, const RingElement& y) {
    return x.ctx_ == y.ctx_ && x.words_ == y.words_;
  }

  friend RingElement operator^(const RingElement& x, const RingElement& y) {
    return combine(x, y, [](std::uint64_t a, std::uint64_t b) { return a ^ b; });
  }
  friend RingElement operator&(const RingElement& x, const RingElement& y) {
    return combine(x, y, [](std::uint64_t a, std::uint64_t b) { return a & b; });
  }
  friend RingElement operator|(const RingElement& x, const RingElement& y) {
    return combine(x, y, [](std::uint64_t a, std::uint64_t b) { return a | b; });
  }
  RingElement operator~() const {
    RingElement e(ctx_);
    for (std::size_t i = 0; i < words_.size(); ++i) e.words_[i] = ~words_[i];
    e.trim();
    return e;
  }

  // Atom sets: is `sub` contained in this element?
  bool covers(const RingElement& sub) const {
    require_same(*this, sub);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (sub.words_[i] & ~words_[i]) return false;
    }
    return true;
  }

  friend void require_same(const RingElement& x, const RingElement& y) {
    if (x.ctx_ != y.ctx_) throw InputError("ring elements belong to different contexts");
  }

 private:
  void set(std::uint32_t subset) {
    const std::uint32_t bit = subset - 1;
    words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
  }

  void trim() {
    const std::uint32_t n = ctx_->atom_count();
    if (n % 64 != 0) words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  }

  template <class Op>
  static RingElement combine(const RingElement& x, const RingElement& y, Op op) {
    require_same(x, y);
    RingElement e(x.ctx_);
    for (std::size_t i = 0; i < x.words_.size(); ++i) e.words_[i] = op(x.words_[i], y.words_[i]);
    return e;
  }

  // f[t] <- XOR_{s subset of t} f[s]; self-inverse over GF(2).
  static void subset_zeta(std::vector<std::uint8_t>& f, std::size_t m) {
    const std::size_t size = f.size();
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t bit = std::size_t{1} << k;
      for (std::size_t s = 0; s < size; ++s) {
        if (s & bit) f[s] ^= f[s ^ bit];
      }
    }
  }

  ContextPtr ctx_;
  std::vector<std::uint64_t> words_;
};

inline RingElement generator(const ContextPtr& ctx, std::string_view name) {
  const auto index = ctx->index_of(name);
  if (!index) throw InputError("unknown generator '" + std::string(name) + "'");
  const std::uint32_t bit = std::uint32_t{1} << *index;
  return RingElement::with_atoms(ctx, [bit](std::uint32_t s) { return (s & bit) != 0; });
}

inline RingElement xor_add(const RingElement& x, const RingElement& y) { return x ^ y; }
inline RingElement and_mul(const RingElement& x, const RingElement& y) { return x & y; }
inline RingElement complement(const RingElement& x) { return ~x; }
inline RingElement unite(const RingElement& x, const RingElement& y) { return x | y; }

// x >= y  <=>  y = x (.) y  <=>  atoms(y) subset of atoms(x).
inline bool geq(const RingElement& x, const RingElement& y) { return x.covers(y); }

inline std::vector<RingElement> atoms(const RingElement& x) {
  std::vector<RingElement> out;
  for (auto s : x.atom_subsets()) out.push_back(RingElement::atom(x.context(), s));
  return out;
}

// Number of ring elements y with x >= y.
inline std::uint64_t geq_degree(const RingElement& x) {
  const std::size_t p = x.popcount();
  if (p >= 64) throw SizeError("geq degree 2^" + std::to_string(p) + " does not fit in 64 bits");
  return std::uint64_t{1} << p;
}

// Compares elements by their polynomial form: fewer monomials first, then the
// monomial lists lexicographically under term_less.
inline bool polynomial_less(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), term_less);
}

// All 2^(2^m - 1) elements. For m = 2 the order is
// 0, A, B, AB, A+B, A+AB, B+AB, A+B+AB.
inline std::vector<RingElement> enumerate_ring(const ContextPtr& ctx) {
  if (ctx->generator_count() > RingContext::kMaxEnumerable) {
    throw SizeError("ring with " + std::to_string(ctx->generator_count()) +
                    " generators is too large to enumerate (limit " +
                    std::to_string(RingContext::kMaxEnumerable) + ")");
  }
  const std::uint64_t count = std::uint64_t{1} << ctx->atom_count();
  struct Entry {
    std::vector<std::uint32_t> terms;
    RingElement element;
  };
  std::vector<Entry> entries;
  entries.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    auto e = RingElement::from_mask(ctx, mask);
    auto terms = e.monomials();
    entries.push_back({std::move(terms), std::move(e)});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return polynomial_less(a.terms, b.terms); });
  std::vector<RingElement> out;
  out.reserve(count);
  for (auto& entry : entries) out.push_back(std::move(entry.element));
  return out;
}

}  // namespace cmpcalc
