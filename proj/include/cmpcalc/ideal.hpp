#pragma once

// Assumptions about objects as ring relations. A finite set of relations
// generates a principal ideal whose generator is the union of the relation
// left-hand sides; everything in the ideal is assumed to vanish.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmpcalc/error.hpp"
#include "cmpcalc/expr.hpp"
#include "cmpcalc/ring.hpp"

namespace cmpcalc {

// lhs = 0
struct Equation {
  Expression lhs;
};

// greater >= lesser
struct Dominance {
  Expression greater;
  Expression lesser;
};

using Relation = std::variant<Equation, Dominance>;

// c >= b  <=>  b + (c*b) = 0
inline Equation dominance_to_equation(const Dominance& d) {
  return Equation{Expression::xor_of({d.lesser, Expression::and_of({d.greater, d.lesser})})};
}

inline const Expression& relation_lhs(const Relation& r, Equation& scratch) {
  if (const auto* eq = std::get_if<Equation>(&r)) return eq->lhs;
  scratch = dominance_to_equation(std::get<Dominance>(r));
  return scratch.lhs;
}

inline RingElement principal_generator(std::span<const Relation> relations, const ContextPtr& ctx) {
  if (relations.empty()) throw InputError("no relations");
  RingElement g = RingElement::zero(ctx);
  Equation scratch{Expression::zero()};
  for (const auto& r : relations) g = unite(g, eval(relation_lhs(r, scratch), ctx));
  return g;
}

// x is a multiple of g  <=>  x * g = x.
inline bool in_ideal(const RingElement& x, const RingElement& g) { return geq(g, x); }

inline constexpr std::size_t kMaxIdealAtoms = 20;

// All sub-elements of g, ascending by the bit pattern over g's atoms.
inline std::vector<RingElement> ideal_elements(const RingElement& g) {
  const auto subsets = g.atom_subsets();
  if (subsets.size() > kMaxIdealAtoms) {
    throw SizeError("ideal with 2^" + std::to_string(subsets.size()) + " elements is too large to enumerate");
  }
  std::vector<RingElement> atom_elements;
  atom_elements.reserve(subsets.size());
  for (auto s : subsets) atom_elements.push_back(RingElement::atom(g.context(), s));

  const std::uint64_t count = std::uint64_t{1} << subsets.size();
  std::vector<RingElement> out;
  out.reserve(count);
  for (std::uint64_t pick = 0; pick < count; ++pick) {
    RingElement e = RingElement::zero(g.context());
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (pick & (std::uint64_t{1} << i)) e = e | atom_elements[i];
    }
    out.push_back(std::move(e));
  }
  return out;
}

// Coset representative sharing no atom with g: x * (1 + g).
inline RingElement residue(const RingElement& x, const RingElement& g) { return and_mul(x, complement(g)); }

inline constexpr std::size_t kMaxCharacteristicGenerators = 16;

// Nonzero residues of the atoms of unity, deduplicated, ordered by atom code.
inline std::vector<RingElement> relevant_characteristics(std::span<const Relation> relations, const ContextPtr& ctx) {
  if (ctx->generator_count() > kMaxCharacteristicGenerators) {
    throw SizeError("characteristic extraction supports at most " +
                    std::to_string(kMaxCharacteristicGenerators) + " generators");
  }
  const RingElement g = principal_generator(relations, ctx);
  std::vector<RingElement> out;
  for (std::uint32_t s = 1; s <= ctx->atom_count(); ++s) {
    RingElement r = residue(RingElement::atom(ctx, s), g);
    if (r.is_zero()) continue;
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  return out;
}

// One relation per line: `EXPR = EXPR` (equivalent to lhs + rhs = 0) or
// `EXPR >= EXPR`. '#' starts a comment; blank lines are skipped.
inline std::vector<Relation> parse_relations(std::string_view text, const RingContext& ctx) {
  std::vector<Relation> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto where = [&](const std::string& msg) { return "line " + std::to_string(line_no) + ": " + msg; };
    try {
      if (const auto ge = line.find(">="); ge != std::string_view::npos) {
        out.emplace_back(Dominance{parse(line.substr(0, ge), ctx), parse(line.substr(ge + 2), ctx)});
      } else if (const auto eq = line.find('='); eq != std::string_view::npos) {
        Expression lhs = parse(line.substr(0, eq), ctx);
        Expression rhs = parse(line.substr(eq + 1), ctx);
        if (rhs.kind() == Expression::Kind::Zero) {
          out.emplace_back(Equation{std::move(lhs)});
        } else {
          out.emplace_back(Equation{Expression::xor_of({std::move(lhs), std::move(rhs)})});
        }
      } else {
        throw InputError("expected 'EXPR = 0' or 'EXPR >= EXPR'");
      }
    } catch (const InputError& e) {
      throw InputError(where(e.what()));
    }
  }
  return out;
}

}  // namespace cmpcalc
