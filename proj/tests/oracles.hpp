#pragma once

// Reference implementations used to check the library. They are written
// directly from the definitions and share no code with it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmpcalc/expr.hpp"
#include "cmpcalc/ring.hpp"

namespace oracle {

// An element of the free Boolean ring on m generators as the set of Venn
// regions it covers. A region is the nonempty set of generators whose sets
// contain it, written as a bit pattern r in [1, 2^m).
using Regions = std::set<std::uint32_t>;

inline Regions generator_regions(std::size_t m, std::size_t k) {
  Regions out;
  for (std::uint32_t r = 1; r < (1u << m); ++r) {
    if (r & (1u << k)) out.insert(r);
  }
  return out;
}

inline Regions sym_diff(const Regions& x, const Regions& y) {
  Regions out;
  std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  return out;
}

inline Regions intersect(const Regions& x, const Regions& y) {
  Regions out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  return out;
}

inline Regions set_union(const Regions& x, const Regions& y) {
  Regions out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  return out;
}

inline Regions regions_of(const cmpcalc::RingElement& x) {
  Regions out;
  const auto m = x.context()->generator_count();
  for (std::uint32_t r = 1; r < (1u << m); ++r) {
    if (x.contains_atom(r)) out.insert(r);
  }
  return out;
}

// Boolean value of an expression when exactly the generators in `region` are
// true; extra bindings map a name to a region set.
inline bool truth(const cmpcalc::Expression& e, const std::vector<std::string>& names, std::uint32_t region,
                  const std::map<std::string, Regions>& bound = {}) {
  using Kind = cmpcalc::Expression::Kind;
  switch (e.kind()) {
    case Kind::Zero:
      return false;
    case Kind::One:
      return true;
    case Kind::Var: {
      if (auto it = bound.find(e.name()); it != bound.end()) return it->second.count(region) > 0;
      const auto k = std::find(names.begin(), names.end(), e.name()) - names.begin();
      return (region >> k) & 1u;
    }
    case Kind::Xor: {
      bool v = false;
      for (const auto& c : e.children()) v ^= truth(c, names, region, bound);
      return v;
    }
    case Kind::And: {
      for (const auto& c : e.children()) {
        if (!truth(c, names, region, bound)) return false;
      }
      return true;
    }
  }
  return false;
}

inline Regions regions_of(const cmpcalc::Expression& e, const std::vector<std::string>& names,
                          const std::map<std::string, Regions>& bound = {}) {
  Regions out;
  for (std::uint32_t r = 1; r < (1u << names.size()); ++r) {
    if (truth(e, names, r, bound)) out.insert(r);
  }
  return out;
}

// Monomials of a polynomial text like "a+b*c", as sets of names.
inline std::set<std::set<std::string>> monomial_sets(const std::string& text) {
  std::set<std::set<std::string>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('+', start);
    if (end == std::string::npos) end = text.size();
    std::string term = text.substr(start, end - start);
    term.erase(std::remove(term.begin(), term.end(), ' '), term.end());
    std::set<std::string> factors;
    std::size_t f = 0;
    while (f <= term.size()) {
      auto g = term.find('*', f);
      if (g == std::string::npos) g = term.size();
      if (g > f) factors.insert(term.substr(f, g - f));
      f = g + 1;
    }
    if (term != "0" && !term.empty()) {
      if (!out.erase(factors)) out.insert(factors);
    }
    start = end + 1;
  }
  return out;
}

inline cmpcalc::RingElement random_element(const cmpcalc::ContextPtr& ctx, std::mt19937_64& rng) {
  const auto atoms = ctx->atom_count();
  std::uint64_t mask = rng();
  if (atoms < 64) mask &= (std::uint64_t{1} << atoms) - 1;
  return cmpcalc::RingElement::from_mask(ctx, mask);
}

inline cmpcalc::Expression random_expression(const std::vector<std::string>& names, std::mt19937_64& rng, int depth) {
  using cmpcalc::Expression;
  std::uniform_int_distribution<int> pick(0, 9);
  const int kind = depth <= 0 ? pick(rng) % 4 : pick(rng);
  if (kind == 0) return Expression::zero();
  if (kind == 1) return Expression::one();
  if (kind <= 4) return Expression::var(names[rng() % names.size()]);
  std::vector<Expression> children;
  const std::size_t arity = 2 + rng() % 2;
  for (std::size_t i = 0; i < arity; ++i) children.push_back(random_expression(names, rng, depth - 1));
  if (kind == 9) return Expression::complement_of(std::move(children.front()));
  return kind % 2 ? Expression::xor_of(std::move(children)) : Expression::and_of(std::move(children));
}

// Random DAG with edges only from lower to higher index.
inline std::vector<std::vector<std::size_t>> random_dag(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(density);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) succ[i].push_back(j);
    }
  }
  return succ;
}

// Fraction of uniform random walks from `start` absorbed in each vertex.
inline std::vector<double> absorption_frequencies(const std::vector<std::vector<std::size_t>>& succ, std::size_t start,
                                                  std::size_t walks, std::mt19937_64& rng) {
  std::vector<double> hits(succ.size(), 0.0);
  for (std::size_t w = 0; w < walks; ++w) {
    std::size_t v = start;
    while (!succ[v].empty()) v = succ[v][rng() % succ[v].size()];
    hits[v] += 1.0;
  }
  for (auto& h : hits) h /= static_cast<double>(walks);
  return hits;
}

// Projected gradient descent for min |Ax - b|^2, x >= 0, stopped when an
// iteration moves x by less than `tol`.
inline Eigen::VectorXd projected_gradient_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol) {
  const Eigen::MatrixXd g = a.transpose() * a;
  const Eigen::VectorXd c = a.transpose() * b;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd y = x;
  double t = 1.0;
  for (int it = 0; it < 2000000; ++it) {
    Eigen::VectorXd next = (y - (g * y - c) / lipschitz).cwiseMax(0.0);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    y = next + ((t - 1.0) / t_next) * (next - x);
    const double moved = (next - x).cwiseAbs().maxCoeff();
    x = next;
    t = t_next;
    if (moved < tol && it > 10) break;
  }
  return x;
}

// Eigenvalues from the characteristic polynomial: Faddeev-LeVerrier
// coefficients, Durand-Kerner roots, then Newton steps on det(A - zI) using
// d/dz log det(A - zI) = -tr((A - zI)^-1).
inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
  using C = std::complex<double>;
  const auto n = a.rows();
  std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);  // z^n + c1 z^(n-1) + ... + cn
  coeff[0] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + coeff[static_cast<std::size_t>(k - 1)] * Eigen::MatrixXd::Identity(n, n);
    coeff[static_cast<std::size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
  }
  auto poly = [&](C z) {
    C v = 1.0;
    for (std::size_t k = 1; k < coeff.size(); ++k) v = v * z + coeff[k];
    return v;
  };
  double radius = 0;
  for (std::size_t k = 1; k < coeff.size(); ++k) radius = std::max(radius, std::abs(coeff[k]));
  radius = 1.0 + radius;
  std::vector<C> roots(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = std::polar(radius * 0.9, 0.4 + 2.0 * M_PI * i / n);
  for (int it = 0; it < 2000; ++it) {
    double moved = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      C denom = 1.0;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (i != j) denom *= roots[i] - roots[j];
      }
      const C step = poly(roots[i]) / denom;
      roots[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14 * radius) break;
  }
  const Eigen::MatrixXcd ac = a.cast<C>();
  for (auto& z : roots) {
    for (int it = 0; it < 5; ++it) {
      const Eigen::MatrixXcd shifted = ac - z * Eigen::MatrixXcd::Identity(n, n);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
      const C tr = lu.inverse().trace();
      if (!std::isfinite(std::abs(tr)) || std::abs(tr) < 1e-300) break;
      const C step = -1.0 / tr;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
  }
  return roots;
}

// Largest distance between two multisets of complex numbers under greedy
// nearest matching.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (const auto& x : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](auto p, auto q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

// Square matrix with off-diagonal entries in [lo, hi] and the diagonal chosen
// so all rows share the largest off-diagonal row sum.
inline Eigen::MatrixXd equal_row_sum_matrix(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? 0.0 : u(rng);
  }
  const Eigen::VectorXd sums = m.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = sums.maxCoeff() - sums(i);
  return m;
}

}  // namespace oracle
