#pragma once

// The strict >= order among nonzero ring elements as a directed graph, its
// Laplacian, and committor (absorption probability) vectors toward the sinks.
// Sinks are the vertices without outgoing edges; for a ring these are atoms.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmpcalc/error.hpp"
#include "cmpcalc/expr.hpp"
#include "cmpcalc/numerics.hpp"
#include "cmpcalc/ring.hpp"

namespace cmpcalc {

struct ComparisonGraph {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> successors;  // ascending, no duplicates
  std::vector<RingElement> elements;                  // empty unless built from a ring

  std::size_t size() const noexcept { return labels.size(); }
};

// Validates a directed acyclic graph without self-loops.
inline ComparisonGraph make_graph(std::vector<std::string> labels,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t n = labels.size();
  if (n == 0) throw InputError("graph has no vertices");
  ComparisonGraph g;
  g.labels = std::move(labels);
  g.successors.resize(n);
  for (auto [from, to] : edges) {
    if (from >= n || to >= n) throw InputError("edge endpoint out of range");
    if (from == to) throw InputError("self-loop on vertex '" + g.labels[from] + "'");
    g.successors[from].push_back(to);
  }
  for (auto& succ : g.successors) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }

  std::vector<std::size_t> indegree(n, 0);
  for (const auto& succ : g.successors) {
    for (auto y : succ) ++indegree[y];
  }
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++visited;
    for (auto y : g.successors[v]) {
      if (--indegree[y] == 0) ready.push_back(y);
    }
  }
  if (visited != n) throw InputError("graph contains a cycle");
  return g;
}

// Vertices: nonzero ring elements in enumeration order; x -> y iff x > y.
inline ComparisonGraph build_graph(const ContextPtr& ctx) {
  auto all = enumerate_ring(ctx);
  ComparisonGraph g;
  for (auto& e : all) {
    if (e.is_zero()) continue;
    g.labels.push_back(format_element(e));
    g.elements.push_back(std::move(e));
  }
  const std::size_t n = g.elements.size();
  g.successors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && geq(g.elements[i], g.elements[j])) g.successors[i].push_back(j);
    }
  }
  return g;
}

// Off-diagonal 1 per edge, diagonal -outdegree; rows sum to zero.
inline Matrix laplacian(const ComparisonGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& succ = g.successors[static_cast<std::size_t>(i)];
    for (auto j : succ) l(i, static_cast<Eigen::Index>(j)) = 1.0;
    l(i, i) = -static_cast<double>(succ.size());
  }
  return l;
}

inline std::vector<std::size_t> sinks(const ComparisonGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.successors[v].empty()) out.push_back(v);
  }
  return out;
}

struct Committors {
  std::vector<std::size_t> sinks;
  Matrix values;  // vertex x sink
};

// q_c(c) = 1, q_c(other sink) = 0, q_c(x) = mean of q_c over successors of x.
// Vertices without a path to c get exactly 0.
inline Committors committors(const ComparisonGraph& g) {
  const std::size_t n = g.size();
  Committors out;
  out.sinks = sinks(g);
  if (out.sinks.empty()) throw InputError("graph has no sink");
  out.values = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(out.sinks.size()));

  std::vector<std::vector<std::size_t>> predecessors(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto y : g.successors[v]) predecessors[y].push_back(v);
  }

  for (std::size_t col = 0; col < out.sinks.size(); ++col) {
    const std::size_t target = out.sinks[col];
    std::vector<bool> reaches(n, false);
    std::deque<std::size_t> queue{target};
    reaches[target] = true;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto p : predecessors[v]) {
        if (!reaches[p]) {
          reaches[p] = true;
          queue.push_back(p);
        }
      }
    }

    std::vector<std::ptrdiff_t> slot(n, -1);
    std::vector<std::size_t> unknowns;
    for (std::size_t v = 0; v < n; ++v) {
      if (v != target && reaches[v]) {
        slot[v] = static_cast<std::ptrdiff_t>(unknowns.size());
        unknowns.push_back(v);
      }
    }
    out.values(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(col)) = 1.0;
    if (unknowns.empty()) continue;

    const auto k = static_cast<Eigen::Index>(unknowns.size());
    Matrix a = Matrix::Zero(k, k);
    Vector rhs = Vector::Zero(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto v = unknowns[static_cast<std::size_t>(r)];
      a(r, r) = static_cast<double>(g.successors[v].size());
      for (auto y : g.successors[v]) {
        if (y == target) {
          rhs(r) += 1.0;
        } else if (slot[y] >= 0) {
          a(r, slot[y]) -= 1.0;
        }
      }
    }
    const Vector q = solve_linear(a, rhs);
    for (Eigen::Index r = 0; r < k; ++r) {
      const double value = std::clamp(q(r), 0.0, 1.0);
      out.values(static_cast<Eigen::Index>(unknowns[static_cast<std::size_t>(r)]), static_cast<Eigen::Index>(col)) =
          value;
    }
  }
  return out;
}

// {"vertices": [labels], "edges": [[from, to], ...]}; endpoints are vertex
// indices or labels.
inline ComparisonGraph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw InputError("graph JSON needs a \"vertices\" array");
  }
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> index;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw InputError("vertex labels must be strings");
    const auto label = v.get<std::string>();
    if (!index.emplace(label, labels.size()).second) throw InputError("duplicate vertex label '" + label + "'");
    labels.push_back(label);
  }
  auto endpoint = [&](const nlohmann::json& e) -> std::size_t {
    if (e.is_number_unsigned()) return e.get<std::size_t>();
    if (e.is_string()) {
      auto it = index.find(e.get<std::string>());
      if (it == index.end()) throw InputError("edge refers to unknown vertex '" + e.get<std::string>() + "'");
      return it->second;
    }
    throw InputError("edge endpoints must be vertex indices or labels");
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw InputError("\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [from, to] pair");
      edges.emplace_back(endpoint(e[0]), endpoint(e[1]));
    }
  }
  return make_graph(std::move(labels), edges);
}

}  // namespace cmpcalc
