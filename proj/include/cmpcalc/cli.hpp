#pragma once

// Command-line front end. Each command builds a RunReport; `run` parses the
// arguments, renders the report and maps failures to exit codes
// (0 ok, 2 bad input, 3 model assumption violated).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmpcalc/error.hpp"
#include "cmpcalc/expr.hpp"
#include "cmpcalc/feature_weights.hpp"
#include "cmpcalc/ideal.hpp"
#include "cmpcalc/order_graph.hpp"
#include "cmpcalc/report.hpp"
#include "cmpcalc/ring.hpp"
#include "cmpcalc/spectral_sort.hpp"

namespace cmpcalc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitModel = 3;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

inline Json atom_labels(const RingElement& x) {
  Json out = Json::array();
  for (auto s : x.atom_subsets()) out.push_back(x.context()->subset_label(s));
  return out;
}

inline Json degree_json(const RingElement& x) {
  if (x.popcount() < 64) return geq_degree(x);
  return "2^" + std::to_string(x.popcount());
}

// `--let name=EXPR` bindings are evaluated in order and may use earlier ones;
// `name=#N` binds the N-th element of the enumerated ring.
inline RunReport cmd_ring_eval(const std::vector<std::string>& generators, const std::string& expression,
                               const std::vector<std::string>& lets = {}) {
  const auto ctx = RingContext::create(generators);
  RunReport report;
  report.command = "ring eval";
  report.config["generators"] = generators;

  Bindings bindings;
  Json lets_json = Json::array();
  std::optional<std::vector<RingElement>> enumerated;
  for (const auto& let : lets) {
    const auto eq = let.find('=');
    if (eq == std::string::npos) throw InputError("--let expects name=EXPR, got '" + let + "'");
    const std::string name = csv::trim(let.substr(0, eq));
    const std::string rhs = csv::trim(let.substr(eq + 1));
    if (!RingContext::is_identifier(name)) throw InputError("invalid binding name '" + name + "'");
    RingElement value = RingElement::zero(ctx);
    if (!rhs.empty() && rhs.front() == '#') {
      if (!enumerated) enumerated = enumerate_ring(ctx);
      const auto index = csv::to_number(rhs.substr(1));
      if (!index || *index < 0 || *index != std::floor(*index) || *index >= static_cast<double>(enumerated->size())) {
        throw InputError("element number '" + rhs + "' out of range");
      }
      value = (*enumerated)[static_cast<std::size_t>(*index)];
    } else {
      value = eval(parse(rhs), ctx, bindings);
    }
    lets_json.push_back({{"name", name}, {"value", format_element(value)}});
    bindings.insert_or_assign(name, std::move(value));
  }
  if (!lets.empty()) report.config["bindings"] = lets_json;

  const Expression e = parse(expression);
  const RingElement value = eval(e, ctx, bindings);
  report.config["expression"] = to_string(e);
  report.results["value"] = format_element(value);
  report.results["expanded"] = expand(e).to_string();
  report.results["cost"] = cost(e);
  report.results["atom_count"] = value.popcount();
  report.results["atoms"] = atom_labels(value);
  report.results["geq_degree"] = degree_json(value);
  return report;
}

inline RunReport cmd_ring_table(const std::vector<std::string>& generators) {
  const auto ctx = RingContext::create(generators);
  if (ctx->generator_count() > 3) throw SizeError("ring table supports at most 3 generators");
  const auto elements = enumerate_ring(ctx);
  std::vector<std::size_t> index_of_mask(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) index_of_mask[elements[i].mask_value()] = i;
  auto index = [&](const RingElement& x) { return index_of_mask[x.mask_value()]; };

  RunReport report;
  report.command = "ring table";
  report.config["generators"] = generators;
  report.config["numbering"] = "by polynomial: fewer monomials first, then monomials by degree and index";

  Json legend = Json::array();
  Json xor_table = Json::array(), and_table = Json::array(), geq_table = Json::array();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    legend.push_back({{"index", i}, {"element", format_element(elements[i])}, {"geq_degree", geq_degree(elements[i])}});
    Json xr = Json::array(), ar = Json::array(), gr = Json::array();
    for (const auto& y : elements) {
      xr.push_back(index(xor_add(elements[i], y)));
      ar.push_back(index(and_mul(elements[i], y)));
      gr.push_back(geq(elements[i], y) ? "+" : ".");
    }
    xor_table.push_back(std::move(xr));
    and_table.push_back(std::move(ar));
    geq_table.push_back(std::move(gr));
  }
  report.results["elements"] = legend;
  report.results["xor"] = xor_table;
  report.results["and"] = and_table;
  report.results["geq"] = geq_table;
  return report;
}

inline RunReport cmd_extract(const std::vector<std::string>& generators, const std::string& relations_text,
                             const std::string& source = "relations") {
  const auto ctx = RingContext::create(generators);
  const auto relations = parse_relations(relations_text, *ctx);
  if (relations.empty()) throw InputError("no relations");

  RunReport report;
  report.command = "extract";
  report.inputs[source] = digest(relations_text);
  report.config["generators"] = generators;
  report.config["relation_count"] = relations.size();

  const RingElement g = principal_generator(relations, ctx);
  report.results["ideal_generator"] = format_element(g);
  report.results["generator_atoms"] = atom_labels(g);
  report.results["ideal_size"] = degree_json(g);
  Json chars = Json::array();
  for (const auto& c : relevant_characteristics(relations, ctx)) {
    chars.push_back({{"atoms", join(atom_labels(c).get<std::vector<std::string>>(), " ")},
                     {"residue", format_element(c)}});
  }
  report.results["characteristic_count"] = chars.size();
  report.results["characteristics"] = chars;
  return report;
}

inline RunReport committor_report(const ComparisonGraph& g) {
  RunReport report;
  report.command = "committor";
  const Committors q = committors(g);
  report.results["vertices"] = g.labels;
  report.results["laplacian"] = to_json(laplacian(g));
  Json sink_labels = Json::array();
  for (auto s : q.sinks) sink_labels.push_back(g.labels[s]);
  report.results["sinks"] = sink_labels;

  Json table = Json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    Json row;
    row["vertex"] = g.labels[v];
    double total = 0;
    for (std::size_t c = 0; c < q.sinks.size(); ++c) {
      const double value = q.values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(c));
      row[g.labels[q.sinks[c]]] = value;
      total += value;
    }
    row["sum"] = total;
    table.push_back(std::move(row));
  }
  report.results["committors"] = table;

  Json shares = Json::array();
  for (std::size_t c = 0; c < q.sinks.size(); ++c) {
    for (std::size_t v = 0; v < g.size(); ++v) {
      const double value = q.values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(c));
      if (v == q.sinks[c] || value <= 0) continue;
      shares.push_back({{"sink", g.labels[q.sinks[c]]}, {"vertex", g.labels[v]}, {"share", value}});
    }
  }
  report.results["representativeness"] = shares;
  return report;
}

inline RunReport cmd_committor_ring(const std::vector<std::string>& generators) {
  const auto ctx = RingContext::create(generators);
  RunReport report = committor_report(build_graph(ctx));
  report.config["generators"] = generators;
  return report;
}

inline RunReport cmd_committor_graph(const std::string& graph_text, const std::string& source = "graph") {
  RunReport report = committor_report(parse_graph_json(graph_text));
  report.inputs[source] = digest(graph_text);
  return report;
}

inline RunReport cmd_sort(const std::string& ratings_text, double shift = 0.0, const std::string& source = "ratings") {
  auto [labels, ratings] = parse_ratings_csv(ratings_text);
  if (!std::isfinite(shift) || shift < 0) throw InputError("--shift must be a non-negative number");
  const RatingMatrix r = shift == 0.0 ? ratings : ratings.shifted(shift);
  const SortResult s = sort_objects(r);
  const SymmetrizationCheck sym = symmetrize_check(s, r);

  RunReport report;
  report.command = "sort";
  report.inputs[source] = digest(ratings_text);
  report.config["diagonal_shift"] = shift;
  report.config["row_sum_target"] = r.row_sum_target();
  report.config["orientation"] = std::string("first object not at 1/2 has vec >= 1/2") +
                                 (s.orientation_flipped ? " (flipped)" : " (kept)");

  auto names = [&](const std::vector<std::size_t>& idx) {
    Json out = Json::array();
    for (auto i : idx) out.push_back(labels[i]);
    return out;
  };
  report.results["objects"] = labels;
  report.results["rating_matrix"] = to_json(r.entries());
  report.results["lambda2"] = s.lambda2.real();
  Json vec = Json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    vec.push_back({{"object", labels[i]}, {"vec", s.vec(static_cast<Eigen::Index>(i))}});
  }
  report.results["vec"] = vec;
  report.results["sorted_row"] = names(s.order);
  report.results["coupled_matrix"] = to_json(s.coupled);
  report.results["fiedler_cut"] = {{"positive", names(s.fiedler_cut.positive)},
                                   {"non_positive", names(s.fiedler_cut.non_positive)}};
  report.results["symmetry_defect"] = sym.symmetry_defect;
  report.results["symmetrized_matrix"] = to_json(sym.c);
  return report;
}

inline RunReport cmd_weights(const std::string& coding_text, const std::string& coords_text, double scale = 10.0,
                             const std::string& coding_source = "coding", const std::string& coords_source = "coords") {
  const FeatureCoding coding = parse_coding_csv(coding_text);
  const LabeledCoordinates raw = parse_coordinates_csv(coords_text);
  if (raw.labels.size() != coding.objects.size()) throw InputError("coding and coordinates list different objects");
  Matrix coords(raw.coords.rows(), raw.coords.cols());
  for (std::size_t i = 0; i < coding.objects.size(); ++i) {
    const auto it = std::find(raw.labels.begin(), raw.labels.end(), coding.objects[i]);
    if (it == raw.labels.end()) throw InputError("no coordinates for object '" + coding.objects[i] + "'");
    coords.row(static_cast<Eigen::Index>(i)) = raw.coords.row(it - raw.labels.begin());
  }

  const PairFeatures features = commonality_features(coding);
  const Vector targets = similarity_targets(coords, scale);
  const WeightModel model = fit_weights(features.matrix, targets);

  RunReport report;
  report.command = "weights";
  report.inputs[coding_source] = digest(coding_text);
  report.inputs[coords_source] = digest(coords_text);
  report.config["scale"] = scale;
  report.config["similarity"] = "exp(-scale * |x_j - x_k|^2)";

  Json pairs = Json::array();
  for (std::size_t p = 0; p < features.pairs.size(); ++p) {
    const auto [j, k] = features.pairs[p];
    std::string bits, sum;
    for (std::size_t c = 0; c < features.rows[p].size(); ++c) {
      bits += static_cast<char>('0' + features.rows[p][c]);
      if (features.rows[p][c]) sum += (sum.empty() ? "w" : "+w") + std::to_string(c + 1);
    }
    pairs.push_back({{"pair", coding.objects[j] + " & " + coding.objects[k]},
                     {"common", bits},
                     {"sum_of_weights", sum.empty() ? "-" : sum},
                     {"intended", targets(static_cast<Eigen::Index>(p))},
                     {"trained", predict(model, features.rows[p])}});
  }
  report.results["training"] = pairs;

  Json weights = Json::array();
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    Json row{{"weight", "w" + std::to_string(c + 1)}, {"characteristic", coding.characteristics[c]}};
    if (model.weights[c]) {
      row["value"] = *model.weights[c];
    } else {
      row["value"] = "unlearned";
    }
    weights.push_back(std::move(row));
  }
  report.results["weights"] = weights;

  const Matrix reduced = reduced_design(features.matrix, model.active_columns);
  report.results["design_rank"] = numerical_rank(reduced);
  report.results["active_columns"] = model.active_columns.size();

  Vector w(static_cast<Eigen::Index>(model.active_columns.size()));
  for (std::size_t i = 0; i < model.active_columns.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = *model.weights[model.active_columns[i]];
  }
  const Vector grad = reduced.transpose() * (reduced * w - targets);
  double kkt = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) kkt = std::max({kkt, -grad(i), std::abs(w(i) * grad(i))});
  report.results["kkt_violation"] = kkt;
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    if (!model.weights[c]) report.warnings.push_back("w" + std::to_string(c + 1) + " (" + coding.characteristics[c] +
                                                     ") never occurs in a commonality and is not learned");
  }
  return report;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(csv::trim(item));
  return out;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Comparison calculus: Boolean ring algebra, committors, spectral sorting, feature weights", "cmpcalc"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string format_name = "text";
  int precision = 5;
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--precision", precision, "Decimals for printed numbers")->check(CLI::Range(0, 17));

  std::string generators;
  std::string expression;
  std::vector<std::string> lets;
  std::string relations_path, graph_path, ratings_path, coding_path, coords_path;
  double shift = 0.0;
  double scale = 10.0;

  auto* ring = app.add_subcommand("ring", "Ring arithmetic");
  ring->require_subcommand(1);
  auto* ring_eval = ring->add_subcommand("eval", "Evaluate an expression over the generators");
  ring_eval->add_option("--generators", generators, "Comma-separated generator names")->required();
  ring_eval->add_option("--let", lets, "Binding name=EXPR or name=#N, evaluated in order");
  ring_eval->add_option("expression", expression, "Expression")->required();
  auto* ring_table = ring->add_subcommand("table", "Print the +, * and >= tables");
  ring_table->add_option("--generators", generators, "Comma-separated generator names")->required();

  auto* extract = app.add_subcommand("extract", "Relevant characteristics under assumption relations");
  extract->add_option("--generators", generators, "Comma-separated generator names")->required();
  extract->add_option("--relations", relations_path, "Relation file")->required();

  auto* committor = app.add_subcommand("committor", "Order-graph Laplacian and committors");
  auto* committor_gens = committor->add_option("--generators", generators, "Comma-separated generator names");
  auto* committor_graph = committor->add_option("--graph", graph_path, "Graph JSON file");
  committor_gens->excludes(committor_graph);

  auto* sort = app.add_subcommand("sort", "Spectral sorting of a rating matrix");
  sort->add_option("--ratings", ratings_path, "Ratings CSV")->required();
  sort->add_option("--shift", shift, "Constant added to the diagonal");

  auto* weights = app.add_subcommand("weights", "Learn characteristic weights from commonalities");
  weights->add_option("--coding", coding_path, "Coding CSV")->required();
  weights->add_option("--coords", coords_path, "Coordinates CSV")->required();
  weights->add_option("--scale", scale, "Similarity scale");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const Format format = format_name == "json" ? Format::Json : format_name == "csv" ? Format::Csv : Format::Text;
  try {
    RunReport report;
    if (*ring_eval) {
      report = cmd_ring_eval(split_list(generators), expression, lets);
    } else if (*ring_table) {
      report = cmd_ring_table(split_list(generators));
    } else if (*extract) {
      report = cmd_extract(split_list(generators), read_file(relations_path), relations_path);
    } else if (*committor) {
      if (!graph_path.empty()) {
        report = cmd_committor_graph(read_file(graph_path), graph_path);
      } else if (!generators.empty()) {
        report = cmd_committor_ring(split_list(generators));
      } else {
        throw InputError("committor needs --generators or --graph");
      }
    } else if (*sort) {
      report = cmd_sort(read_file(ratings_path), shift, ratings_path);
    } else if (*weights) {
      report = cmd_weights(read_file(coding_path), read_file(coords_path), scale, coding_path, coords_path);
    }
    render(out, report, format, precision);
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitModel;
  }
}

}  // namespace cmpcalc::cli
