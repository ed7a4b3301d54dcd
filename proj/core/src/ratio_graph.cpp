#include "coda/ratio_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/errors.hpp"

namespace coda {

namespace {

struct Adjacent {
  std::size_t vertex;
  std::size_t edge;
};

std::vector<std::vector<Adjacent>> adjacency(const LogRatioGraph& g) {
  std::vector<std::vector<Adjacent>> adj(g.parts().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const std::size_t a = g.vertex(g.edges()[e].numerator);
    const std::size_t b = g.vertex(g.edges()[e].denominator);
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }
  return adj;
}

}  // namespace

LogRatioGraph::LogRatioGraph(std::vector<std::string> parts, std::vector<LogRatioSpec> edges)
    : parts_(std::move(parts)), edges_(std::move(edges)) {
  std::set<std::string> names;
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : edges_) {
    if (e.numerator == e.denominator) throw ValidationError(fmt::format("edge '{}' is a self-loop", e.name));
    if (!names.insert(e.name).second) throw ValidationError(fmt::format("duplicate edge name '{}'", e.name));
    const std::size_t a = vertex(e.numerator);
    const std::size_t b = vertex(e.denominator);
    if (!pairs.insert(std::minmax(a, b)).second) {
      throw ValidationError(fmt::format("edge '{}' duplicates the pair {}/{}", e.name, e.numerator, e.denominator));
    }
  }
}

std::size_t LogRatioGraph::vertex(const std::string& part) const {
  const auto it = std::find(parts_.begin(), parts_.end(), part);
  if (it == parts_.end()) throw ValidationError(fmt::format("unknown part '{}' in log-ratio graph", part));
  return static_cast<std::size_t>(it - parts_.begin());
}

std::string GraphDiagnosis::describe() const {
  if (valid) return fmt::format("valid: {} edges, connected and acyclic", edge_count);
  std::vector<std::string> problems;
  if (edge_count != expected_edge_count) {
    problems.push_back(fmt::format("{} edges where {} are required", edge_count, expected_edge_count));
  }
  if (!acyclic()) problems.push_back(fmt::format("cycle {{{}}}", fmt::join(cycle, ",")));
  if (!connected()) {
    std::vector<std::string> groups;
    for (const auto& c : components) groups.push_back(fmt::format("{{{}}}", fmt::join(c, ",")));
    problems.push_back(fmt::format("disconnected components {}", fmt::join(groups, " ")));
  }
  return fmt::format("invalid: {}", fmt::join(problems, "; "));
}

GraphDiagnosis validate_graph(const LogRatioGraph& graph) {
  const std::size_t d = graph.parts().size();
  const auto adj = adjacency(graph);
  GraphDiagnosis out;
  out.edge_count = graph.edges().size();
  out.expected_edge_count = d == 0 ? 0 : d - 1;

  // Components and a witness cycle from one iterative DFS per component.
  std::vector<int> component(d, -1);
  std::vector<std::size_t> parent(d, d);
  std::vector<std::size_t> parent_edge(d, graph.edges().size());
  std::vector<std::size_t> depth(d, 0);
  for (std::size_t root = 0; root < d; ++root) {
    if (component[root] >= 0) continue;
    const int id = static_cast<int>(out.components.size());
    out.components.emplace_back();
    std::vector<std::size_t> stack{root};
    component[root] = id;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [w, e] : adj[v]) {
        if (e == parent_edge[v]) continue;
        if (component[w] < 0) {
          component[w] = id;
          parent[w] = v;
          parent_edge[w] = e;
          depth[w] = depth[v] + 1;
          stack.push_back(w);
        } else if (out.cycle.empty()) {
          // Non-tree edge v-w closes a cycle through their common ancestor.
          std::vector<std::size_t> left{v};
          std::vector<std::size_t> right{w};
          std::size_t a = v;
          std::size_t b = w;
          while (depth[a] > depth[b]) left.push_back(a = parent[a]);
          while (depth[b] > depth[a]) right.push_back(b = parent[b]);
          while (a != b) {
            left.push_back(a = parent[a]);
            right.push_back(b = parent[b]);
          }
          right.pop_back();
          left.insert(left.end(), right.rbegin(), right.rend());
          std::vector<std::size_t> ordered = left;
          std::sort(ordered.begin(), ordered.end());
          ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
          for (std::size_t x : ordered) out.cycle.push_back(graph.parts()[x]);
        }
      }
    }
  }
  for (std::size_t v = 0; v < d; ++v) out.components[static_cast<std::size_t>(component[v])].push_back(graph.parts()[v]);
  out.valid = out.edge_count == out.expected_edge_count && out.connected() && out.acyclic();
  return out;
}

DerivationPath derive_logratio(const LogRatioGraph& graph, const LogRatioSpec& target) {
  const std::size_t from = graph.vertex(target.denominator);
  const std::size_t to = graph.vertex(target.numerator);
  if (from == to) throw ValidationError(fmt::format("target '{}' has the same numerator and denominator", target.name));
  const auto diagnosis = validate_graph(graph);
  if (!diagnosis.valid) throw ValidationError("log-ratio graph is " + diagnosis.describe());

  const auto adj = adjacency(graph);
  const std::size_t d = graph.parts().size();
  std::vector<std::size_t> parent(d, d);
  std::vector<std::size_t> via(d, 0);
  std::vector<std::size_t> stack{from};
  parent[from] = from;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& [w, e] : adj[v]) {
      if (parent[w] != d) continue;
      parent[w] = v;
      via[w] = e;
      stack.push_back(w);
    }
  }

  DerivationPath path{target, {}};
  for (std::size_t v = to; v != from; v = parent[v]) {
    const auto& edge = graph.edges()[via[v]];
    // Stepping parent[v] -> v follows the arrow when v is the numerator.
    const int sign = graph.vertex(edge.numerator) == v ? 1 : -1;
    path.terms.push_back({edge.name, sign});
  }
  std::reverse(path.terms.begin(), path.terms.end());
  return path;
}

Eigen::VectorXd evaluate_derivation(const DerivationPath& path, const LogRatioGraph& graph, const CompositionSet& set) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(set.values().rows());
  for (const auto& term : path.terms) {
    const auto it = std::find_if(graph.edges().begin(), graph.edges().end(),
                                 [&](const LogRatioSpec& e) { return e.name == term.edge; });
    if (it == graph.edges().end()) throw ValidationError(fmt::format("unknown edge '{}'", term.edge));
    out += static_cast<double>(term.coefficient) * pairwise_logratio(set, *it);
  }
  return out;
}

}  // namespace coda
