#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "coda/composition.hpp"
#include "coda/transforms.hpp"

namespace coda {

/// Parts as vertices, pairwise log-ratios as directed edges
/// (denominator -> numerator). Direction only matters for signs.
class LogRatioGraph {
 public:
  /// Throws ValidationError on unknown parts, self-loops, duplicate edge
  /// names, or two edges over the same unordered pair.
  LogRatioGraph(std::vector<std::string> parts, std::vector<LogRatioSpec> edges);

  const std::vector<std::string>& parts() const noexcept { return parts_; }
  const std::vector<LogRatioSpec>& edges() const noexcept { return edges_; }
  std::size_t vertex(const std::string& part) const;

 private:
  std::vector<std::string> parts_;
  std::vector<LogRatioSpec> edges_;
};

struct GraphDiagnosis {
  bool valid = false;
  std::size_t edge_count = 0;
  std::size_t expected_edge_count = 0;
  /// Connected components of the undirected view; one entry when connected.
  std::vector<std::vector<std::string>> components;
  /// One witness cycle (vertex sequence), empty when acyclic.
  std::vector<std::string> cycle;

  bool connected() const noexcept { return components.size() == 1; }
  bool acyclic() const noexcept { return cycle.empty(); }

  /// Human-readable single-line summary, e.g.
  /// "invalid: cycle {x1,x3,x4}; disconnected components {x1,x3,x4} {x2}".
  std::string describe() const;
};

/// Valid iff the graph has D-1 edges, is connected and acyclic.
GraphDiagnosis validate_graph(const LogRatioGraph& graph);

struct DerivationTerm {
  std::string edge;
  int coefficient = 1;  // +1 along the edge direction, -1 against it

  friend bool operator==(const DerivationTerm&, const DerivationTerm&) = default;
};

struct DerivationPath {
  LogRatioSpec target;
  /// Edges along the unique path from the target's denominator to its numerator.
  std::vector<DerivationTerm> terms;
};

/// Expresses `target` as a signed sum of the graph's edge log-ratios.
/// Throws ValidationError if the graph is invalid or a target part is unknown.
DerivationPath derive_logratio(const LogRatioGraph& graph, const LogRatioSpec& target);

/// Evaluates the derivation on every firm of `set` using the edges' own
/// pairwise log-ratios.
Eigen::VectorXd evaluate_derivation(const DerivationPath& path, const LogRatioGraph& graph, const CompositionSet& set);

}  // namespace coda
