#include "coda/config_files.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/dataset.hpp"
#include "coda/errors.hpp"

namespace coda {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    f(line, line_no);
  }
}

int sign_token(const std::string& tok) {
  if (tok == "+" || tok == "+1" || tok == "1") return 1;
  if (tok == "-" || tok == "-1") return -1;
  if (tok == "0") return 0;
  return 2;
}

}  // namespace

SbpMatrix parse_sbp(std::string_view text, const std::vector<std::string>& parts) {
  std::vector<std::vector<int>> rows;
  std::vector<std::string> names;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::string name;
    if (const auto colon = line.find(':'); colon != std::string_view::npos) {
      name = std::string(trim(line.substr(0, colon)));
      line = trim(line.substr(colon + 1));
    }
    std::istringstream in{std::string(line)};
    std::vector<int> row;
    std::string tok;
    while (in >> tok) {
      const int s = sign_token(tok);
      if (s == 2) throw ParseError(fmt::format("SBP token '{}' is not one of +, -, 0", tok), line_no, row.size() + 1);
      row.push_back(s);
    }
    if (row.size() != parts.size()) {
      throw ParseError(fmt::format("SBP row has {} tokens, expected {}", row.size(), parts.size()), line_no);
    }
    rows.push_back(std::move(row));
    names.push_back(std::move(name));
  });
  if (rows.empty()) throw ParseError("SBP file has no rows");
  Eigen::MatrixXi signs(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(parts.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < parts.size(); ++c) signs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  const bool any_named = std::any_of(names.begin(), names.end(), [](const std::string& s) { return !s.empty(); });
  if (any_named) {
    for (std::size_t r = 0; r < names.size(); ++r) {
      if (names[r].empty()) names[r] = fmt::format("ilr_{}", r + 1);
    }
  } else {
    names.clear();
  }
  return SbpMatrix(parts, std::move(signs), std::move(names));
}

std::string format_sbp(const SbpMatrix& sbp) {
  std::string out = "# " + fmt::format("{}", fmt::join(sbp.parts(), " ")) + "\n";
  for (std::size_t r = 0; r < sbp.row_count(); ++r) {
    if (!sbp.row_names().empty()) out += sbp.row_names()[r] + ": ";
    for (Eigen::Index c = 0; c < sbp.signs().cols(); ++c) {
      const int s = sbp.signs()(static_cast<Eigen::Index>(r), c);
      out += c ? " " : "";
      out += s > 0 ? "+" : s < 0 ? "-" : "0";
    }
    out += '\n';
  }
  return out;
}

LogRatioGraph parse_graph(std::string_view text, const std::vector<std::string>& parts) {
  std::vector<LogRatioSpec> edges;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto colon = line.find(':');
    const auto slash = line.find('/', colon == std::string_view::npos ? 0 : colon);
    if (colon == std::string_view::npos || slash == std::string_view::npos) {
      throw ParseError("expected 'name: numerator / denominator'", line_no);
    }
    LogRatioSpec e{std::string(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1, slash - colon - 1))),
                   std::string(trim(line.substr(slash + 1)))};
    if (e.name.empty() || e.numerator.empty() || e.denominator.empty()) {
      throw ParseError("edge needs a name, a numerator and a denominator", line_no);
    }
    for (const auto* p : {&e.numerator, &e.denominator}) {
      if (std::find(parts.begin(), parts.end(), *p) == parts.end()) {
        throw ParseError(fmt::format("edge '{}' names unknown part '{}'", e.name, *p), line_no);
      }
    }
    edges.push_back(std::move(e));
  });
  return LogRatioGraph(parts, std::move(edges));
}

std::string format_graph(const LogRatioGraph& graph) {
  std::string out;
  for (const auto& e : graph.edges()) out += fmt::format("{}: {} / {}\n", e.name, e.numerator, e.denominator);
  return out;
}

SbpMatrix reorder_sbp(const SbpMatrix& sbp, const std::vector<std::string>& parts) {
  if (parts.size() != sbp.parts().size()) throw ValidationError("SBP reorder needs the same number of parts");
  Eigen::MatrixXi signs(sbp.signs().rows(), sbp.signs().cols());
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const auto it = std::find(sbp.parts().begin(), sbp.parts().end(), parts[c]);
    if (it == sbp.parts().end()) throw ValidationError(fmt::format("part '{}' is not in the SBP", parts[c]));
    signs.col(static_cast<Eigen::Index>(c)) = sbp.signs().col(it - sbp.parts().begin());
  }
  return SbpMatrix(parts, std::move(signs), sbp.row_names());
}

ResolvedConfig resolve_config(const AnalysisConfig& config, const CompositionSet& set) {
  ResolvedConfig out;
  if (config.scheme) {
    out.scheme = RatioScheme::bind(*config.scheme, set.parts(), config.role_to_part);
  } else if (!config.role_to_part.empty()) {
    throw ValidationError("role mapping given without a ratio scheme");
  }
  const auto parts = set.part_names();

  if (!config.sbp.empty()) {
    const auto builtins = builtin_sbp_names();
    SbpMatrix sbp = std::find(builtins.begin(), builtins.end(), config.sbp) != builtins.end()
                        ? reorder_sbp(builtin_sbp(config.sbp, out.scheme ? out.scheme->parts_in_role_order() : parts), parts)
                        : parse_sbp(read_text_file(config.sbp), parts);
    const auto violations = validate_sbp(sbp);
    if (!violations.empty()) {
      throw ValidationError(fmt::format("invalid SBP: row {}: {}", violations.front().row, violations.front().rule));
    }
    out.sbp = std::move(sbp);
  }

  if (config.graph) {
    LogRatioGraph g = parse_graph(read_text_file(*config.graph), parts);
    const GraphDiagnosis d = validate_graph(g);
    if (!d.valid) throw ValidationError("log-ratio graph " + d.describe());
    out.graph = std::move(g);
  }

  if (config.group_by && !set.has_extra(*config.group_by)) {
    throw ValidationError(fmt::format("group-by column '{}' not found", *config.group_by));
  }
  for (const auto& p : config.predictors) {
    if (!set.has_extra(p)) throw ValidationError(fmt::format("predictor column '{}' not found", p));
  }
  if (config.k_min < 2 || config.k_max < config.k_min) {
    throw ValidationError(fmt::format("invalid k range [{}, {}]", config.k_min, config.k_max));
  }
  if (config.kmeans.restarts == 0) throw ValidationError("restarts must be at least 1");
  return out;
}

}  // namespace coda
