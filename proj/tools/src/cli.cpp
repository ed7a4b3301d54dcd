#include "coda_cli/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coda/boxplot.hpp"
#include "coda/composition.hpp"
#include "coda/config_files.hpp"
#include "coda/dataset.hpp"
#include "coda/errors.hpp"
#include "coda/industry_stats.hpp"
#include "coda/multivariate.hpp"
#include "coda/ratio_graph.hpp"
#include "coda/regress.hpp"
#include "coda/reports.hpp"
#include "coda/reproduction.hpp"
#include "coda/svg.hpp"
#include "coda/table.hpp"
#include "coda/transforms.hpp"
#include "coda/zeros.hpp"

namespace coda::cli {

namespace {

struct Flags {
  std::string data;
  std::vector<std::string> parts;
  std::string firm_column = "Firm";
  std::vector<std::string> categorical;
  std::string delimiter = ",";
  std::string scheme;
  std::vector<std::string> roles;
  std::string sbp;
  std::string graph;
  std::string group_by;
  std::optional<std::size_t> k;
  std::optional<std::size_t> k_min;
  std::optional<std::size_t> k_max;
  std::size_t restarts = 25;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
  double zero_fraction = kDefaultZeroReplacementFraction;
  bool allow_flagged = false;
  bool replace = false;
  std::string kind;
  std::string responses = "pairwise";
  std::vector<std::string> predictors;
  std::vector<std::string> recode;
  std::vector<std::string> links;
  std::string out = "coda_out";
  int decimals = -1;
};

char delimiter_char(const std::string& d) {
  if (d == "\\t" || d == "tab") return '\t';
  if (d.size() != 1) throw ValidationError(fmt::format("delimiter must be a single character, got '{}'", d));
  return d.front();
}

std::uint64_t default_seed() {
  const char* env = std::getenv("CODA_LEDGER_SEED");
  if (env == nullptr || *env == '\0') return 42;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ValidationError(fmt::format("CODA_LEDGER_SEED must be a non-negative integer, got '{}'", s));
  }
  return v;
}

CompositionSet load(const Flags& f) {
  if (f.data.empty()) return load_winery();
  DatasetLayout layout;
  layout.firm_column = f.firm_column;
  layout.part_columns = f.parts;
  layout.categorical_columns = f.categorical;
  layout.delimiter = delimiter_char(f.delimiter);
  return read_dataset(f.data, layout);
}

AnalysisConfig config_from(const Flags& f) {
  AnalysisConfig c;
  if (!f.scheme.empty()) c.scheme = scheme_kind_from_string(f.scheme);
  for (const auto& r : f.roles) {
    const auto eq = r.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("--role expects role=part, got '{}'", r));
    c.role_to_part[r.substr(0, eq)] = r.substr(eq + 1);
  }
  c.sbp = f.sbp;
  if (!f.graph.empty()) c.graph = f.graph;
  if (!f.group_by.empty()) c.group_by = f.group_by;
  c.kmeans.restarts = f.restarts;
  c.kmeans.seed = f.seed ? *f.seed : default_seed();
  c.kmeans.parallel = f.parallel;
  if (f.k) c.kmeans.k = *f.k;
  c.k_min = f.k_min.value_or(2);
  c.k_max = f.k_max.value_or(8);
  c.predictors = f.predictors;
  c.out_dir = f.out;
  return c;
}

/// The scheme to use for ratio tables: the requested one, else whichever
/// built-in scheme matches the number of parts.
std::optional<RatioScheme> scheme_for(const ResolvedConfig& rc, const CompositionSet& set) {
  if (rc.scheme) return rc.scheme;
  for (const auto kind : {SchemeKind::dupont4, SchemeKind::balance6}) {
    if (scheme_roles(kind).size() == set.part_count()) return RatioScheme::bind(kind, set.parts());
  }
  return std::nullopt;
}

/// Edges of the graph file, else the DuPont graph when the data fit dupont4.
std::vector<LogRatioSpec> pairwise_specs(const ResolvedConfig& rc, const CompositionSet& set) {
  if (rc.graph) return rc.graph->edges();
  const auto scheme = scheme_for(rc, set);
  if (scheme && scheme->kind() == SchemeKind::dupont4) {
    return {{"turnover", scheme->part_for("revenues"), scheme->part_for("assets")},
            {"margin", scheme->part_for("revenues"), scheme->part_for("costs")},
            {"leverage", scheme->part_for("liabilities"), scheme->part_for("assets")}};
  }
  throw ValidationError("pairwise log-ratios need --graph (no default graph for these parts)");
}

SbpMatrix sbp_for(const ResolvedConfig& rc, const CompositionSet& set) {
  if (rc.sbp) return *rc.sbp;
  const auto scheme = scheme_for(rc, set);
  if (!scheme) throw ValidationError("ilr coordinates need --sbp (no default partition for these parts)");
  return reorder_sbp(builtin_sbp(to_string(scheme->kind()), scheme->parts_in_role_order()), set.part_names());
}

std::vector<std::string> group_labels(const CompositionSet& set, const std::string& column) {
  const ExtraColumn& e = set.extra(column);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < set.row_count(); ++i) out.push_back(e.label(i).value_or(std::string(kMissingMarker)));
  return out;
}

void write_table(const Flags& f, const std::string& stem, const Table& t, int default_decimals, std::ostream& out) {
  const int d = f.decimals >= 0 ? f.decimals : default_decimals;
  const std::filesystem::path dir(f.out);
  emit_table(t, TableFormat::csv, d, dir / (stem + ".csv"));
  emit_table(t, TableFormat::markdown, d, dir / (stem + ".md"));
  out << "wrote " << (dir / (stem + ".csv")).string() << '\n';
}

void write_svg(const Flags& f, const std::string& stem, const std::string& svg, std::ostream& out) {
  const auto path = std::filesystem::path(f.out) / (stem + ".svg");
  write_text_file(path, svg);
  out << "wrote " << path.string() << '\n';
}

std::vector<std::pair<std::string, std::string>> parse_links(const std::vector<std::string>& links) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& l : links) {
    const auto slash = l.find('/');
    if (slash == std::string::npos) throw ValidationError(fmt::format("--link expects numerator/denominator, got '{}'", l));
    out.emplace_back(l.substr(0, slash), l.substr(slash + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const ResolvedConfig rc = resolve_config(config_from(f), set);
  const auto violations = validate(set);
  std::vector<std::string> extras;
  for (const auto& e : set.extras()) extras.push_back(e.name);
  out << fmt::format("dataset: n={} D={} parts={} extras={}\n", set.row_count(), set.part_count(),
                     fmt::join(set.part_names(), ","), fmt::join(extras, ","));
  if (rc.graph) out << "graph: " << validate_graph(*rc.graph).describe() << '\n';
  if (rc.sbp) out << "sbp: valid (" << rc.sbp->row_count() << " coordinates)\n";
  if (!violations.empty()) {
    out << render_table(violation_table(violations), TableFormat::csv, 6);
    const auto& v = violations.front();
    throw ValidationError(fmt::format("{} non-positive or non-finite compositional cell(s); first: firm '{}' part '{}' ({})",
                                      violations.size(), v.firm, v.part, v.reason));
  }
  out << "ok\n";
  return kExitOk;
}

int cmd_zeros(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const ZeroReport report = zero_report(set);
  const Table t = zero_table(report);
  out << render_table(t, TableFormat::csv, 4);
  write_table(f, "zeros", t, 4, out);
  if (f.replace) {
    const CompositionSet replaced = replace_zeros(set, detection_limits(set), f.zero_fraction, f.allow_flagged);
    const auto path = std::filesystem::path(f.out) / "replaced.csv";
    write_dataset(replaced, path, delimiter_char(f.delimiter));
    out << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_transform(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const ResolvedConfig rc = resolve_config(config_from(f), set);
  require_valid(set);
  std::string kind = f.kind;
  if (kind.empty()) kind = !f.graph.empty() ? "pairwise" : !f.sbp.empty() ? "ilr" : "clr";
  LogRatioMatrix m;
  if (kind == "pairwise") {
    const auto specs = pairwise_specs(rc, set);
    m = pairwise_logratios(set, specs);
  } else if (kind == "clr") {
    m = clr(set);
  } else if (kind == "ilr") {
    m = ilr(set, sbp_for(rc, set));
  } else {
    throw ValidationError(fmt::format("unknown transform '{}' (expected pairwise, clr or ilr)", kind));
  }
  CompositionSet extended = set;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    ExtraColumn::Numeric col;
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) col.emplace_back(m.values(i, static_cast<Eigen::Index>(c)));
    extended = extended.with_extra({m.columns[c], std::move(col)});
  }
  const auto path = std::filesystem::path(f.out) / "transformed.csv";
  write_dataset(extended, path, delimiter_char(f.delimiter));
  out << fmt::format("{} columns: {}\n", to_string(m.kind), fmt::join(m.columns, ", "));
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_centre(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const ResolvedConfig rc = resolve_config(config_from(f), set);
  require_valid(set);
  const auto scheme = scheme_for(rc, set);
  std::vector<CompositionalCentre> centres;
  std::vector<std::string> names;
  std::vector<GroupRatioRow> rows;
  if (!f.group_by.empty() && scheme) {
    rows = group_ratio_table(set, *scheme, f.group_by);
    for (const auto& r : rows) {
      centres.push_back(r.centre);
      names.push_back(r.group == "overall" ? "overall" : fmt::format("{} {} (n={})", f.group_by, r.group, r.firms));
    }
  } else if (!f.group_by.empty()) {
    const auto labels = group_labels(set, f.group_by);
    std::vector<std::string> levels;
    for (const auto& l : labels) {
      if (l != kMissingMarker && std::find(levels.begin(), levels.end(), l) == levels.end()) levels.push_back(l);
    }
    std::sort(levels.begin(), levels.end());
    for (const auto& l : levels) {
      centres.push_back(compositional_centre(set, rows_where(set, f.group_by, l)));
      names.push_back(fmt::format("{} {}", f.group_by, l));
    }
    centres.push_back(compositional_centre(set));
    names.push_back("overall");
  } else {
    centres.push_back(compositional_centre(set));
    names.push_back("overall");
  }
  const Table ct = centre_table(names, centres);
  out << render_table(ct, TableFormat::markdown, f.decimals >= 0 ? f.decimals : 4);
  write_table(f, "centre", ct, 4, out);
  if (scheme) {
    const Table rt = rows.empty() ? centre_ratio_table(names, centres, *scheme) : ratio_table(rows);
    out << render_table(rt, TableFormat::markdown, f.decimals >= 0 ? f.decimals : 3);
    write_table(f, "centre_ratios", rt, 3, out);
  }
  return kExitOk;
}

int cmd_biplot(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const ResolvedConfig rc = resolve_config(config_from(f), set);
  require_valid(set);
  const BiplotModel model = biplot(set);
  auto links = parse_links(f.links);
  if (links.empty() && rc.graph) {
    for (const auto& e : rc.graph->edges()) links.emplace_back(e.numerator, e.denominator);
  }
  std::vector<std::string> groups;
  if (!f.group_by.empty()) groups = group_labels(set, f.group_by);
  const std::string svg = render_biplot({"CoDa biplot", &model, groups, links});
  out << fmt::format("explained variance (2 dims): {:.4f}\n", model.explained_variance_fraction);
  for (const auto& [num, den] : links) {
    const LinkProjection p = link_projection(model, num, den, set);
    out << fmt::format("link {}/{}: Spearman rank correlation with log-ratio {:.4f}\n", num, den, p.rank_correlation);
  }
  write_table(f, "biplot_coordinates", biplot_table(set, model), 6, out);
  write_svg(f, "biplot", svg, out);
  return kExitOk;
}

int cmd_cluster(const Flags& f, std::ostream& out) {
  const CompositionSet set = load(f);
  const AnalysisConfig cfg = config_from(f);
  const ResolvedConfig rc = resolve_config(cfg, set);
  require_valid(set);
  const std::size_t k_max = std::min(cfg.k_max, set.row_count() - 1);
  if (k_max < cfg.k_min) throw ValidationError(fmt::format("k range [{}, {}] is empty for n={}", cfg.k_min, cfg.k_max, set.row_count()));
  const SweepResult sweep = sweep_k(set, cfg.k_min, k_max, cfg.kmeans);
  KMeansOptions opts = cfg.kmeans;
  if (!f.k) opts.k = sweep.best_silhouette_k;
  const ClusterModel model = kmeans_clr(set, opts);

  std::vector<std::string> sizes;
  for (auto s : model.sizes) sizes.push_back(std::to_string(s));
  out << fmt::format("k={} seed={} restarts={} sizes={} within_ss={:.6f} silhouette={:.6f} calinski_harabasz={:.6f}\n",
                     model.k, model.seed, model.restarts, fmt::join(sizes, ","), model.within_ss, model.silhouette,
                     model.calinski_harabasz);
  out << fmt::format("sweep best k: silhouette={} calinski_harabasz={}\n", sweep.best_silhouette_k,
                     sweep.best_calinski_harabasz_k);

  write_table(f, "cluster_assignment", assignment_table(set, model.assignment), 0, out);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < model.k; ++c) names.push_back(fmt::format("Cluster {} (n={})", c + 1, model.sizes[c]));
  write_table(f, "cluster_centres", centre_table(names, model.centres), 4, out);
  if (const auto scheme = scheme_for(rc, set)) {
    write_table(f, "cluster_ratios", centre_ratio_table(names, model.centres, *scheme), 3, out);
  }
  write_table(f, "cluster_sweep", sweep_table(sweep), 4, out);

  ScatterFigure sil{"Silhouette by k", "k", "silhouette", {}, {}, {}, true};
  ScatterFigure ch{"Calinski-Harabasz by k", "k", "Calinski-Harabasz", {}, {}, {}, true};
  for (const auto& r : sweep.rows) {
    sil.x.push_back(static_cast<double>(r.k));
    sil.y.push_back(r.silhouette);
    ch.x.push_back(static_cast<double>(r.k));
    ch.y.push_back(std::isfinite(r.calinski_harabasz) ? r.calinski_harabasz : 0.0);
  }
  std::vector<std::string> cl;
  for (int a : model.assignment) cl.push_back(std::to_string(a + 1));
  const BiplotModel b = biplot(set);
  const std::string sil_svg = render_scatter(sil);
  const std::string ch_svg = render_scatter(ch);
  const std::string biplot_svg = render_biplot({"CoDa biplot by cluster", &b, cl, {}});
  std::optional<std::string> mosaic;
  if (!f.group_by.empty()) mosaic = render_mosaic({"Cluster by " + f.group_by, cl, group_labels(set, f.group_by)});
  write_svg(f, "cluster_sweep_silhouette", sil_svg, out);
  write_svg(f, "cluster_sweep_calinski_harabasz", ch_svg, out);
  write_svg(f, "cluster_biplot", biplot_svg, out);
  if (mosaic) write_svg(f, "cluster_mosaic", *mosaic, out);
  return kExitOk;
}

int cmd_regress(const Flags& f, std::ostream& out) {
  CompositionSet set = load(f);
  for (const auto& r : f.recode) {
    const auto eq = r.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("--recode expects column=label, got '{}'", r));
    set = recode_binary(set, r.substr(0, eq), r.substr(eq + 1));
  }
  const ResolvedConfig rc = resolve_config(config_from(f), set);
  require_valid(set);
  std::vector<std::string> predictors = f.predictors;
  if (predictors.empty()) {
    for (const auto& e : set.extras()) {
      if (e.is_numeric()) predictors.push_back(e.name);
    }
  }
  if (predictors.empty()) throw ValidationError("no numeric predictors; pass --predictors");
  LogRatioMatrix m;
  if (f.responses == "pairwise") {
    m = pairwise_logratios(set, pairwise_specs(rc, set));
  } else if (f.responses == "ilr") {
    m = ilr(set, sbp_for(rc, set));
  } else {
    throw ValidationError(fmt::format("unknown responses '{}' (expected pairwise or ilr)", f.responses));
  }
  const DesignMatrix design = build_design(set, predictors);
  const auto fits = ols(responses_from(m, design), design);
  out << fmt::format("n={} (dropped {} with missing predictors), dof={}\n", design.kept_rows.size(), design.dropped_rows,
                     fits.front().dof);
  for (const auto& h : hypothesis_table(fits)) {
    out << fmt::format("{} ~ {}: estimate={:.4f} p={:.4f} {}\n", h.response, h.predictor, h.estimate, h.p_value,
                       h.significant ? "significant" : "not significant");
  }
  write_table(f, "regression_" + f.responses, regression_summary_table(fits), 4, out);
  write_table(f, "regression_" + f.responses + "_detail", regression_table(fits), 6, out);
  return kExitOk;
}

int cmd_reproduce(const Flags& f, std::ostream& out) {
  KMeansOptions opts;
  opts.restarts = f.restarts;
  opts.seed = f.seed ? *f.seed : default_seed();
  opts.parallel = f.parallel;
  const CaseStudy run = run_case_study(opts);
  const ReproductionReport report = compare_with_reference(run);
  const auto written = write_case_study_artifacts(run, report, f.out);
  out << report.render();
  out << fmt::format("wrote {} files to {}\n", written.size(), f.out);
  if (!report.all_pass()) throw ComputationError("comparison report has failing checks (see report.txt)");
  return kExitOk;
}

void add_data_options(CLI::App* sub, Flags& f) {
  sub->add_option("--data", f.data, "Input CSV (default: bundled winery data)");
  sub->add_option("--parts", f.parts, "Compositional columns (default: columns named x<digits>)")->delimiter(',');
  sub->add_option("--firm-column", f.firm_column, "Firm id column")->capture_default_str();
  sub->add_option("--categorical", f.categorical, "Columns to treat as categorical")->delimiter(',');
  sub->add_option("--delimiter", f.delimiter, "Field delimiter")->capture_default_str();
  sub->add_option("--scheme", f.scheme, "Ratio scheme: dupont4 or balance6");
  sub->add_option("--role", f.roles, "Role mapping role=part (repeatable)");
  sub->add_option("--sbp", f.sbp, "Built-in SBP name or SBP file");
  sub->add_option("--graph", f.graph, "Log-ratio graph file");
  sub->add_option("--group-by", f.group_by, "Grouping column");
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_option("--decimals", f.decimals, "Decimals in written tables");
}

void add_cluster_options(CLI::App* sub, Flags& f) {
  sub->add_option("--restarts", f.restarts, "k-means restarts")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--seed", f.seed, "Random seed (default: $CODA_LEDGER_SEED or 42)");
  sub->add_flag("--parallel", f.parallel, "Run restarts on several threads");
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Compositional analysis of financial statements"};
  app.name("coda");
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check the dataset and configuration");
  add_data_options(validate_cmd, f);

  auto* zeros_cmd = app.add_subcommand("zeros", "Report zeros and optionally replace them");
  add_data_options(zeros_cmd, f);
  zeros_cmd->add_flag("--replace", f.replace, "Write a zero-replaced copy of the data");
  zeros_cmd->add_option("--zero-fraction", f.zero_fraction, "Replacement as a fraction of the detection limit")
      ->capture_default_str();
  zeros_cmd->add_flag("--allow-flagged-zeros", f.allow_flagged, "Replace zeros even in parts above the 20% threshold");

  auto* transform_cmd = app.add_subcommand("transform", "Append log-ratio columns and write the data");
  add_data_options(transform_cmd, f);
  transform_cmd->add_option("--kind", f.kind, "pairwise, clr or ilr");

  auto* centre_cmd = app.add_subcommand("centre", "Compositional centres and centre-derived ratios");
  add_data_options(centre_cmd, f);

  auto* biplot_cmd = app.add_subcommand("biplot", "Covariance biplot of the clr data");
  add_data_options(biplot_cmd, f);
  biplot_cmd->add_option("--link", f.links, "Link overlay numerator/denominator (repeatable)");

  auto* cluster_cmd = app.add_subcommand("cluster", "k-means on clr coordinates");
  add_data_options(cluster_cmd, f);
  add_cluster_options(cluster_cmd, f);
  cluster_cmd->add_option("--k", f.k, "Number of clusters (default: best silhouette in the sweep)")
      ->check(CLI::Range(2, 1000000));
  cluster_cmd->add_option("--k-min", f.k_min, "Sweep lower bound (default 2)");
  cluster_cmd->add_option("--k-max", f.k_max, "Sweep upper bound (default 8)");

  auto* regress_cmd = app.add_subcommand("regress", "OLS of log-ratios on firm characteristics");
  add_data_options(regress_cmd, f);
  regress_cmd->add_option("--responses", f.responses, "pairwise or ilr")->capture_default_str();
  regress_cmd->add_option("--predictors", f.predictors, "Numeric predictor columns")->delimiter(',');
  regress_cmd->add_option("--recode", f.recode, "Recode a two-level column to 0/1: column=label-for-1 (repeatable)");

  auto* reproduce_cmd = app.add_subcommand("reproduce-paper", "Run the winery case study and compare with stored values");
  reproduce_cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  add_cluster_options(reproduce_cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitValidation;
  }

  try {
    if (*validate_cmd) return cmd_validate(f, out);
    if (*zeros_cmd) return cmd_zeros(f, out);
    if (*transform_cmd) return cmd_transform(f, out);
    if (*centre_cmd) return cmd_centre(f, out);
    if (*biplot_cmd) return cmd_biplot(f, out);
    if (*cluster_cmd) return cmd_cluster(f, out);
    if (*regress_cmd) return cmd_regress(f, out);
    if (*reproduce_cmd) return cmd_reproduce(f, out);
  } catch (const ValidationError& e) {
    err << "error: validation: " << one_line(e.what()) << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: computation: " << one_line(e.what()) << '\n';
    return kExitComputation;
  }
  return kExitValidation;
}

}  // namespace coda::cli
