#include <gtest/gtest.h>

#include <regex>

#include "coda/boxplot.hpp"
#include "coda/config_files.hpp"
#include "coda/dataset.hpp"
#include "coda/errors.hpp"
#include "coda/multivariate.hpp"
#include "coda/reports.hpp"
#include "coda/svg.hpp"
#include "coda/table.hpp"
#include "support.hpp"

namespace coda {
namespace {

// Balanced tags, one root <svg> element, quoted attributes.
bool well_formed_svg(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t roots = 0;
  std::size_t pos = 0;
  while ((pos = doc.find('<', pos)) != std::string::npos) {
    const std::size_t end = doc.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /\n"));
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && roots == 1 && doc.find("<svg") != std::string::npos;
}

std::size_t count_class(const std::string& doc, const std::string& cls) {
  std::size_t n = 0;
  const std::string needle = "class=\"" + cls + "\"";
  for (std::size_t p = doc.find(needle); p != std::string::npos; p = doc.find(needle, p + 1)) ++n;
  return n;
}

TEST(Dataset, BundledFileChecksum) {
  const std::string_view csv = bundled_winery_csv();
  EXPECT_EQ(testing::fnv1a(csv), 0xf4ecb3cf7f90615dULL);
  EXPECT_EQ(csv.size(), 3495u);
  EXPECT_EQ(read_text_file(CODA_WINERY_CSV), csv);
}

TEST(Dataset, WineryShape) {
  const CompositionSet s = load_winery();
  EXPECT_EQ(s.row_count(), 109u);
  EXPECT_EQ(s.part_count(), 4u);
  EXPECT_EQ(s.parts()[3].description, "Assets");
  ASSERT_EQ(s.extras().size(), 2u);
  EXPECT_EQ(s.extras()[0].name, "Brand");
  EXPECT_EQ(s.extras()[1].name, "Age");
  EXPECT_TRUE(s.extra("Age").is_numeric());
  EXPECT_TRUE(validate(s).empty());
}

TEST(Dataset, MissingCells) {
  EXPECT_THROW(parse_dataset("Firm,x1,x2\na,1,NA\n"), ParseError);
  const CompositionSet s = parse_dataset("Firm,x1,x2,Age\na,1,2,NA\nb,3,4,7\n");
  EXPECT_TRUE(s.extra("Age").is_missing(0));
  EXPECT_EQ(*s.extra("Age").number(1), 7.0);
}

TEST(Dataset, ParseErrorsCarryLocation) {
  try {
    parse_dataset("Firm,x1,x2\na,1,2\nb,3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_NE(std::string(e.what()).find("expected 3 fields, found 2"), std::string::npos);
  }
  try {
    parse_dataset("Firm,x1,x2\na,1,2\na,3,4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
  try {
    parse_dataset("Firm,x1,x2\na,1,abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_dataset("Firm,x1,x1\na,1,2\n"), ParseError);
  EXPECT_THROW(parse_dataset(""), ParseError);
  EXPECT_THROW(parse_dataset("Firm,x1,x2\na,\"1,2\n"), ParseError);
}

TEST(Dataset, QuotesAndLayout) {
  DatasetLayout layout;
  layout.firm_column = "id";
  layout.part_columns = {"a", "b"};
  layout.categorical_columns = {"code"};
  layout.delimiter = ';';
  const CompositionSet s = parse_dataset("id;a;b;code;note\n\"x;1\";1;2;07;\"he said \"\"hi\"\"\"\n", layout);
  EXPECT_EQ(s.firm_ids()[0], "x;1");
  EXPECT_FALSE(s.extra("code").is_numeric());
  EXPECT_EQ(*s.extra("code").label(0), "07");
  EXPECT_EQ(*s.extra("note").label(0), "he said \"hi\"");
}

TEST(Dataset, RoundTripsExactly) {
  std::mt19937_64 rng(8);
  CompositionSet s = testing::random_set(rng, 30, 5);
  ExtraColumn::Numeric num;
  ExtraColumn::Categorical cat;
  for (std::size_t i = 0; i < 30; ++i) {
    num.emplace_back(i % 7 == 0 ? std::nullopt : std::optional<double>(std::sqrt(static_cast<double>(i))));
    cat.emplace_back(i % 5 == 0 ? std::nullopt : std::optional<std::string>(i % 2 ? "a,b" : "c"));
  }
  s = s.with_extra({"num", num}).with_extra({"cat", cat});
  const CompositionSet back = parse_dataset(format_dataset(s));
  EXPECT_EQ(back.values(), s.values());
  EXPECT_EQ(back.firm_ids(), s.firm_ids());
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(back.extra("num").number(i), s.extra("num").number(i));
    EXPECT_EQ(back.extra("cat").label(i), s.extra("cat").label(i));
  }
}

TEST(Dataset, RecodeBinary) {
  CompositionSet s = parse_dataset("Firm,x1,x2,Kind\na,1,2,own\nb,3,4,private\nc,5,6,NA\n");
  const CompositionSet r = recode_binary(s, "Kind", "own");
  EXPECT_TRUE(r.extra("Kind").is_numeric());
  EXPECT_EQ(*r.extra("Kind").number(0), 1.0);
  EXPECT_EQ(*r.extra("Kind").number(1), 0.0);
  EXPECT_TRUE(r.extra("Kind").is_missing(2));
  EXPECT_THROW(recode_binary(s, "Kind", "public"), ValidationError);
  s = parse_dataset("Firm,x1,x2,Kind\na,1,2,p\nb,3,4,q\nc,5,6,r\n");
  EXPECT_THROW(recode_binary(s, "Kind", "p"), ValidationError);
}

TEST(Table, FormatsAndDeterminism) {
  Table t{{"name", "value", "count"}, {{std::string("a"), 0.123456, 3LL}, {std::monostate{}, -0.0, 4LL}}};
  const std::string csv = render_table(t, TableFormat::csv, 3);
  EXPECT_EQ(csv, "name,value,count\na,0.123,3\nNA,0.000,4\n");
  EXPECT_EQ(csv, render_table(t, TableFormat::csv, 3));
  const std::string md = render_table(t, TableFormat::markdown, 2);
  EXPECT_NE(md.find("| --- |"), std::string::npos);
  EXPECT_NE(md.find("| a | 0.12 | 3 |"), std::string::npos);
  EXPECT_EQ(render_table(Table{{"h1", "h2"}, {}}, TableFormat::csv, 4), "h1,h2\n");
  t.rows.push_back({std::string("short")});
  EXPECT_THROW(render_table(t, TableFormat::csv, 3), ValidationError);
  EXPECT_EQ(table_format_from_string("md"), TableFormat::markdown);
  EXPECT_THROW(table_format_from_string("xlsx"), ValidationError);
  EXPECT_EQ(format_fixed(std::numeric_limits<double>::infinity(), 2), "Inf");
}

TEST(Table, WineryCentreAtFourDecimals) {
  const CompositionSet s = load_winery();
  const std::vector<std::string> names{"overall"};
  const std::vector<CompositionalCentre> centres{compositional_centre(s)};
  const std::string csv = render_table(centre_table(names, centres), TableFormat::csv, 4);
  for (const char* v : {"0.2354", "0.2149", "0.1590", "0.3907"}) EXPECT_NE(csv.find(v), std::string::npos) << v;
}

TEST(Boxplot, FiveNumbers) {
  const std::vector<double> v{9, 1, 8, 2, 7, 3, 6, 4, 5};
  const BoxplotStats b = boxplot_stats(v);
  EXPECT_EQ(b.q1, 3.0);
  EXPECT_EQ(b.median, 5.0);
  EXPECT_EQ(b.q3, 7.0);
  EXPECT_EQ(b.lower_whisker, 1.0);
  EXPECT_EQ(b.upper_whisker, 9.0);
  EXPECT_TRUE(b.outliers.empty());

  const std::vector<double> c(6, 2.5);
  const BoxplotStats flat = boxplot_stats(c);
  EXPECT_EQ(flat.q1, 2.5);
  EXPECT_EQ(flat.upper_whisker, 2.5);

  std::vector<double> w{1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  const BoxplotStats o = boxplot_stats(w);
  EXPECT_EQ(o.outliers, std::vector<double>{100});
  EXPECT_EQ(o.upper_whisker, 9.0);

  EXPECT_THROW(boxplot_stats(std::vector<double>{}), ValidationError);
  EXPECT_THROW(boxplot_stats(std::vector<double>{1, NAN}), ValidationError);
}

TEST(Boxplot, GroupsInFirstAppearanceOrder) {
  const std::vector<double> v{1, 2, 3, 4};
  const std::vector<std::string> g{"b", "a", "b", "a"};
  const auto boxes = boxplot_stats(v, g);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[0].group, "b");
  EXPECT_EQ(boxes[0].median, 2.0);
  EXPECT_EQ(boxes[1].median, 3.0);
}

TEST(Svg, BoxplotAndScatter) {
  const std::vector<double> v{1, 2, 3, 4, 50};
  const std::string box = render_boxplot({"t", "y", {boxplot_stats(v, "g")}});
  EXPECT_TRUE(well_formed_svg(box));
  EXPECT_EQ(count_class(box, "box"), 1u);
  EXPECT_EQ(count_class(box, "outlier"), 1u);

  const CompositionSet s = load_winery();
  ScatterFigure f{"t", "Age", "turnover", {}, {}, {}, false};
  for (std::size_t i = 0; i < s.row_count(); ++i) {
    f.x.push_back(*s.extra("Age").number(i));
    f.y.push_back(s.values()(static_cast<Eigen::Index>(i), 0));
  }
  const std::string sc = render_scatter(f);
  EXPECT_TRUE(well_formed_svg(sc));
  EXPECT_EQ(count_class(sc, "point"), 109u);
  f.y.pop_back();
  EXPECT_THROW(render_scatter(f), ValidationError);
}

TEST(Svg, MosaicWidthsFollowCounts) {
  MosaicFigure m;
  m.title = "clusters by brand";
  for (int i = 0; i < 36; ++i) m.column_labels.push_back("1");
  for (int i = 0; i < 23; ++i) m.column_labels.push_back("2");
  for (int i = 0; i < 50; ++i) m.column_labels.push_back("3");
  for (std::size_t i = 0; i < m.column_labels.size(); ++i) m.segment_labels.push_back(i % 3 == 0 ? "0" : "1");
  const auto cols = mosaic_layout(m);
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_NEAR(cols[0].width_fraction, 36.0 / 109.0, 1e-15);
  EXPECT_NEAR(cols[1].width_fraction, 23.0 / 109.0, 1e-15);
  EXPECT_NEAR(cols[2].width_fraction, 50.0 / 109.0, 1e-15);
  for (const auto& c : cols) {
    double total = 0;
    for (const auto& seg : c.segments) total += seg.share;
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
  const std::string doc = render_mosaic(m);
  EXPECT_TRUE(well_formed_svg(doc));
  EXPECT_EQ(count_class(doc, "tile"), 6u);
}

TEST(Svg, Biplot) {
  const CompositionSet s = load_winery();
  const BiplotModel model = biplot(s);
  BiplotFigure f{"biplot", &model, {}, {{"x1", "x4"}}};
  const std::string doc = render_biplot(f);
  EXPECT_TRUE(well_formed_svg(doc));
  EXPECT_EQ(count_class(doc, "ray"), 4u);
  EXPECT_EQ(count_class(doc, "point"), 109u);
  EXPECT_EQ(count_class(doc, "link"), 1u);
  f.links = {{"x1", "x9"}};
  EXPECT_THROW(render_biplot(f), ValidationError);
}

TEST(ConfigFiles, SbpParsing) {
  const std::vector<std::string> parts{"x1", "x2", "x3", "x4"};
  const SbpMatrix sbp = parse_sbp("# dupont\nbalance: + + - -\nflow: + - 0 0\nstock: 0 0 +1 -1\n", parts);
  EXPECT_EQ(sbp.row_names(), (std::vector<std::string>{"balance", "flow", "stock"}));
  EXPECT_EQ(sbp.signs()(2, 3), -1);
  EXPECT_EQ(parse_sbp(format_sbp(sbp), parts).signs(), sbp.signs());
  try {
    parse_sbp("+ + - -\n+ - x 0\n", parts);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(parse_sbp("+ + -\n", parts), ParseError);
  const SbpMatrix moved = reorder_sbp(sbp, {"x4", "x3", "x2", "x1"});
  EXPECT_EQ(moved.signs()(0, 0), -1);
  EXPECT_EQ(moved.signs()(2, 0), -1);
  EXPECT_EQ(moved.signs()(2, 1), 1);
}

TEST(ConfigFiles, GraphParsing) {
  const std::vector<std::string> parts{"x1", "x2", "x3", "x4"};
  const LogRatioGraph g = parse_graph("turnover: x1 / x4\nmargin: x1/x2\n# comment\nleverage: x3 / x4\n", parts);
  ASSERT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(g.edges()[0], (LogRatioSpec{"turnover", "x1", "x4"}));
  EXPECT_TRUE(validate_graph(g).valid);
  EXPECT_EQ(parse_graph(format_graph(g), parts).edges(), g.edges());
  try {
    parse_graph("a: x1 / x4\nb: x1 / x7\n", parts);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(ConfigFiles, ResolveChecksReferences) {
  const CompositionSet s = load_winery();
  AnalysisConfig c;
  c.scheme = SchemeKind::dupont4;
  c.sbp = "dupont4";
  c.group_by = "Brand";
  const ResolvedConfig r = resolve_config(c, s);
  ASSERT_TRUE(r.sbp.has_value());
  EXPECT_EQ(r.sbp->parts(), s.part_names());
  c.group_by = "Region";
  EXPECT_THROW(resolve_config(c, s), ValidationError);
  c.group_by.reset();
  c.k_min = 5;
  c.k_max = 3;
  EXPECT_THROW(resolve_config(c, s), ValidationError);
}

}  // namespace
}  // namespace coda
