#pragma once

#include <span>
#include <string>
#include <vector>

#include "coda/composition.hpp"
#include "coda/industry_stats.hpp"
#include "coda/multivariate.hpp"
#include "coda/ratio_graph.hpp"
#include "coda/regress.hpp"
#include "coda/table.hpp"
#include "coda/transforms.hpp"
#include "coda/zeros.hpp"

namespace coda {

// Table builders shared by the CLI and the reproduction run. Column order is
// fixed so that emitted files are byte-stable.

/// part | description | one column per centre.
Table centre_table(const std::vector<std::string>& column_names, std::span<const CompositionalCentre> centres);

/// group | firms | one column per ratio.
Table ratio_table(std::span<const GroupRatioRow> rows);

/// Ratios of arbitrary centres: label | one column per ratio.
Table centre_ratio_table(const std::vector<std::string>& labels, std::span<const CompositionalCentre> centres,
                         const RatioScheme& scheme);

/// response | predictor | estimate | std_error | t | p_value | r_squared | dof
Table regression_table(std::span<const RegressionFit> fits);

/// Wide layout: response, then estimate and p_value per predictor, then r_squared.
Table regression_summary_table(std::span<const RegressionFit> fits);

/// Firm id, then every log-ratio column.
Table logratio_table(const CompositionSet& set, const LogRatioMatrix& m);

/// Firm id | cluster (1-based).
Table assignment_table(const CompositionSet& set, std::span<const int> assignment);

/// k | silhouette | calinski_harabasz | within_ss
Table sweep_table(const SweepResult& sweep);

/// part | zero_fraction | flagged, then an "overall" row.
Table zero_table(const ZeroReport& report);

/// firm | part | value | reason
Table violation_table(std::span<const Violation> violations);

/// kind | name | x | y ("firm" rows then "ray" rows).
Table biplot_table(const CompositionSet& set, const BiplotModel& model);

/// edge | numerator | denominator, plus a diagnosis line per problem.
Table graph_table(const LogRatioGraph& graph);

}  // namespace coda
