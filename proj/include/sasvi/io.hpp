#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "sasvi/dataset.hpp"
#include "sasvi/dual_geometry.hpp"
#include "sasvi/lasso_solver.hpp"
#include "sasvi/path_runner.hpp"
#include "sasvi/screening_rules.hpp"
#include "sasvi/sure_removal.hpp"

namespace sasvi {

using Json = nlohmann::ordered_json;

/// Sidecar for generated instances: spec fields, PRNG name, true support.
Json metadata_json(const SyntheticData& data, bool standardized);

/// Nonzero coefficients as `j,beta_j` rows.
void write_solution_csv(std::ostream& out, const PrimalDualSolution& sol);
Json solution_json(const PrimalDualSolution& sol);

/// `j,lambda2,u_plus,u_minus,case_tag` for every feature and lambda2.
void write_bounds_csv(std::ostream& out, const ScreeningAnchor& anchor, std::span<const double> lambda2s);

/// `rule,lambda1,lambda2,j,bound,discarded` for every feature of every report.
void write_report_csv(std::ostream& out, std::span<const ScreenReport> reports);

struct SureRemovalRow {
    RemovalProfile profile;
    SureRemovalParameter lambda_s;
};

/// `j,lambda_2a,lambda_2y,case,lambda_s,flipped`; lambda_s is `none` when the
/// feature is never removable and 0 when it is removable everywhere.
void write_sure_removal_csv(std::ostream& out, std::span<const SureRemovalRow> rows);

/// `rule,lambda_ratio,rejection_ratio,screen_ms,solve_ms,violations`.
void write_rejection_csv(std::ostream& out, std::span<const RejectionRow> rows);

Json path_result_json(const PathResult& result);
Json bench_json(std::span<const BenchRow> rows);

/// Opens `path` for writing (creating parent directories) or throws.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace sasvi
