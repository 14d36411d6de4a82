#pragma once

// JSON plumbing: state files, filter files and reports.
// Complex numbers are [re, im]; matrices are row-major arrays of rows.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "bellfilter/config.hpp"
#include "bellfilter/family.hpp"
#include "bellfilter/filtercore.hpp"
#include "bellfilter/matcore.hpp"
#include "bellfilter/transform.hpp"

namespace bellfilter {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "bellfilter.report/1";
inline constexpr const char* kBatchSchema = "bellfilter.batch/1";

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

template <std::size_t N>
json matrix_to_json(const Mat<N>& m);
template <std::size_t N>
Mat<N> matrix_from_json(const json& j);

json vector_to_json(const CVec4& v);

struct StateFile {
  CMat4 matrix;
  std::optional<std::string> label;
};

/// Throws Error(invalid_input) naming the offending field.
StateFile parse_state(const json& j);
StateFile read_state_file(const std::filesystem::path& path);
json state_to_json(const CMat4& m, const std::optional<std::string>& label = std::nullopt);

/// Accepts {"fA": ..., "fB": ...} or a report carrying a "filter" block.
LocalFilter parse_filter(const json& j, const NumericConfig& cfg = {});

json config_to_json(const NumericConfig& cfg);
json filter_to_json(const LocalFilter& lf);

/// Everything a report needs; null pointers become JSON nulls.
struct ReportInput {
  std::optional<std::string> label;
  const DensityMatrix* rho = nullptr;
  const Plan* plan = nullptr;
  const TransformResult* transform = nullptr;
  const NumericConfig* cfg = nullptr;
};

json make_report(const ReportInput& in);

/// Closed-form block for the family command.
json family_block(const FamilyParams& fp, const FamilyClosedForm& cf,
                  const std::optional<double>& tau_ratio);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace bellfilter
