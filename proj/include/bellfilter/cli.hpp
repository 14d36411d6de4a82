#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bellfilter/config.hpp"
#include "bellfilter/report.hpp"

namespace bellfilter::cli {

enum ExitCode : int {
  ok = 0,
  not_bell_diagonal = 1,
  separable = 2,
  lambda_n_zero = 3,
  invalid_input = 4,
  internal_failure = 5,
};

int exit_code_for(ErrorKind kind);

struct Outcome {
  int exit_code = ok;
  json document;           ///< Null when nothing could be produced.
  std::string diagnostic;  ///< Empty on success.
};

/// Full pipeline with canonical completion on an in-memory state.
Outcome analyze_state(const StateFile& state, const NumericConfig& cfg);

struct AnalyzeArgs {
  std::filesystem::path in;
  std::optional<std::filesystem::path> out;
  double tol = 1.0;
};

struct FamilyArgs {
  double alpha = 0.0;
  std::vector<double> p;
  std::optional<double> tau_ratio;
  std::optional<std::filesystem::path> out;
  double tol = 1.0;
};

struct TransformArgs {
  std::filesystem::path in;
  std::filesystem::path filter;
  std::optional<std::filesystem::path> out;
  double tol = 1.0;
};

struct VerifyArgs {
  std::filesystem::path in;
  std::optional<std::filesystem::path> out;
  double tol = 1.0;
};

struct BatchArgs {
  std::filesystem::path in;
  std::optional<std::filesystem::path> out;
  int jobs = 1;
  double tol = 1.0;
};

Outcome run_family(const FamilyArgs& args);
Outcome run_transform(const TransformArgs& args);
Outcome run_verify(const VerifyArgs& args);
Outcome run_batch(const BatchArgs& args);

// Each writes its document to --out (or `out`) and diagnostics to `err`.
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_family(const FamilyArgs& args, std::ostream& out, std::ostream& err);
int cmd_transform(const TransformArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_batch(const BatchArgs& args, std::ostream& out, std::ostream& err);

/// Argument parsing and dispatch.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bellfilter::cli
