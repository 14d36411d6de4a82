#include "bellfilter/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bellfilter/family.hpp"
#include "bellfilter/filtercore.hpp"
#include "bellfilter/transform.hpp"

namespace bellfilter::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVerifySchema = "bellfilter.verify/1";

Outcome failure(const Error& e) { return {exit_code_for(e.kind()), nullptr, e.what()}; }

int classification_exit(Classification c) {
  switch (c) {
    case Classification::regular: return ok;
    case Classification::separable: return separable;
    case Classification::lambda_n_zero: return lambda_n_zero;
  }
  return internal_failure;
}

NumericConfig config_for(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorKind::invalid_input, "--tol must be a positive factor");
  return NumericConfig{}.scaled(tol);
}

// Plan, transform and report for one state; throws on failure.
struct Pipeline {
  DensityMatrix rho;
  Plan plan;
  std::optional<TransformResult> transform;
};

Pipeline run_pipeline(const CMat4& matrix, const CompletionChoice& choice, const NumericConfig& cfg) {
  Pipeline p{load_density(matrix, cfg), {}, std::nullopt};
  p.plan = bellfilter::plan(p.rho, choice, cfg);
  if (p.plan.filter) {
    p.transform = apply_filter(p.rho, *p.plan.filter, p.plan.wootters, cfg);
    extractable_concurrence(*p.transform, p.plan.wootters, cfg);
  }
  return p;
}

json report_of(const Pipeline& p, const std::optional<std::string>& label, const NumericConfig& cfg) {
  return make_report({label, &p.rho, &p.plan, p.transform ? &*p.transform : nullptr, &cfg});
}

int emit(const Outcome& o, const std::optional<fs::path>& path, std::ostream& out, std::ostream& err) {
  if (!o.diagnostic.empty()) err << "bellfilter: " << o.diagnostic << '\n';
  if (o.document.is_null()) return o.exit_code;
  try {
    if (path)
      write_json_file(*path, o.document);
    else
      out << o.document.dump(2) << '\n';
  } catch (const Error& e) {
    err << "bellfilter: " << e.what() << '\n';
    return invalid_input;
  }
  return o.exit_code;
}

double max_abs(const CMat4& a, const CMat4& b) { return max_abs_diff(a, b); }

FamilyClosedForm closed_form_for(const FamilyParams& fp, const std::optional<double>& tau_ratio) {
  if (fp.p[2] == 0.0 && fp.p[3] == 0.0) return family_rank2(fp, tau_ratio.value_or(1.0));
  if (tau_ratio) throw Error(ErrorKind::invalid_input, "--tau-ratio applies only to rank-2 members (p3 = p4 = 0)");
  return family_closed_form(fp);
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return invalid_input;
    case ErrorKind::separable: return separable;
    case ErrorKind::lambda_n_zero: return lambda_n_zero;
    case ErrorKind::vanishing_probability: return invalid_input;
    case ErrorKind::degenerate_geometry:
    case ErrorKind::not_product:
    case ErrorKind::internal_consistency: return internal_failure;
  }
  return internal_failure;
}

Outcome analyze_state(const StateFile& state, const NumericConfig& cfg) {
  try {
    const Pipeline p = run_pipeline(state.matrix, CompletionChoice::canonical(), cfg);
    Outcome o{classification_exit(p.plan.classification), report_of(p, state.label, cfg), {}};
    if (o.exit_code != ok) o.diagnostic = p.plan.message;
    return o;
  } catch (const Error& e) {
    return failure(e);
  }
}

Outcome run_family(const FamilyArgs& args) {
  try {
    const NumericConfig cfg = config_for(args.tol);
    if (args.p.size() != 4) throw Error(ErrorKind::invalid_input, "--p needs four comma-separated values");
    FamilyParams fp{args.alpha, {args.p[0], args.p[1], args.p[2], args.p[3]}};
    fp.validate(false);
    if (args.tau_ratio && !(*args.tau_ratio > 0.0)) throw Error(ErrorKind::invalid_input, "--tau-ratio must be positive");

    std::ostringstream label;
    label.precision(17);
    label << "family alpha=" << fp.alpha << " p=" << fp.p[0] << "," << fp.p[1] << "," << fp.p[2] << "," << fp.p[3];

    const bool rank2 = fp.p[2] == 0.0 && fp.p[3] == 0.0;
    if (args.tau_ratio && !rank2)
      throw Error(ErrorKind::invalid_input, "--tau-ratio applies only to rank-2 members (p3 = p4 = 0)");
    const CompletionChoice choice =
        rank2 ? CompletionChoice::from_tau_ratio(args.tau_ratio.value_or(1.0)) : CompletionChoice::canonical();

    const Pipeline p = run_pipeline(family_state(fp, cfg).rho, choice, cfg);
    Outcome o{classification_exit(p.plan.classification), report_of(p, label.str(), cfg), {}};
    if (o.exit_code != ok) {
      o.diagnostic = p.plan.message;
      o.document["family"] = nullptr;
      return o;
    }

    const FamilyClosedForm cf = closed_form_for(fp, args.tau_ratio);
    const LocalFilter& lf = *p.plan.filter;
    std::map<std::string, double> dev;
    double dl = 0.0;
    for (int i = 0; i < 4; ++i) dl = std::max(dl, std::abs(cf.lambdas[i] - p.plan.wootters.lambdas[i]));
    dev["lambdas"] = dl;
    dev["tr_r"] = std::abs(cf.tr_r - p.plan.wootters.tr_r);
    dev["concurrence"] = std::abs(cf.concurrence - p.plan.wootters.concurrence);
    dev["F"] = max_abs(cf.F, p.plan.op->F);
    dev["fA"] = max_abs_diff(cf.fA, lf.fA);
    dev["fB"] = max_abs_diff(cf.fB, lf.fB);
    dev["p_f"] = std::abs(cf.p_f - p.plan.p_f);
    double worst = 0.0;
    for (const auto& [k, v] : dev) worst = std::max(worst, v);

    o.document["family"] = {{"closed_form", family_block(fp, cf, rank2 ? std::optional<double>(args.tau_ratio.value_or(1.0)) : std::nullopt)},
                            {"deviations", dev},
                            {"max_abs_deviation", worst}};
    // Absolute agreement is only meaningful relative to the size of F.
    const double scale = std::max(1.0, cf.F.max_abs());
    if (worst > 1e3 * cfg.consistency * scale) {
      std::ostringstream os;
      os << "closed form and pipeline disagree by " << worst;
      o.exit_code = internal_failure;
      o.diagnostic = os.str();
    }
    return o;
  } catch (const Error& e) {
    return failure(e);
  }
}

Outcome run_transform(const TransformArgs& args) {
  try {
    const NumericConfig cfg = config_for(args.tol);
    const StateFile state = read_state_file(args.in);
    const LocalFilter lf = parse_filter(read_json_file(args.filter), cfg);
    const DensityMatrix rho = load_density(state.matrix, cfg);
    Plan pl;
    pl.wootters = wootters_decomposition(rho, cfg);
    pl.classification = detect_degenerate(pl.wootters, cfg);
    pl.filter = lf;
    pl.message = "filter supplied from " + args.filter.filename().string();
    const TransformResult tr = apply_filter(rho, lf, pl.wootters, cfg);
    pl.p_f = tr.p_f;
    return {ok, make_report({state.label, &rho, &pl, &tr, &cfg}), {}};
  } catch (const Error& e) {
    return failure(e);
  }
}

Outcome run_verify(const VerifyArgs& args) {
  try {
    const NumericConfig cfg = config_for(args.tol);
    const StateFile state = read_state_file(args.in);
    const DensityMatrix rho = load_density(state.matrix, cfg);
    const WoottersSet ws = wootters_decomposition(rho, cfg);
    const BellVerdict v = verify_bell_diagonal(rho, cfg);
    json doc{{"schema", kVerifySchema},
             {"label", state.label ? json(*state.label) : json(nullptr)},
             {"bell_diagonal", v.bell_diagonal},
             {"marginal_defect", v.marginal_defect},
             {"trR_defect", v.trR_defect},
             {"tr_r", ws.tr_r},
             {"concurrence", ws.concurrence},
             {"tolerance_config", config_to_json(cfg)}};
    Outcome o{v.bell_diagonal ? ok : not_bell_diagonal, std::move(doc), {}};
    if (!v.bell_diagonal) o.diagnostic = "state is not Bell diagonal";
    return o;
  } catch (const Error& e) {
    return failure(e);
  }
}

Outcome run_batch(const BatchArgs& args) {
  try {
    const NumericConfig cfg = config_for(args.tol);
    if (args.jobs < 1) throw Error(ErrorKind::invalid_input, "--jobs must be at least 1");
    std::error_code ec;
    if (!fs::is_directory(args.in, ec)) throw Error(ErrorKind::invalid_input, args.in.string() + " is not a directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.in))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    std::vector<Outcome> results(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < files.size(); i = next++) {
        try {
          results[i] = analyze_state(read_state_file(files[i]), cfg);
        } catch (const Error& e) {
          results[i] = failure(e);
        }
      }
    };
    const int n_threads = std::min<int>(args.jobs, std::max<std::size_t>(1, files.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::map<std::string, int> counts{{"regular", 0}, {"separable", 0}, {"lambda_n_zero", 0}, {"error", 0}};
    std::vector<double> pf;
    json entries = json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
      const Outcome& o = results[i];
      json e{{"file", files[i].filename().string()}, {"exit_code", o.exit_code}};
      const bool has_report = o.document.is_object() && o.document.contains("classification");
      if (has_report) {
        const std::string cls = o.document["classification"].get<std::string>();
        ++counts[cls];
        if (o.document["p_f"].is_number()) pf.push_back(o.document["p_f"].get<double>());
        e["classification"] = cls;
        e["report"] = o.document;
      } else {
        ++counts["error"];
        e["classification"] = nullptr;
        e["report"] = nullptr;
      }
      e["error"] = has_report ? json(nullptr) : json(o.diagnostic);
      entries.push_back(std::move(e));
    }

    json stats = nullptr;
    if (!pf.empty()) {
      std::vector<double> sorted = pf;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0;
      for (double x : pf) sum += x;
      const std::size_t m = sorted.size();
      const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      stats = {{"count", m}, {"min", sorted.front()}, {"max", sorted.back()},
               {"mean", sum / static_cast<double>(m)}, {"median", median}};
    }

    json doc{{"schema", kBatchSchema},
             {"files", entries},
             {"aggregate", {{"total", files.size()}, {"counts", counts}, {"p_f", stats}}},
             {"tolerance_config", config_to_json(cfg)}};
    return {ok, std::move(doc), {}};
  } catch (const Error& e) {
    return failure(e);
  } catch (const fs::filesystem_error& e) {
    return {invalid_input, nullptr, e.what()};
  }
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    const NumericConfig cfg = config_for(args.tol);
    o = analyze_state(read_state_file(args.in), cfg);
  } catch (const Error& e) {
    o = failure(e);
  }
  return emit(o, args.out, out, err);
}

int cmd_family(const FamilyArgs& args, std::ostream& out, std::ostream& err) {
  return emit(run_family(args), args.out, out, err);
}

int cmd_transform(const TransformArgs& args, std::ostream& out, std::ostream& err) {
  return emit(run_transform(args), args.out, out, err);
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return emit(run_verify(args), args.out, out, err);
}

int cmd_batch(const BatchArgs& args, std::ostream& out, std::ostream& err) {
  return emit(run_batch(args), args.out, out, err);
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local filters that take two-qubit states to Bell-diagonal form"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Run the full pipeline on a state file");
  a->add_option("--in", analyze.in, "State file")->required();
  a->add_option("--out", analyze.out, "Report file (default: stdout)");
  a->add_option("--tol", analyze.tol, "Tolerance scale factor")->default_val(1.0);

  FamilyArgs family;
  auto* f = app.add_subcommand("family", "Closed form and pipeline for a family member");
  f->add_option("--alpha", family.alpha, "Amplitude alpha in (0, 1]")->required();
  f->add_option("--p", family.p, "p1,p2,p3,p4")->required()->delimiter(',')->expected(4);
  f->add_option("--tau-ratio", family.tau_ratio, "|tau_2|/|tau_1| for rank-2 members");
  f->add_option("--out", family.out, "Report file (default: stdout)");
  f->add_option("--tol", family.tol, "Tolerance scale factor")->default_val(1.0);

  TransformArgs transform;
  auto* t = app.add_subcommand("transform", "Apply a supplied filter to a state");
  t->add_option("--in", transform.in, "State file")->required();
  t->add_option("--filter", transform.filter, "Filter file or report")->required();
  t->add_option("--out", transform.out, "Report file (default: stdout)");
  t->add_option("--tol", transform.tol, "Tolerance scale factor")->default_val(1.0);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check whether a state is Bell diagonal");
  v->add_option("--in", verify.in, "State file")->required();
  v->add_option("--out", verify.out, "Verdict file (default: stdout)");
  v->add_option("--tol", verify.tol, "Tolerance scale factor")->default_val(1.0);

  BatchArgs batch;
  auto* b = app.add_subcommand("batch", "Analyze every *.json state in a directory");
  b->add_option("--in", batch.in, "Input directory")->required();
  b->add_option("--out", batch.out, "Summary file (default: stdout)");
  b->add_option("--jobs", batch.jobs, "Worker threads")->default_val(1);
  b->add_option("--tol", batch.tol, "Tolerance scale factor")->default_val(1.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_input;
  }

  if (*a) return cmd_analyze(analyze, out, err);
  if (*f) return cmd_family(family, out, err);
  if (*t) return cmd_transform(transform, out, err);
  if (*v) return cmd_verify(verify, out, err);
  return cmd_batch(batch, out, err);
}

}  // namespace bellfilter::cli
