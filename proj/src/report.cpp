#include "bellfilter/report.hpp"

#include <fstream>
#include <sstream>

namespace bellfilter {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }

json axis_to_json(const std::array<double, 3>& v) { return json::array({v[0], v[1], v[2]}); }

json lambdas_to_json(const std::array<double, 4>& l) { return json::array({l[0], l[1], l[2], l[3]}); }

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad("complex entries must be [re, im] pairs of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <std::size_t N>
json matrix_to_json(const Mat<N>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < N; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < N; ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <std::size_t N>
Mat<N> matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != N) {
    std::ostringstream os;
    os << "matrix must have " << N << " rows";
    bad(os.str());
  }
  Mat<N> m;
  for (std::size_t r = 0; r < N; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != N) {
      std::ostringstream os;
      os << "matrix row " << r << " must have " << N << " entries";
      bad(os.str());
    }
    for (std::size_t c = 0; c < N; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

template json matrix_to_json<2>(const Mat<2>&);
template json matrix_to_json<4>(const Mat<4>&);
template Mat<2> matrix_from_json<2>(const json&);
template Mat<4> matrix_from_json<4>(const json&);

json vector_to_json(const CVec4& v) {
  json out = json::array();
  for (int i = 0; i < 4; ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

StateFile parse_state(const json& j) {
  if (!j.is_object()) bad("state file must be a JSON object");
  if (!j.contains("matrix")) bad("state file lacks \"matrix\"");
  StateFile s;
  s.matrix = matrix_from_json<4>(j.at("matrix"));
  if (j.contains("label") && !j.at("label").is_null()) {
    if (!j.at("label").is_string()) bad("\"label\" must be a string");
    s.label = j.at("label").get<std::string>();
  }
  return s;
}

StateFile read_state_file(const std::filesystem::path& path) { return parse_state(read_json_file(path)); }

json state_to_json(const CMat4& m, const std::optional<std::string>& label) {
  json j;
  if (label) j["label"] = *label;
  j["matrix"] = matrix_to_json(m);
  return j;
}

LocalFilter parse_filter(const json& j, const NumericConfig& cfg) {
  if (!j.is_object()) bad("filter file must be a JSON object");
  const json* src = &j;
  if (!j.contains("fA") && j.contains("filter")) src = &j.at("filter");
  if (src->is_null()) bad("report carries no filter");
  if (!src->contains("fA") || !src->contains("fB")) bad("filter file lacks \"fA\"/\"fB\"");
  return LocalFilter::from_matrices(matrix_from_json<2>(src->at("fA")), matrix_from_json<2>(src->at("fB")), cfg);
}

json config_to_json(const NumericConfig& cfg) {
  return json{{"hermiticity", cfg.hermiticity},
              {"reconstruction", cfg.reconstruction},
              {"rank_cutoff", cfg.rank_cutoff},
              {"trace_defect", cfg.trace_defect},
              {"negative_eigenvalue", cfg.negative_eigenvalue},
              {"psd_clamp", cfg.psd_clamp},
              {"separable", cfg.separable},
              {"lambda_zero", cfg.lambda_zero},
              {"product_residual", cfg.product_residual},
              {"consistency", cfg.consistency},
              {"bell_certificate", cfg.bell_certificate},
              {"jacobi_threshold", cfg.jacobi_threshold},
              {"near_degenerate", cfg.near_degenerate},
              {"ill_conditioned", cfg.ill_conditioned},
              {"sweep", cfg.sweep == SweepOrder::forward ? "forward" : "reverse"}};
}

json filter_to_json(const LocalFilter& lf) {
  return json{{"fA", matrix_to_json(lf.fA)},
              {"fB", matrix_to_json(lf.fB)},
              {"a", lf.a},
              {"b", lf.b},
              {"m", axis_to_json(lf.m)},
              {"n", axis_to_json(lf.n)},
              {"det_fA", lf.det_fA},
              {"det_fB", lf.det_fB},
              {"condition_fA", lf.condition_fA()},
              {"condition_fB", lf.condition_fB()}};
}

json make_report(const ReportInput& in) {
  const NumericConfig cfg = in.cfg ? *in.cfg : NumericConfig{};
  json r;
  r["schema"] = kReportSchema;
  r["label"] = in.label ? json(*in.label) : json(nullptr);

  const Plan* p = in.plan;
  r["classification"] = p ? json(to_string(p->classification)) : json(nullptr);
  r["rank"] = in.rho ? json(in.rho->rank) : json(nullptr);
  r["lambdas"] = p ? lambdas_to_json(p->wootters.lambdas) : json(nullptr);
  r["tr_r"] = p ? json(p->wootters.tr_r) : json(nullptr);
  r["concurrence_in"] = p ? json(p->wootters.concurrence) : json(nullptr);

  r["filter"] = (p && p->filter) ? filter_to_json(*p->filter) : json(nullptr);
  r["lambda_min_F"] = (p && p->op) ? json(p->op->lambda_min_F) : json(nullptr);
  r["F"] = (p && p->op) ? matrix_to_json(p->op->F) : json(nullptr);

  const TransformResult* t = in.transform;
  r["p_f"] = t ? json(t->p_f) : json(nullptr);
  r["rho_prime"] = t ? matrix_to_json(t->rho_prime.rho) : json(nullptr);
  json comps = json::array();
  if (t)
    for (const BellComponent& c : t->components) comps.push_back({{"p", c.p}, {"state", vector_to_json(c.state)}});
  r["bell_components"] = comps;
  r["concurrence_out"] = t ? json(t->c_out) : json(nullptr);
  if (t) {
    const BellVerdict v = verify_bell_diagonal(*t, cfg);
    r["bell_certificate"] = {{"bell_diagonal", v.bell_diagonal},
                             {"marginal_defect", v.marginal_defect},
                             {"trR_defect", v.trR_defect}};
  } else {
    r["bell_certificate"] = nullptr;
  }

  r["warnings"] = p ? json(p->warnings) : json::array();
  r["message"] = p ? json(p->message) : json("");
  r["tolerance_config"] = config_to_json(cfg);
  return r;
}

json family_block(const FamilyParams& fp, const FamilyClosedForm& cf, const std::optional<double>& tau_ratio) {
  json x = json::array();
  for (const CVec4& v : cf.x) x.push_back(vector_to_json(v));
  return json{{"alpha", fp.alpha},
              {"beta", fp.beta()},
              {"p", json::array({fp.p[0], fp.p[1], fp.p[2], fp.p[3]})},
              {"tau_ratio", tau_ratio ? json(*tau_ratio) : json(nullptr)},
              {"regime", to_string(cf.regime)},
              {"theta", cf.theta},
              {"k", cf.k},
              {"lambdas", lambdas_to_json(cf.lambdas)},
              {"tr_r", cf.tr_r},
              {"concurrence", cf.concurrence},
              {"F", matrix_to_json(cf.F)},
              {"fA", matrix_to_json(cf.fA)},
              {"fB", matrix_to_json(cf.fB)},
              {"p_f", cf.p_f},
              {"x", x}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) bad("write failed for " + path.string());
}

}  // namespace bellfilter
