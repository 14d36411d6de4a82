// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "bellfilter/cli.hpp"
#include "bellfilter/family.hpp"
#include "bellfilter/filtercore.hpp"
#include "bellfilter/report.hpp"
#include "bellfilter/transform.hpp"
#include "support/random_states.hpp"

using namespace bellfilter;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void run(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, name, ok, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

struct Ensemble {
  double norm = 0, condit = 0, marginal = 0, trr = 0, pf = 0, cratio = 0;
  int states = 0, errors = 0;
  double seconds = 0;
};

Ensemble run_ensemble() {
  Ensemble e;
  std::mt19937_64 rng(20240501);
  const auto start = std::chrono::steady_clock::now();
  const std::pair<int, int> sizes[] = {{4, 1000}, {3, 300}, {2, 300}};
  for (const auto& [rank, count] : sizes)
    for (int i = 0; i < count; ++i) {
      const DensityMatrix d = bftest::random_entangled(rng, rank);
      try {
        const Plan p = plan(d);
        const AssociatedOperator& op = *p.op;
        e.norm = std::max(e.norm, max_abs_diff(op.F * tilde_op(op.F), CMat4::identity()));
        for (int a = 0; a < rank; ++a)
          for (int b = 0; b < rank; ++b) {
            const cplx v = inner(p.wootters.x[a], op.F * p.wootters.x[b]);
            e.condit = std::max(e.condit, std::abs(v - (a == b ? p.wootters.lambdas[a] : 0.0)));
          }
        const TransformResult tr = apply_filter(d, *p.filter, p.wootters);
        e.marginal = std::max(e.marginal, tr.marginal_defect);
        e.trr = std::max(e.trr, std::abs(tr.trR_out - 1.0));
        const double direct = (d.rho * kron(p.filter->fA * p.filter->fA, p.filter->fB * p.filter->fB)).trace().real();
        e.pf = std::max(e.pf, std::abs(direct - op.lambda_min_F * p.wootters.tr_r));
        e.cratio = std::max(e.cratio, std::abs(tr.c_out - p.wootters.concurrence / p.wootters.tr_r));
      } catch (const Error&) {
        ++e.errors;
      }
      ++e.states;
    }
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

}  // namespace

int main() {
  const Ensemble ens = run_ensemble();

  run(1, "invariant suite", [&] {
    const bool ok = ens.errors == 0 && ens.norm <= 1e-9 && ens.condit <= 1e-9 && ens.marginal <= 1e-8 &&
                    ens.trr <= 1e-8 && ens.pf <= 1e-9 && ens.seconds < 10.0;
    return std::make_pair(ok, std::to_string(ens.states) + " states, " + std::to_string(ens.errors) + " errors, " +
                                  fmt("FF~ %.2e, condit %.2e, marginal %.2e, trR %.2e", ens.norm, ens.condit,
                                      ens.marginal, ens.trr) +
                                  fmt(", P_f %.2e, %.2f s", ens.pf, ens.seconds));
  });

  run(2, "concurrence ratio", [&] {
    return std::make_pair(ens.errors == 0 && ens.cratio <= 1e-8, fmt("max |C' - C/trR| = %.2e", ens.cratio));
  });

  run(3, "family oracle agreement", [] {
    std::mt19937_64 rng(777);
    double lam = 0, theta = 0, k = 0, f = 0, pf = 0, filt = 0;
    const int draws = 250;
    for (int i = 0; i < draws; ++i) {
      const FamilyParams fp = sample_family_params(rng);
      const FamilyClosedForm cf = family_closed_form(fp);
      const Plan p = plan(family_state(fp));
      for (int j = 0; j < 4; ++j) lam = std::max(lam, std::abs(cf.lambdas[j] - p.wootters.lambdas[j]));
      const double fs = std::max(1.0, cf.F.max_abs());
      f = std::max(f, max_abs_diff(cf.F, p.op->F) / fs);
      k = std::max(k, std::abs(cf.k * cf.k - 1.0 / p.op->F(1, 1).real()) / std::max(1.0, cf.k * cf.k));
      pf = std::max(pf, std::abs(cf.p_f - p.p_f));
      filt = std::max(filt, std::max(max_abs_diff(cf.fA, p.filter->fA), max_abs_diff(cf.fB, p.filter->fB)));
      if (fp.p[1] > 1e-6) {
        const double a = fp.alpha, b = fp.beta();
        const CVec4 psi1 = a * CVec4::basis(1) - b * CVec4::basis(2);
        const CVec4 psi2 = b * CVec4::basis(1) + a * CVec4::basis(2);
        const cplx c1 = inner(psi1, p.wootters.x[0]), c2 = inner(psi2, p.wootters.x[0]);
        theta = std::max(theta, std::abs(cf.theta - std::atan(-(c2 / c1).real() * std::sqrt(fp.p[0] / fp.p[1]))));
      }
    }
    const bool ok = lam <= 1e-9 && theta <= 1e-9 && k <= 1e-9 && f <= 1e-9 && pf <= 1e-9 && filt <= 1e-8;
    return std::make_pair(ok, std::to_string(draws) + " draws, " +
                                  fmt("lambda %.1e, theta %.1e, k %.1e, F %.1e", lam, theta, k, f) +
                                  fmt(", P_f %.1e, filters %.1e", pf, filt));
  });

  run(4, "worked instance", [] {
    const FamilyParams fp{std::sqrt(0.5), {0.5, 0.0, 0.375, 0.125}};
    const DensityMatrix d = family_state(fp);
    const Plan p = plan(d);
    const TransformResult tr = apply_filter(d, *p.filter, p.wootters);
    const FamilyClosedForm cf = family_closed_form(fp);
    bool ok = std::abs(p.wootters.concurrence - 0.0669873) <= 1e-6 && std::abs(p.wootters.tr_r - 0.9330127) <= 1e-6 &&
              std::abs(cf.k - 1.0) <= 1e-10 && std::abs(p.p_f - 0.5386751) <= 1e-6 &&
              std::abs(tr.c_out - 0.0717968) <= 1e-6 && tr.components.size() == 3;
    const double w[3] = {0.5358984, 0.2320508, 0.2320508};
    for (std::size_t i = 0; ok && i < 3; ++i) ok = std::abs(tr.components[i].p - w[i]) <= 1e-6;
    return std::make_pair(ok, fmt("C %.7f, trR %.7f, P_f %.7f, C' %.7f", p.wootters.concurrence, p.wootters.tr_r,
                                  p.p_f, tr.c_out));
  });

  run(5, "rank-2 tau sweep", [] {
    const FamilyParams fp{0.8, {0.7, 0.3, 0.0, 0.0}};
    const DensityMatrix d = family_state(fp);
    bool certified = true;
    double best = -1.0, best_ratio = 0.0, at_one = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const Plan p = plan(d, CompletionChoice::from_tau_ratio(t));
      certified = certified && verify_bell_diagonal(apply_filter(d, *p.filter, p.wootters)).bell_diagonal;
      if (p.p_f > best) best = p.p_f, best_ratio = t;
      if (t == 1.0) at_one = p.p_f;
    }
    const double closed = family_rank2(fp, 1.0).p_f;
    const bool ok = certified && best_ratio == 1.0 && std::abs(at_one - closed) <= 1e-9;
    return std::make_pair(ok, fmt("argmax ratio %.2f, P_f(1) %.10f, closed form %.10f", best_ratio, at_one, closed));
  });

  run(6, "degenerate scaling", [] {
    auto params = [](double p4) {
      FamilyParams fp{0.8, {0.6, 0.1, 0.3, p4}};
      for (int i = 0; i < 3; ++i) fp.p[i] *= 1.0 - p4;
      return fp;
    };
    const double a = plan(family_state(params(1e-6))).p_f;
    const double b = plan(family_state(params(1e-8))).p_f;
    const StateFile zero{family_state(params(0.0)).rho, std::nullopt};
    const cli::Outcome out = cli::analyze_state(zero, NumericConfig{});
    const bool ok = std::abs(a / b - 10.0) <= 0.5 && out.exit_code == 3 && out.document["filter"].is_null();
    return std::make_pair(ok, fmt("ratio %.4f, p4 = 0 exit %.0f", a / b, out.exit_code));
  });

  run(7, "Werner fixed point and report round trip", [] {
    const StateFile w{bftest::werner(0.8), std::string("werner")};
    const cli::Outcome first = cli::analyze_state(w, NumericConfig{});
    const LocalFilter lf = parse_filter(first.document);
    const double pf = first.document["p_f"].get<double>();
    const json reparsed = json::parse(first.document.dump());
    const StateFile prime = parse_state(json{{"matrix", reparsed["rho_prime"]}});
    const cli::Outcome second = cli::analyze_state(prime, NumericConfig{});
    const LocalFilter lf2 = parse_filter(second.document);
    const double dev = std::max(max_abs_diff(lf.fA, CMat2::identity()), max_abs_diff(lf.fB, CMat2::identity()));
    const double dev2 = std::max(max_abs_diff(lf2.fA, CMat2::identity()), max_abs_diff(lf2.fB, CMat2::identity()));
    const double pf2 = second.document["p_f"].get<double>();
    const bool ok = first.exit_code == 0 && second.exit_code == 0 && reparsed == first.document && dev <= 1e-8 &&
                    std::abs(pf - 1.0) <= 1e-8 && dev2 <= 1e-8 && std::abs(pf2 - 1.0) <= 1e-8;
    return std::make_pair(ok, fmt("filter dev %.1e, P_f %.10f, round trip dev %.1e, P_f %.10f", dev, pf, dev2, pf2));
  });

  run(8, "Procrustean pure state", [] {
    const CVec4 v = std::sqrt(0.8) * CVec4::basis(1) - std::sqrt(0.2) * CVec4::basis(2);
    const DensityMatrix d = load_density(outer(v, v));
    const Plan p = plan(d);
    const TransformResult tr = apply_filter(d, *p.filter, p.wootters);
    const bool ok = std::abs(tr.p_f - 0.4) <= 1e-8 && std::abs(tr.c_out - 1.0) <= 1e-8;
    return std::make_pair(ok, fmt("P_f %.10f, C' %.10f", tr.p_f, tr.c_out));
  });

  return failures == 0 ? 0 : 1;
}
