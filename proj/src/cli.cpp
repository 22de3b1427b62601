#include "thetagw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "thetagw/absorption.hpp"
#include "thetagw/desk.hpp"
#include "thetagw/embedding.hpp"
#include "thetagw/errors.hpp"
#include "thetagw/offspring.hpp"
#include "thetagw/params.hpp"
#include "thetagw/params_json.hpp"
#include "thetagw/pgf.hpp"
#include "thetagw/qprocess.hpp"
#include "thetagw/simulator.hpp"

namespace thetagw {

using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  std::optional<double> theta, a, c, q, big_a;
  std::optional<int> n;
  std::optional<double> t, s;
  std::optional<long long> k_max;
  std::optional<long long> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
  std::optional<std::uint64_t> z_cap;
  std::optional<std::string> format, out, config;
  std::optional<unsigned> workers;
  std::optional<double> y_min, y_max, dt;
};

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

ojson ext(const ExtendedReal& v) { return v.is_finite() ? ojson(v.value()) : ojson("inf"); }

ojson opt_ext(const std::optional<ExtendedReal>& v) { return v ? ext(*v) : ojson(nullptr); }

ojson vec_json(const std::vector<double>& v) {
  ojson arr = ojson::array();
  for (double x : v) arr.push_back(num(x));
  return arr;
}

// Fills unset options from a JSON config file; flags on the command line win.
void merge_config(Options& o) {
  if (!o.config) return;
  std::ifstream in(*o.config);
  if (!in) throw IoError("cannot read config file '" + *o.config + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");

  auto find = [&j](std::initializer_list<const char*> keys) -> const nlohmann::json* {
    for (const char* k : keys) {
      if (j.contains(k) && !j[k].is_null()) return &j[k];
    }
    return nullptr;
  };
  auto fill = [&find](auto& slot, std::initializer_list<const char*> keys) {
    if (slot) return;
    if (const auto* v = find(keys)) {
      using T = typename std::remove_reference_t<decltype(slot)>::value_type;
      try {
        slot = v->template get<T>();
      } catch (const nlohmann::json::exception&) {
        throw DomainError(std::string("config field '") + *keys.begin() + "' has the wrong type");
      }
    }
  };
  fill(o.theta, {"theta"});
  fill(o.a, {"a"});
  fill(o.c, {"c"});
  fill(o.q, {"q"});
  fill(o.big_a, {"A"});
  fill(o.n, {"n"});
  fill(o.t, {"t"});
  fill(o.s, {"s"});
  fill(o.k_max, {"k_max", "k-max"});
  fill(o.replicates, {"replicates"});
  fill(o.seed, {"seed"});
  fill(o.n_max, {"n_max", "n-max"});
  fill(o.z_cap, {"z_cap", "z-cap"});
  fill(o.format, {"format"});
  fill(o.out, {"out"});
  fill(o.workers, {"workers"});
  fill(o.y_min, {"y_min", "y-min"});
  fill(o.y_max, {"y_max", "y-max"});
  fill(o.dt, {"dt"});
}

bool has_params(const Options& o) { return o.theta || o.a || o.c || o.q || o.big_a; }

ThetaParams params_from(const Options& o) {
  if (!o.theta || !o.a) throw UsageError("--theta and --a are required");
  if (!o.c && !o.q) throw UsageError("one of --c or --q is required");
  RawParams raw;
  raw.theta = *o.theta;
  raw.a = *o.a;
  raw.c = o.c;
  raw.q = o.q;
  raw.big_a = o.big_a.value_or(1.0);
  return validate_classify(raw);
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("THETA_GW_SEED")) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("THETA_GW_SEED must be an unsigned integer");
  }
  return 0;
}

ojson summary_json(const ThetaParams& p) {
  const ScalarSummary s = scalar_summary(p);
  ojson j;
  j["f_at_1"] = num(s.f_at_1);
  j["p_inf"] = num(s.p_inf);
  j["mean_m"] = ext(s.mean_m);
  j["f2_at_1"] = ext(s.f2_at_1);
  j["gamma"] = num(s.gamma);
  return j;
}

void add_check(RunReport& r, std::string name, double value, double tol) {
  r.checks.push_back({std::move(name), value, tol, std::abs(value) < tol});
}

std::vector<double> s_grid(const ThetaParams& p, int points) {
  const double hi = std::min(1.0, p.big_a());
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(hi * i / (points - 1));
  return g;
}

// ---------------------------------------------------------------------------
// Commands

RunReport cmd_classify(const Options& o) {
  const ThetaParams p = params_from(o);
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["case_id"] = std::string(case_name(p.case_id()));
  r.outputs["regular"] = p.regular();
  r.outputs["criticality"] = std::string(criticality_name(p.tag().criticality));
  r.outputs["q"] = num(p.q());
  r.outputs["d"] = p.d() ? ojson(*p.d()) : ojson(nullptr);
  r.outputs["summary"] = summary_json(p);
  if (p.ill_conditioned()) {
    r.outputs["warnings"] = ojson::array({"0 < |theta| < 1e-8: expect amplified rounding"});
  }
  return r;
}

RunReport cmd_pmf(const Options& o) {
  const ThetaParams p = params_from(o);
  const int K = static_cast<int>(o.k_max.value_or(50));
  const OffspringTable t = pmf(p, K);
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["K"] = t.K;
  r.outputs["pmf"] = vec_json(t.pmf);
  r.outputs["p_inf"] = num(t.p_inf);
  r.outputs["tail_mass"] = num(t.tail_mass);
  r.table_header = {"k", "p_k"};
  for (int k = 0; k <= t.K; ++k) r.table_rows.push_back({std::to_string(k), format_double(t.pmf[k])});
  r.table_rows.push_back({"inf", format_double(t.p_inf)});
  r.table_rows.push_back({"tail", format_double(t.tail_mass)});
  return r;
}

RunReport cmd_iterate(const Options& o) {
  const ThetaParams p = params_from(o);
  if (o.n && o.t) throw UsageError("give either --n or --t, not both");
  if (o.n && *o.n < 0) throw UsageError("--n must be >= 0");
  const double t = o.t ? *o.t : static_cast<double>(o.n.value_or(1));
  const double s = o.s.value_or(0.0);
  const PgfValue v = eval_fn_detail(p, t, s);
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["t"] = num(t);
  r.outputs["s"] = num(s);
  r.outputs["value"] = num(v.value);
  r.outputs["clamped"] = v.clamped;
  if (!o.t) r.outputs["compose"] = num(compose_iterate(p, o.n.value_or(1), s));
  r.table_header = {"t", "s", "value"};
  r.table_rows.push_back({format_double(t), format_double(s), format_double(v.value)});
  return r;
}

RunReport cmd_absorb(const Options& o) {
  const ThetaParams p = params_from(o);
  const int N = o.n.value_or(50);
  if (N < 0) throw UsageError("--n must be >= 0");
  const AbsorptionTails tails(p);
  RunReport r;
  r.params = params_to_json(p);
  r.table_header = {"n", "t0_tail", "t1_tail", "t_tail"};
  ojson rows = ojson::array();
  for (int n = 0; n <= N; ++n) {
    const double a0 = tails.t0_tail(n);
    const double a1 = tails.t1_tail(n);
    const double at = tails.t_tail(n);
    r.table_rows.push_back({std::to_string(n), format_double(a0), format_double(a1), format_double(at)});
    rows.push_back(ojson{{"n", n}, {"t0_tail", num(a0)}, {"t1_tail", num(a1)}, {"t_tail", num(at)}});
  }
  const ExpectedAbsorption e = expected_absorption(p);
  r.outputs["mass_t0"] = num(tails.mass_t0());
  r.outputs["mass_t1"] = num(tails.mass_t1());
  r.outputs["expected"] = ojson{{"t0_given_finite", opt_ext(e.t0_given_finite)},
                                {"t1_given_finite", opt_ext(e.t1_given_finite)},
                                {"t_given_finite", opt_ext(e.t)}};
  r.outputs["tails"] = rows;
  return r;
}

RunReport cmd_gumbel(const Options& o) {
  const ThetaParams p = params_from(o);
  const double y_lo = o.y_min.value_or(-5.0);
  const double y_hi = o.y_max.value_or(5.0);
  const GumbelLimit g = gumbel_limit(p);
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["w"] = num(g.w);
  r.outputs["r"] = ext(g.r);
  r.outputs["epsilon"] = num(g.epsilon);
  r.outputs["shift"] = num(g.shift);
  r.outputs["mean"] = num(g.mean);
  r.table_header = {"y", "exact", "limit"};
  ojson pts = ojson::array();
  double sup = 0.0;
  for (const auto& pt : gumbel_lattice(p, y_lo, y_hi)) {
    r.table_rows.push_back({format_double(pt.y), format_double(pt.exact), format_double(pt.limit)});
    pts.push_back(ojson{{"n", pt.n}, {"y", num(pt.y)}, {"exact", num(pt.exact)}, {"limit", num(pt.limit)}});
    sup = std::max(sup, std::abs(pt.exact - pt.limit));
  }
  r.outputs["sup_deviation"] = num(sup);
  r.outputs["points"] = pts;
  return r;
}

RunReport cmd_qprocess(const Options& o) {
  const ThetaParams p = params_from(o);
  const int K = static_cast<int>(o.k_max.value_or(20));
  auto law_or_null = [](const std::function<LimitLaw()>& make) -> ojson {
    try {
      return vec_json(make().probabilities);
    } catch (const DomainError&) {
    } catch (const TrivialLaw&) {
    }
    return nullptr;
  };
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["case"] = std::string(case_name(p.case_id()));
  r.outputs["gamma"] = num(scalar_summary(p).gamma);
  r.outputs["b"] = law_or_null([&] { return conditional_limit_b(p, K); });
  r.outputs["stationary"] = law_or_null([&] { return stationary_law(p, K); });
  r.outputs["w"] = law_or_null([&] { return critical_limit_w(p, K); });
  if (p.case_id() != CaseId::Case2) {
    const QFunction Q(p);
    double sup = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double s = p.q() * i / 50.0;
      sup = std::max(sup, std::abs(Q.eval(eval_f(p, s)) - Q.gamma() * Q.eval(s)));
    }
    add_check(r, "q_functional_equation", sup, 1e-10);
  }
  return r;
}

struct EmbedChecks {
  double embed_sup_err = 0.0;
  double semigroup_sup_err = 0.0;
  std::vector<double> quad_residuals;
};

EmbedChecks embedding_checks(const ThetaParams& p, const Embedding& e) {
  EmbedChecks c;
  const double hi = std::min(0.99, p.big_a());
  for (int i = 0; i <= 49; ++i) {
    const double s = hi * i / 49.0;
    c.embed_sup_err = std::max(c.embed_sup_err, std::abs(semigroup_F_ode(e, 1.0, s) - eval_f(p, s)));
    for (double t : {0.3, 0.7, 1.5}) {
      for (double u : {0.3, 0.7, 1.5}) {
        const double lhs = semigroup_F(e, p, t + u, s);
        const double rhs = semigroup_F(e, p, t, semigroup_F(e, p, u, s));
        c.semigroup_sup_err = std::max(c.semigroup_sup_err, std::abs(lhs - rhs));
      }
    }
  }
  const double q = p.q();
  for (double t : {0.5, 1.0, 2.0}) {
    for (double s : {0.0, 0.25, (q + 1.0) / 2.0}) {
      if (s == q || s >= 1.0 || (s > q && q == 1.0)) continue;
      c.quad_residuals.push_back(integral_residual(e, p, t, s));
    }
  }
  return c;
}

RunReport cmd_embed(const Options& o) {
  const ThetaParams p = params_from(o);
  const int K = static_cast<int>(o.k_max.value_or(10));
  const Embedding e = build_embedding(p);
  const EmbedChecks c = embedding_checks(p, e);
  RunReport r;
  r.params = params_to_json(p);
  r.outputs["lambda"] = num(e.lambda);
  r.outputs["mu"] = ext(e.mu);
  r.outputs["h0"] = num(h_eval(e, 0.0));
  r.outputs["h_coeffs"] = vec_json(h_coeffs(e, static_cast<std::size_t>(K)).coeffs);
  r.outputs["checks"] = ojson{{"embed_sup_err", num(c.embed_sup_err)},
                              {"semigroup_sup_err", num(c.semigroup_sup_err)},
                              {"quad_residuals", vec_json(c.quad_residuals)}};
  add_check(r, "embed_sup_err", c.embed_sup_err, 1e-10);
  add_check(r, "semigroup_sup_err", c.semigroup_sup_err, 1e-10);
  double worst = 0.0;
  for (double v : c.quad_residuals) worst = std::max(worst, std::abs(v));
  add_check(r, "quad_residual_max", worst, 1e-6);
  return r;
}

ojson ks_json(const KsDistance& k) {
  return ojson{{"t0", num(k.t0)}, {"t1", num(k.t1)}, {"t", num(k.t)}, {"max", num(k.max)}};
}

RunReport cmd_simulate(const Options& o) {
  const ThetaParams p = params_from(o);
  SimConfig cfg{.params = p};
  cfg.replicates = o.replicates.value_or(100000);
  cfg.n_max = o.n_max.value_or(200);
  cfg.z_cap = o.z_cap.value_or(10000000);
  cfg.master_seed = resolve_seed(o);
  cfg.workers = o.workers.value_or(1);
  if (o.k_max) cfg.k_max = static_cast<std::size_t>(*o.k_max);
  const EmpiricalTails emp = estimate_tails(cfg);
  const KsDistance ks = ks_distance(emp, AbsorptionTails(p), 0, cfg.n_max);

  RunReport r;
  r.params = params_to_json(p);
  r.seed = cfg.master_seed;
  r.outputs["replicates"] = cfg.replicates;
  r.outputs["n_max"] = cfg.n_max;
  r.outputs["z_cap"] = cfg.z_cap;
  r.outputs["ks"] = ks_json(ks);
  r.outputs["censored_fraction"] = num(emp.censored_fraction());
  r.outputs["counts"] = ojson{{"extinct", emp.extinct},
                              {"exploded", emp.exploded},
                              {"censored_horizon", emp.censored_horizon},
                              {"censored_cap", emp.censored_cap},
                              {"cap_treated_as_surviving", emp.cap_treated_as_surviving}};
  r.outputs["mean_absorption"] = num(emp.mean_absorption());
  r.outputs["mean_absorption_se"] = num(emp.mean_absorption_se());
  r.outputs["warnings"] = emp.warnings;
  r.table_header = {"n", "emp_t0_tail", "emp_t1_tail", "emp_t_tail", "se"};
  for (int n = 0; n <= cfg.n_max; ++n) {
    r.table_rows.push_back({std::to_string(n), format_double(emp.survival_t0(n)),
                            format_double(emp.survival_t1(n)), format_double(emp.survival_t(n)),
                            format_double(emp.standard_error(n))});
  }
  return r;
}

ojson verify_set(const ThetaParams& p, RunReport& r, const std::string& label) {
  const auto before = r.checks.size();
  auto check = [&](const std::string& name, double v, double tol) { add_check(r, label + "." + name, v, tol); };

  double iter = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (double s : s_grid(p, 50)) iter = std::max(iter, std::abs(eval_fn(p, n, s) - compose_iterate(p, n, s)));
  }
  check("iterate_vs_compose", iter, 1e-10);

  const OffspringTable a = pmf(p, 50);
  const OffspringTable b = pmf_oracle(p, 50);
  double pm = 0.0;
  for (int k = 0; k <= 50; ++k) pm = std::max(pm, std::abs(a.pmf[k] - b.pmf[k]));
  check("pmf_vs_oracle", pm, 1e-9);

  const AbsorptionTails tails(p);
  double tl = 0.0;
  for (int n = 0; n <= 50; ++n) {
    const auto [x0, x1] = tails.via_iteration(n);
    tl = std::max({tl, std::abs(x0 - tails.t0_tail(n)), std::abs(x1 - tails.t1_tail(n))});
  }
  check("tails_vs_iteration", tl, 1e-10);

  if (p.case_id() != CaseId::Case2) {
    const QFunction Q(p);
    double sup = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double s = p.q() * i / 50.0;
      sup = std::max(sup, std::abs(Q.eval(eval_f(p, s)) - Q.gamma() * Q.eval(s)));
    }
    check("q_functional_equation", sup, 1e-10);
  }

  const Embedding e = build_embedding(p);
  const EmbedChecks c = embedding_checks(p, e);
  check("embedding_F1_eq_f", c.embed_sup_err, 1e-10);
  check("semigroup", c.semigroup_sup_err, 1e-10);
  double worst = 0.0;
  for (double v : c.quad_residuals) worst = std::max(worst, std::abs(v));
  check("quadrature_residual", worst, 1e-6);

  ojson out;
  out["label"] = label;
  out["params"] = params_to_json(p);
  bool pass = true;
  for (auto i = before; i < r.checks.size(); ++i) pass = pass && r.checks[i].pass;
  out["pass"] = pass;
  return out;
}

RunReport cmd_verify(const Options& o) {
  RunReport r;
  ojson sets = ojson::array();
  if (has_params(o)) {
    const ThetaParams p = params_from(o);
    r.params = params_to_json(p);
    sets.push_back(verify_set(p, r, std::string(case_name(p.case_id()))));
  } else {
    for (const DeskSet& d : desk_parameter_sets()) {
      sets.push_back(verify_set(validate_classify(d.raw), r, d.label));
    }
  }

  // Simulation smoke test on the death-explosion case, where every tail is a^n.
  for (const DeskSet& d : desk_parameter_sets()) {
    if (d.label != "case6") continue;
    SimConfig cfg{.params = validate_classify(d.raw)};
    cfg.replicates = 20000;
    cfg.n_max = 30;
    cfg.z_cap = d.z_cap;
    cfg.master_seed = resolve_seed(o);
    cfg.workers = o.workers.value_or(1);
    const EmpiricalTails emp = estimate_tails(cfg);
    const KsDistance ks = ks_distance(emp, AbsorptionTails(cfg.params), 0, cfg.n_max);
    const double band = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * cfg.replicates));
    add_check(r, "case6.simulation_ks", ks.max, band);
    r.seed = cfg.master_seed;
  }
  r.outputs["sets"] = sets;
  return r;
}

std::string default_format(const std::string& cmd) {
  if (cmd == "pmf" || cmd == "absorb" || cmd == "gumbel" || cmd == "simulate") return "csv";
  if (cmd == "iterate") return "text";
  return "json";
}

void write_csv_table(const RunReport& r, std::ostream& out) {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(r.table_header);
  for (const auto& row : r.table_rows) line(row);
}

void flatten(const ojson& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

ojson report_json(const RunReport& r) {
  ojson j;
  j["command"] = r.command;
  if (!r.params.is_null()) j["params"] = r.params;
  for (const auto& [k, v] : r.outputs.items()) j[k] = v;
  if (!r.checks.empty()) {
    ojson cs = ojson::array();
    for (const auto& c : r.checks) {
      cs.push_back(ojson{{"name", c.name}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)}, {"pass", c.pass}});
    }
    j["check_results"] = cs;
    j["all_pass"] = r.all_pass();
  }
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

}  // namespace

bool RunReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_report(const RunReport& r, std::string_view format, std::ostream& out) {
  if (format == "json") {
    out << report_json(r).dump(2) << '\n';
    return;
  }
  const bool tabular = !r.table_header.empty();
  if (format == "csv") {
    if (tabular) {
      write_csv_table(r, out);
      return;
    }
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(report_json(r), "", kv);
    out << "key,value\n";
    for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
    return;
  }
  if (format == "text") {
    if (r.command == "iterate") {
      out << format_double(r.outputs.at("value").get<double>()) << '\n';
      return;
    }
    std::vector<std::pair<std::string, std::string>> kv;
    ojson j = report_json(r);
    j.erase("check_results");
    flatten(j, "", kv);
    for (const auto& [k, v] : kv) out << k << ": " << v << '\n';
    for (const auto& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << ' ' << format_double(c.value) << " < "
          << format_double(c.tolerance) << '\n';
    }
    return;
  }
  throw UsageError("unknown format '" + std::string(format) + "'");
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"theta-branching Galton-Watson toolkit", "thetagw"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "validate parameters, report case and scalar summary"},
      {"pmf", "offspring probabilities p_0..p_K"},
      {"iterate", "evaluate the n-th (or real t-th) iterate f_t(s)"},
      {"absorb", "tails of extinction, explosion and absorption times"},
      {"gumbel", "exact vs limiting law of the rescaled explosion time"},
      {"qprocess", "limit laws of the process conditioned on extinction"},
      {"embed", "continuous-time embedding and its identity checks"},
      {"simulate", "Monte Carlo estimate of the absorption-time tails"},
      {"verify", "cross-module identity suite"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--theta", o.theta, "theta in [-1, 1]");
    sub->add_option("--a", o.a, "a > 0");
    sub->add_option("--c", o.c, "c >= 0");
    sub->add_option("--q", o.q, "extinction probability q in [0, 1]");
    sub->add_option("--A", o.big_a, "scale A >= 1 (default 1)");
    sub->add_option("--n", o.n, "generation or row count");
    sub->add_option("--t", o.t, "real iterate index");
    sub->add_option("--s", o.s, "pgf argument");
    sub->add_option("--k-max", o.k_max, "truncation order");
    sub->add_option("--replicates", o.replicates, "Monte Carlo replicates");
    sub->add_option("--seed", o.seed, "master seed (default THETA_GW_SEED or 0)");
    sub->add_option("--n-max", o.n_max, "generation horizon");
    sub->add_option("--z-cap", o.z_cap, "population cap");
    sub->add_option("--format", o.format, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--config", o.config, "JSON file with default values for any flag");
    sub->add_option("--workers", o.workers, "simulation threads");
    sub->add_option("--y-min", o.y_min, "gumbel: lower end of the y range");
    sub->add_option("--y-max", o.y_max, "gumbel: upper end of the y range");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    merge_config(o);
    const std::string format = o.format.value_or(default_format(cmd));
    if (format != "json" && format != "csv" && format != "text") {
      throw UsageError("unknown format '" + format + "'");
    }
    const auto start = std::chrono::steady_clock::now();

    RunReport r;
    if (cmd == "classify") r = cmd_classify(o);
    else if (cmd == "pmf") r = cmd_pmf(o);
    else if (cmd == "iterate") r = cmd_iterate(o);
    else if (cmd == "absorb") r = cmd_absorb(o);
    else if (cmd == "gumbel") r = cmd_gumbel(o);
    else if (cmd == "qprocess") r = cmd_qprocess(o);
    else if (cmd == "embed") r = cmd_embed(o);
    else if (cmd == "simulate") r = cmd_simulate(o);
    else r = cmd_verify(o);
    r.command = cmd;
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream file;
    std::ostream* dest = &out;
    if (o.out) {
      file.open(*o.out, std::ios::binary);
      if (!file) throw IoError("cannot write '" + *o.out + "'");
      dest = &file;
    }

    if (cmd == "simulate" && format == "csv") {
      // Table to the destination, summary JSON beside it.
      emit_report(r, "csv", *dest);
      RunReport summary = r;
      summary.table_header.clear();
      summary.table_rows.clear();
      if (o.out) {
        std::ofstream js(*o.out + ".json", std::ios::binary);
        if (!js) throw IoError("cannot write '" + *o.out + ".json'");
        emit_report(summary, "json", js);
      } else {
        emit_report(summary, "json", err);
      }
    } else {
      emit_report(r, format, *dest);
    }
    if (!*dest) throw IoError("write failed");
    return r.all_pass() ? 0 : 5;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Usage: return 2;
      case ErrorKind::Domain: return 3;
      case ErrorKind::Numeric: return 4;
      case ErrorKind::Check: return 5;
    }
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace thetagw
