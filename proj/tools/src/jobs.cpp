#include "ultrajet_cli/jobs.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "ultrajet/error.hpp"
#include "ultrajet/extension.hpp"
#include "ultrajet/weight_function.hpp"

namespace ultrajet::cli {

namespace fs = std::filesystem;

namespace {

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, p.string() + ": " + e.what());
  }
}

template <class T>
T get(const Json& j, const char* key, const std::string& ctx) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, ctx + "." + key + ": " + e.what());
  }
}

const fs::path& need(const fs::path& p, const char* key) {
  if (p.empty()) throw Error(ErrorKind::Schema, std::string("config.") + key + " is required for this command");
  return p;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  return os;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json plan_json(const ExtensionPlan& p) {
  Json j;
  j["L"] = p.L;
  j["p_fold"] = p.p_fold;
  j["xi"] = p.xi;
  j["C"] = p.C;
  j["rho"] = p.rho;
  j["C_0"] = p.C_0;
  j["C_1"] = p.C_1;
  j["C_2"] = p.C_2;
  j["H"] = p.H;
  j["K_1"] = p.K_1();
  j["K_3"] = p.K_3();
  j["threshold"] = p.threshold();
  j["valid"] = p.valid();
  j["r_cov"] = p.r_cov;
  j["cutoff"] = p.cutoff;
  return j;
}

Json sandwich_json(const SandwichFit& s) {
  Json j;
  j["xi"] = s.xi;
  j["B"] = s.B;
  j["A"] = s.A;
  j["C"] = s.C;
  j["a_trend"] = to_string(s.a_trend);
  j["c_trend"] = to_string(s.c_trend);
  j["verified"] = s.verified;
  return j;
}

bool undecided(const GoodnessReport& g) {
  for (const auto* q : {&g.r_good, &g.b_good, &g.condition_d, &g.condition_d_beurling, &g.moderate_growth,
                        &g.moderate_growth_beurling})
    if (q->verdict == Verdict::Undecidable) return true;
  return false;
}

std::vector<double> xi_grid_or_default(const JobConfig& cfg) {
  return cfg.xi_grid.empty() ? default_xi_grid() : cfg.xi_grid;
}

}  // namespace

JobConfig config_from_json(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, "config must be a JSON object");
  require_keys(j,
               {"command", "weight", "target_weight", "jet", "set", "r_cov", "xi_grid", "K", "t_grid", "plan",
                "samples", "alpha_max", "limit_alpha_max", "j_max", "output", "tolerances", "seed"},
               "config");
  JobConfig c;
  if (j.contains("command")) c.command = get<std::string>(j, "command", "config");
  if (j.contains("weight")) c.weight = resolve(base_dir, get<std::string>(j, "weight", "config"));
  if (j.contains("target_weight"))
    c.target_weight = resolve(base_dir, get<std::string>(j, "target_weight", "config"));
  if (j.contains("jet")) c.jet = resolve(base_dir, get<std::string>(j, "jet", "config"));
  if (j.contains("set")) {
    for (const auto& comp : j.at("set")) {
      if (!comp.is_array() || comp.size() != 2) throw Error(ErrorKind::Schema, "config.set: expected [a, b] pairs");
      c.set.emplace_back(comp[0].get<double>(), comp[1].get<double>());
    }
  }
  if (j.contains("r_cov")) c.r_cov = get<double>(j, "r_cov", "config");
  if (j.contains("xi_grid")) c.xi_grid = get<std::vector<double>>(j, "xi_grid", "config");
  if (j.contains("K")) c.K = get<std::size_t>(j, "K", "config");
  if (j.contains("t_grid")) {
    const auto& t = j.at("t_grid");
    require_keys(t, {"lo", "hi", "points"}, "config.t_grid");
    if (t.contains("lo")) c.t_grid.lo = get<double>(t, "lo", "config.t_grid");
    if (t.contains("hi")) c.t_grid.hi = get<double>(t, "hi", "config.t_grid");
    if (t.contains("points")) c.t_grid.points = get<std::size_t>(t, "points", "config.t_grid");
  }
  if (j.contains("plan")) {
    const auto& p = j.at("plan");
    require_keys(p, {"L", "p_fold", "xi", "w_xi", "r_cov", "cutoff"}, "config.plan");
    if (p.contains("L")) c.plan.L = get<double>(p, "L", "config.plan");
    if (p.contains("p_fold")) c.plan.p_fold = get<std::size_t>(p, "p_fold", "config.plan");
    if (p.contains("xi")) c.plan.xi = get<double>(p, "xi", "config.plan");
    if (p.contains("w_xi")) c.plan.w_xi = get<double>(p, "w_xi", "config.plan");
    if (p.contains("r_cov")) c.plan.r_cov = get<double>(p, "r_cov", "config.plan");
    if (p.contains("cutoff")) c.plan.cutoff = get<bool>(p, "cutoff", "config.plan");
  }
  if (j.contains("samples")) c.samples = get<std::size_t>(j, "samples", "config");
  if (j.contains("alpha_max")) c.alpha_max = get<std::size_t>(j, "alpha_max", "config");
  if (j.contains("limit_alpha_max")) c.limit_alpha_max = get<std::size_t>(j, "limit_alpha_max", "config");
  if (j.contains("j_max")) c.j_max = get<int>(j, "j_max", "config");
  if (j.contains("output")) c.output = resolve(base_dir, get<std::string>(j, "output", "config"));
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    require_keys(t, {"growth_tol", "little_o_epsilon", "kappa_rtol"}, "config.tolerances");
    if (t.contains("growth_tol")) c.tolerances.growth_tol = get<double>(t, "growth_tol", "config.tolerances");
    if (t.contains("little_o_epsilon"))
      c.tolerances.little_o_epsilon = get<double>(t, "little_o_epsilon", "config.tolerances");
    if (t.contains("kappa_rtol")) c.tolerances.kappa_rtol = get<double>(t, "kappa_rtol", "config.tolerances");
  }
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
  if (c.K < WeightSequence::kMinIndex)
    throw Error(ErrorKind::Schema, "config.K must be >= " + std::to_string(WeightSequence::kMinIndex));
  return c;
}

JobConfig load_config(const fs::path& path) {
  return config_from_json(read_json(path), fs::absolute(path).parent_path());
}

JobResult cmd_classify(const JobConfig& cfg) {
  const auto w = weight_from_json(read_json(need(cfg.weight, "weight")));
  ClassifyOptions opts;
  opts.little_o_epsilon = cfg.tolerances.little_o_epsilon;
  opts.kappa_rtol = cfg.tolerances.kappa_rtol;
  opts.trend.growth_tol = cfg.tolerances.growth_tol;
  const auto grid = geometric_grid(cfg.t_grid.lo, cfg.t_grid.hi, cfg.t_grid.points);
  const auto c = classify(w, grid, opts);
  const auto S = associated_matrix(w, xi_grid_or_default(cfg), cfg.K);
  const auto g = goodness(S, cfg.K);

  Json report;
  report["weight"] = weight_to_json(w);
  report["t_grid"] = {{"lo", cfg.t_grid.lo}, {"hi", cfg.t_grid.hi}, {"points", cfg.t_grid.points}};
  report["classification"] = to_json(c);
  report["goodness"] = to_json(g);

  auto csv = csv_stream();
  csv << "t,omega,kappa,ratio\n";
  for (const auto& s : c.samples) csv << s.t << ',' << s.omega << ',' << s.kappa << ',' << s.kappa / s.omega << '\n';

  JobResult r;
  r.files = {{"classification.json", dump(report)}, {"kappa_vs_omega.csv", csv.str()}};
  const bool open = !c.inconclusive.empty() || undecided(g);
  r.exit_code = open ? kInconclusive : kPass;
  r.summary = std::string("strong = ") + (c.strong ? "true" : "false") +
              (c.strong ? " C = " + std::to_string(c.strong_constant) : "") + (open ? " (inconclusive items)" : "");
  return r;
}

JobResult cmd_matrix(const JobConfig& cfg) {
  const auto w = weight_from_json(read_json(need(cfg.weight, "weight")));
  const auto S = associated_matrix(w, xi_grid_or_default(cfg), cfg.K);
  const auto reg = strong_regularization(S);
  const auto V = interleave_matrix(reg.matrix);

  Json report;
  report["weight"] = weight_to_json(w);
  report["K"] = cfg.K;
  bool open = false;
  Json fits = Json::array();
  for (const auto& s : reg.sandwich) {
    fits.push_back(sandwich_json(s));
    if (s.B > 0.0 && !s.verified) open = true;
  }
  report["sandwich"] = fits;
  Json hs = Json::array();
  for (const auto& row : V.rows()) {
    if (!reg.matrix.find(2.0 * row.xi)) continue;
    const auto h = sandwich_H(reg.matrix, V, row.xi, cfg.K);
    const auto& v = row.divided;
    const auto t_grid = geometric_grid(1.01 / v.quotient(v.max_index()), 2.0, 64);
    const auto dbl = gamma_doubling_check(reg.matrix, V, row.xi, t_grid);
    Json e;
    e["xi"] = row.xi;
    e["H"] = h.H;
    e["right_H"] = h.right_H;
    e["growing"] = h.growing;
    e["gamma_doubling"] = dbl.holds;
    e["gamma_checked"] = dbl.checked;
    hs.push_back(e);
    if (h.growing || !dbl.holds) open = true;
  }
  report["interleave"] = hs;
  const auto g = goodness(reg.matrix, cfg.K);
  report["goodness"] = to_json(g);
  if (undecided(g)) open = true;

  auto csv = csv_stream();
  csv << "matrix,xi,k,log_full\n";
  auto rows_csv = [&](const char* name, const WeightMatrix& M) {
    for (const auto& row : M.rows())
      for (std::size_t k = 0; k <= row.full.max_index(); ++k)
        csv << name << ',' << row.xi << ',' << k << ',' << row.full.log_value(k) << '\n';
  };
  rows_csv("S", S);
  rows_csv("Sbar", reg.matrix);
  rows_csv("V", V);

  JobResult r;
  r.files = {{"matrix.json", dump(matrix_to_json(S))},
             {"regularized.json", dump(matrix_to_json(reg.matrix))},
             {"interleaved.json", dump(matrix_to_json(V))},
             {"matrix_report.json", dump(report)},
             {"matrix_rows.csv", csv.str()}};
  r.exit_code = open ? kInconclusive : kPass;
  r.summary = std::to_string(S.rows().size()) + " rows, K = " + std::to_string(cfg.K) +
              (open ? " (inconclusive items)" : "");
  return r;
}

JobResult cmd_extend(const JobConfig& cfg) {
  const auto sigma = weight_from_json(read_json(need(cfg.weight, "weight")));
  const auto omega = cfg.target_weight.empty() ? sigma : weight_from_json(read_json(cfg.target_weight));
  const auto F = jet_from_json(read_json(need(cfg.jet, "jet")));

  const auto S = associated_matrix(sigma, cfg.xi_grid.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0}
                                                              : cfg.xi_grid,
                                   cfg.K);
  const auto reg = strong_regularization(S);
  const auto V = interleave_matrix(reg.matrix);

  CertifyOptions copts;
  copts.trend.growth_tol = cfg.tolerances.growth_tol;
  JetCertificate cert;
  if (cfg.plan.xi) {
    const auto& row = V.row(*cfg.plan.xi);
    cert = certify(F, WeightMatrix::from_full({{row.xi, row.full}}), copts);
  } else {
    cert = certify(F, V, copts);
  }
  const double xi = cert.xi;
  const double w_xi = cfg.plan.w_xi.value_or(2.0 * xi);
  const auto Wm = associated_matrix(omega, {w_xi}, std::max<std::size_t>(cfg.alpha_max + 2, WeightSequence::kMinIndex));
  const auto rows = extension_rows(reg.matrix, V, Wm, xi, w_xi);

  ExtensionPlan plan;
  plan.L = cfg.plan.L;
  plan.p_fold = cfg.plan.p_fold;
  plan.xi = xi;
  plan.C = cert.C;
  plan.rho = cert.rho;
  plan.H = sandwich_H(reg.matrix, V, 2.0 * xi, cfg.K).H;
  plan.r_cov = cfg.plan.r_cov;
  plan.cutoff = cfg.plan.cutoff;
  AssembleOptions aopts;
  aopts.allow_invalid_plan = true;
  const auto f = assemble(F, rows, plan, aopts);

  const auto samples = region_samples(f, cfg.samples, cfg.seed, cfg.j_max);
  const auto bounds = verify_bounds(f, samples, cfg.alpha_max);

  Json limits = Json::array();
  auto lcsv = csv_stream();
  lcsv << "base,j,x,d,alpha,error,envelope\n";
  bool limits_ok = true;
  for (double a : F.points()) {
    const auto lim = boundary_limits(f, a, cfg.limit_alpha_max, cfg.j_max);
    limits.push_back(to_json(lim));
    if (!lim.converges) limits_ok = false;
    for (bool m : lim.monotone)
      if (!m) limits_ok = false;
    for (const auto& row : lim.rows)
      lcsv << a << ',' << row.j << ',' << row.x << ',' << row.d << ',' << row.alpha << ',' << row.error << ','
           << row.envelope << '\n';
  }

  auto scsv = csv_stream();
  scsv << "x,d,alpha,value\n";
  const std::size_t A = std::min(cfg.alpha_max, plan.p_fold);
  for (double x : samples) {
    if (!f.in_region(x)) continue;
    const double d = distance_and_nearest(f.set(), x).distance;
    const auto g = f.derivatives(x, A);
    for (std::size_t a = 0; a <= A; ++a) scsv << x << ',' << d << ',' << a << ',' << g[a] << '\n';
  }

  Json report;
  report["plan"] = plan_json(plan);
  report["w_xi"] = w_xi;
  report["d_max"] = f.d_max();
  report["d_min"] = f.d_min();
  report["seed"] = cfg.seed;
  report["certificate"] = to_json(cert);
  report["bounds"] = to_json(bounds);
  report["limits"] = limits;
  const bool pass = plan.valid() && bounds.all_pass() && limits_ok;
  report["negative_control"] = !plan.valid();
  report["pass"] = pass;

  JobResult r;
  r.files = {{"certificate.json", dump(to_json(cert))},
             {"bound_report.json", dump(report)},
             {"extension_samples.csv", scsv.str()},
             {"boundary_limits.csv", lcsv.str()}};
  r.exit_code = pass ? kPass : kInconclusive;
  r.summary = std::string(pass ? "all bounds pass" : "bounds not all passing") +
              (plan.valid() ? "" : " (plan fails L > max(C_0, C_1, C_2) rho: negative control)");
  return r;
}

JobResult cmd_cover_dump(const JobConfig& cfg) {
  if (cfg.set.empty()) throw Error(ErrorKind::Schema, "cover-dump needs config.set");
  const CompactSet1D E(cfg.set);
  const auto cover = build_cover(E, cfg.r_cov);
  std::vector<double> xs;
  const std::size_t n = 10000;
  const double lo = E.lo() - cfg.r_cov, hi = E.hi() + cfg.r_cov;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / n);
  const auto extra = cover_samples(cover, 5);
  xs.insert(xs.end(), extra.begin(), extra.end());
  const auto eq = verify_star_distances(E, cover, xs);
  const auto cov = check_coverage(E, cover, xs);

  Json report;
  report["intervals"] = cover.intervals.size();
  report["r_cov"] = cover.r_cov;
  report["d_lo"] = cover.d_lo;
  report["expansion"] = cover.expansion;
  report["star_distances"] = to_json(eq);
  report["coverage"] = {{"sampled", cov.sampled}, {"max_overlap", cov.max_overlap}, {"uncovered", cov.uncovered}};

  auto csv = csv_stream();
  write_cover_csv(csv, cover);
  JobResult r;
  r.files = {{"cover.csv", csv.str()}, {"cover_report.json", dump(report)}};
  const bool ok = eq.holds && !eq.touches_E && cov.max_overlap <= 3 && cov.uncovered == 0;
  r.exit_code = ok ? kPass : kInconclusive;
  r.summary = std::to_string(cover.intervals.size()) + " intervals" + (ok ? "" : " (geometry check failed)");
  return r;
}

JobResult run_job(const std::string& command, const JobConfig& cfg) {
  try {
    if (!cfg.command.empty() && cfg.command != command)
      throw Error(ErrorKind::Schema, "config is for '" + cfg.command + "', not '" + command + "'");
    if (command == "classify") return cmd_classify(cfg);
    if (command == "matrix") return cmd_matrix(cfg);
    if (command == "extend") return cmd_extend(cfg);
    if (command == "cover-dump") return cmd_cover_dump(cfg);
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
  } catch (const Error& e) {
    return JobResult{kError, {}, e.what()};
  } catch (const Json::exception& e) {
    return JobResult{kError, {}, std::string("Schema: ") + e.what()};
  }
}

void write_outputs(const fs::path& dir, const JobResult& r) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  for (const auto& [name, content] : r.files) {
    const fs::path tmp = dir / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) {
      for (const auto& s : staged) fs::remove(s.first);
      fs::remove(tmp);
      throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    }
    staged.emplace_back(tmp, dir / name);
  }
  for (const auto& [tmp, dst] : staged) fs::rename(tmp, dst);
}

}  // namespace ultrajet::cli
