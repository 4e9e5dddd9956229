#include "torsionshape/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <numbers>
#include <optional>

#include "torsionshape/error.hpp"
#include "torsionshape/io.hpp"
#include "torsionshape/kernels.hpp"
#include "torsionshape/optimizer.hpp"
#include "torsionshape/oracle.hpp"
#include "torsionshape/verify.hpp"

namespace tshape::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  std::string name;
  std::optional<double> tol;
  double t = 1.37;  // scaling_laws only
};

struct InitSpec {
  std::string type = "sublevel";
  double level = 1.0;
  double radius = 1.0;
  Vec2 center;
  Vec2 semi{1.0, 1.0};
  std::string path;
};

struct RunConfig {
  json raw;
  std::optional<Weight> weight;
  std::optional<GridSpec> grid;
  InitSpec init;
  OptimizerParams optimizer;
  std::vector<CheckSpec> checks;
  std::string seed_label;
};

const std::vector<std::string> kCheckNames = {"basic",       "starshaped",   "convex",   "symmetry_x1",
                                              "symmetry_x2", "radial_ball", "sandwich", "scaling_laws"};

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

void apply_override(json& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + kv + "' is not KEY=VALUE");
  std::string pointer;
  std::stringstream ss(kv.substr(0, eq));
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("override key '" + kv.substr(0, eq) + "' has an empty segment");
    pointer += "/" + part;
  }
  try {
    cfg[json::json_pointer(pointer)] = parse_value(kv.substr(eq + 1));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("override '") + kv + "': " + e.what());
  }
}

Vec2 to_vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

InitSpec parse_init(const json& j) {
  InitSpec s;
  if (j.is_null()) return s;
  s.type = j.value("type", s.type);
  s.level = j.value("level", s.level);
  s.radius = j.value("radius", s.radius);
  if (j.contains("center")) s.center = to_vec(j.at("center"));
  if (j.contains("semi")) s.semi = to_vec(j.at("semi"));
  s.path = j.value("path", std::string());
  if (s.type != "sublevel" && s.type != "ball" && s.type != "ellipse" && s.type != "csv")
    throw ConfigError("init.type must be sublevel, ball, ellipse or csv");
  if (s.type == "csv" && s.path.empty()) throw ConfigError("init.path is required for csv init");
  if (!(s.level > 0.0) || !(s.radius > 0.0) || !(s.semi.x > 0.0) || !(s.semi.y > 0.0))
    throw ConfigError("init sizes must be positive");
  return s;
}

std::vector<CheckSpec> parse_checks(const json& j) {
  std::vector<CheckSpec> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ConfigError("checks must be an array");
  for (const auto& c : j) {
    CheckSpec s;
    if (c.is_string()) {
      s.name = c.get<std::string>();
    } else {
      s.name = c.at("name").get<std::string>();
      if (c.contains("tol")) s.tol = c.at("tol").get<double>();
      s.t = c.value("t", s.t);
    }
    if (std::find(kCheckNames.begin(), kCheckNames.end(), s.name) == kCheckNames.end())
      throw ConfigError("unknown check '" + s.name + "'");
    out.push_back(s);
  }
  return out;
}

RunConfig parse_config(json raw) {
  RunConfig c;
  try {
    if (!raw.is_object()) throw ConfigError("config must be a JSON object");
    if (raw.contains("weight")) c.weight = Weight::from_json(raw.at("weight"));
    if (raw.contains("grid")) c.grid = GridSpec::from_json(raw.at("grid"));
    c.init = parse_init(raw.value("init", json()));
    c.optimizer = OptimizerParams::from_json(raw.value("optimizer", json::object()));
    c.checks = parse_checks(raw.value("checks", json()));
    c.seed_label = raw.value("seed_label", std::string());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.raw = std::move(raw);
  return c;
}

const Weight& need_weight(const RunConfig& c) {
  if (!c.weight) throw ConfigError("config needs a weight");
  return *c.weight;
}

const GridSpec& need_grid(const RunConfig& c) {
  if (!c.grid) throw ConfigError("config needs a grid");
  return *c.grid;
}

Domain initial_domain(const RunConfig& c, const Weight& w) {
  const GridSpec& g = need_grid(c);
  if (c.init.type == "ball") return build_domain(g, seeds::ball(c.init.center, c.init.radius));
  if (c.init.type == "ellipse") return build_domain(g, seeds::ellipse(c.init.center, c.init.semi.x, c.init.semi.y));
  if (c.init.type == "csv") return io::load_domain_csv(c.init.path);
  return build_domain(g, seeds::sublevel(w, c.init.level));
}

std::vector<CheckReport> run_checks(const std::vector<CheckSpec>& specs, const Domain& d,
                                    const std::optional<Weight>& w) {
  const double h = d.h();
  std::vector<CheckReport> out;
  for (const auto& s : specs) {
    const auto tol = [&](double def) { return s.tol.value_or(def); };
    if (s.name == "basic") {
      out.push_back(check_basic(d));
    } else if (s.name == "starshaped") {
      out.push_back(check_starshaped(d, 720, tol(2.0 * h)));
    } else if (s.name == "convex") {
      out.push_back(check_convex(d, tol(2.0 * h)));
    } else if (s.name == "symmetry_x1") {
      out.push_back(check_symmetry(d, 0, tol(2.0 * h)));
    } else if (s.name == "symmetry_x2") {
      out.push_back(check_symmetry(d, 1, tol(2.0 * h)));
    } else if (s.name == "radial_ball") {
      out.push_back(check_radial_ball(d, tol(3.0 * h)));
    } else if (s.name == "sandwich") {
      if (!w) throw ConfigError("sandwich check needs a weight");
      out.push_back(check_sandwich(d, *w, tol(2e-2)));
    } else if (s.name == "scaling_laws") {
      if (!w) throw ConfigError("scaling_laws check needs a weight");
      out.push_back(check_scaling_laws(d, *w, s.t, tol(2e-2)));
    }
  }
  return out;
}

json checks_json(const std::vector<CheckReport>& reps, bool& all_pass) {
  json arr = json::array();
  all_pass = true;
  for (const auto& r : reps) {
    arr.push_back(r.to_json());
    all_pass = all_pass && r.pass;
  }
  return arr;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double num(const json& j, const char* key, double def) {
  try {
    return j.value(key, def);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  bool quiet = false;
  std::ostream& out;
  std::ostream& err;
};

void write_json(const fs::path& p, const json& j) { io::write_atomic(p, j.dump(2) + "\n"); }

int cmd_solve(Context& ctx) {
  const Weight& w = need_weight(ctx.cfg);
  need_grid(ctx.cfg);
  const Domain init = initial_domain(ctx.cfg, w);
  std::string trace;
  const auto observer = [&](const IterationRecord& r) {
    trace += to_json(r).dump() + "\n";
    if (!ctx.quiet) {
      char line[160];
      std::snprintf(line, sizeof line, "iter %4d  obj %.8e  mu %+.5f  res %.3e  dt %.3e\n", r.iter, r.objective,
                    r.mu, r.residual_sup, r.dt);
      ctx.err << line;
    }
  };
  const OptimizationTrace tr = optimize(w, init, ctx.cfg.optimizer, observer);
  const auto reps = run_checks(ctx.cfg.checks, tr.final_domain, w);
  bool pass = true;
  json report{{"schema", 1},
              {"timestamp", timestamp()},
              {"seed_label", ctx.cfg.seed_label},
              {"weight", w.to_json()},
              {"grid", tr.final_domain.grid().to_json()},
              {"optimizer", ctx.cfg.optimizer.to_json()},
              {"termination", to_string(tr.reason)},
              {"iterations", tr.records.size()},
              {"J", tr.final_report.J},
              {"phi", tr.final_report.phi},
              {"residual_sup", tr.final_report.residual_sup},
              {"residual_l2", tr.final_report.residual_l2},
              {"objective", tr.final_report.objective},
              {"starved_samples", tr.final_report.starved_samples},
              {"mu", tr.final_mu},
              {"rescale_t", tr.final_t},
              {"volume", volume(tr.final_domain)}};
  report["checks"] = checks_json(reps, pass);
  report["pass"] = pass;
  io::write_atomic(ctx.out_dir / "trace.jsonl", trace);
  io::write_atomic(ctx.out_dir / "domain.csv", io::grid_csv(tr.final_domain.ls()));
  io::write_atomic(ctx.out_dir / "field.csv", io::grid_csv(tr.final_field.values));
  io::write_atomic(ctx.out_dir / "boundary.csv", io::boundary_csv(boundary_samples(tr.final_domain)));
  write_json(ctx.out_dir / "report.json", report);
  if (!ctx.quiet) ctx.out << "solve: " << to_string(tr.reason) << ", residual_sup " << tr.final_report.residual_sup
                          << (pass ? ", checks pass\n" : ", checks FAILED\n");
  return pass ? kExitPass : kExitChecksFailed;
}

int cmd_oracle(Context& ctx) {
  const json o = ctx.cfg.raw.value("oracle", json::object());
  const double k = num(o, "k", 0.5), alpha = num(o, "alpha", 2.0), eps = num(o, "eps", 0.1);
  const int n = static_cast<int>(num(o, "N", 2.0));
  const json rep = oracle::report(k, alpha, n, eps);
  write_json(ctx.out_dir / "oracle.json", rep);
  if (!ctx.quiet) ctx.out << rep.dump(2) << "\n";
  return kExitPass;
}

int cmd_verify(Context& ctx) {
  const json v = ctx.cfg.raw.value("verify", json::object());
  if (!v.contains("domain") || !v.at("domain").is_string()) throw ConfigError("verify.domain path is required");
  if (ctx.cfg.checks.empty()) throw ConfigError("verify needs a non-empty checks list");
  const Domain d = io::load_domain_csv(v.at("domain").get<std::string>());
  const auto reps = run_checks(ctx.cfg.checks, d, ctx.cfg.weight);
  bool pass = true;
  json rep{{"schema", 1}, {"timestamp", timestamp()}, {"seed_label", ctx.cfg.seed_label}};
  rep["checks"] = checks_json(reps, pass);
  rep["pass"] = pass;
  write_json(ctx.out_dir / "verify.json", rep);
  if (!ctx.quiet) {
    for (const auto& r : reps)
      ctx.out << (r.pass ? "PASS " : "FAIL ") << r.name << " measured=" << r.measured << " tol=" << r.tol << "\n";
  }
  return pass ? kExitPass : kExitChecksFailed;
}

int cmd_derivcheck(Context& ctx) {
  const Weight& w = need_weight(ctx.cfg);
  const GridSpec& g = need_grid(ctx.cfg);
  const json dc = ctx.cfg.raw.value("derivcheck", json::object());
  std::vector<double> radii{0.75, 1.0, 1.25};
  try {
    radii = dc.value("radii", radii);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  const double delta = num(dc, "delta", 1e-2), tol = num(dc, "tol", 2e-2);
  if (!(delta > 0.0) || radii.empty()) throw ConfigError("derivcheck needs delta > 0 and radii");
  json rows = json::array();
  bool pass = true;
  for (double r : radii) {
    const Domain b = build_domain(g, seeds::ball({}, r));
    const auto grads = boundary_gradient(solve_torsion(b));
    const ShapeDerivative sd = shape_derivative(grads, w, std::vector<double>(grads.size(), 1.0));
    const Domain bp = build_domain(g, seeds::ball({}, r + delta));
    const Domain bm = build_domain(g, seeds::ball({}, r - delta));
    const double fd_j = (energy_J(solve_torsion(bp)) - energy_J(solve_torsion(bm))) / (2.0 * delta);
    const double fd_p = (phi_constraint(w, bp) - phi_constraint(w, bm)) / (2.0 * delta);
    const double ej = std::abs(sd.dJ - fd_j) / std::abs(fd_j);
    const double ep = std::abs(sd.dphi - fd_p) / std::abs(fd_p);
    const bool ok = ej <= tol && ep <= tol;
    pass = pass && ok;
    rows.push_back({{"radius", r}, {"dJ", sd.dJ}, {"dJ_fd", fd_j}, {"dJ_rel_err", ej}, {"dphi", sd.dphi},
                    {"dphi_fd", fd_p}, {"dphi_rel_err", ep}, {"pass", ok}});
  }
  json rep{{"schema", 1}, {"timestamp", timestamp()}, {"delta", delta}, {"tol", tol}, {"rows", rows}, {"pass", pass}};
  write_json(ctx.out_dir / "derivcheck.json", rep);
  if (!ctx.quiet) ctx.out << rows.dump(2) << "\n";
  return pass ? kExitPass : kExitChecksFailed;
}

// Sup-band perturbation k (1 + eps/(1+eps) cos 2 theta): its extremes are
// k/(1+eps) and k(1+2eps)/(1+eps) <= k/(1-eps).
Weight sweep_weight(double k, double alpha, double eps) {
  return Weight(alpha, FourierProfile{{k, 0.0, k * eps / (1.0 + eps)}, {0.0, 0.0, 0.0}});
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

int cmd_sweep(Context& ctx) {
  const GridSpec& g = need_grid(ctx.cfg);
  const json sw = ctx.cfg.raw.value("sweep", json::object());
  const double k = num(sw, "k", 0.5), alpha = num(sw, "alpha", 2.0);
  const double slope_tol = num(sw, "slope_tol", 0.15);
  const double bracket_cells = num(sw, "bracket_cells", 3.0);
  std::vector<double> eps{0.02, 0.05, 0.1};
  try {
    eps = sw.value("eps", eps);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (eps.empty()) throw ConfigError("sweep.eps must be non-empty");
  if (!(alpha > 1.0)) throw ConfigError("sweep needs alpha > 1");
  const double h = g.h();
  std::string csv = "eps,r_oracle,R_oracle,r_measured,R_measured\n";
  std::vector<double> widths;
  json rows = json::array();
  bool bracket_ok = true;
  for (double e : eps) {
    const Weight w = sweep_weight(k, alpha, e);
    const Domain init = build_domain(g, seeds::sublevel(w, 1.0));
    const auto tr = optimize(w, init, ctx.cfg.optimizer);
    const auto radii = ray_radii(tr.final_domain, 720);
    const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
    const auto o = oracle::stability_radii(k, alpha, 2, e, oracle::StabilityMode::Sup);
    const bool ok = *lo >= o.r - bracket_cells * h && *hi <= o.R + bracket_cells * h;
    bracket_ok = bracket_ok && ok;
    widths.push_back(*hi - *lo);
    char line[160];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", e, o.r, o.R, *lo, *hi);
    csv += line;
    rows.push_back({{"eps", e}, {"r_oracle", o.r}, {"R_oracle", o.R}, {"r_measured", *lo}, {"R_measured", *hi},
                    {"termination", to_string(tr.reason)}, {"residual_sup", tr.final_report.residual_sup},
                    {"in_bracket", ok}});
    if (!ctx.quiet) ctx.err << "sweep eps " << e << ": r " << *lo << " R " << *hi << "\n";
  }
  const double measured = eps.size() > 1 ? fit_slope(eps, widths) : widths.front() / eps.front();
  const double predicted = oracle::stability_slope(k, alpha, 2);
  const double slope_err = std::abs(measured - predicted) / predicted;
  const bool slope_ok = slope_err <= slope_tol;
  char footer[160];
  std::snprintf(footer, sizeof footer, "# slope_measured=%.17g,slope_predicted=%.17g\n", measured, predicted);
  csv += footer;
  json rep{{"schema", 1},         {"timestamp", timestamp()}, {"rows", rows},
           {"slope_measured", measured}, {"slope_predicted", predicted}, {"slope_rel_err", slope_err},
           {"bracket_pass", bracket_ok}, {"slope_pass", slope_ok},        {"pass", bracket_ok && slope_ok}};
  io::write_atomic(ctx.out_dir / "sweep.csv", csv);
  write_json(ctx.out_dir / "sweep.json", rep);
  if (!ctx.quiet) ctx.out << csv;
  return bracket_ok && slope_ok ? kExitPass : kExitChecksFailed;
}

void write_error(const fs::path& dir, std::string_view code, const std::string& message, const std::string& cmd) {
  try {
    write_json(dir / "error.json",
               {{"schema", 1}, {"command", cmd}, {"error", std::string(code)}, {"message", message}});
  } catch (...) {
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"torsionshape"};
  std::string command, config_path, out_dir;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("command", command, "solve, oracle, verify, derivcheck or sweep")
      ->required()
      ->check(CLI::IsMember({"solve", "oracle", "verify", "derivcheck", "sweep"}));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--override", overrides, "KEY=VALUE, dot path into the config")->take_all();
  app.add_flag("--quiet", quiet, "suppress progress output");
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (const char* env = std::getenv("TORSIONSHAPE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) kernels::set_max_threads(n);
  }

  std::optional<Context> ctx;
  try {
    json raw = json::object();
    if (!config_path.empty()) {
      std::string text;
      try {
        text = io::read_file(config_path);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
      try {
        raw = json::parse(text);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
    for (const auto& kv : overrides) apply_override(raw, kv);
    RunConfig cfg = parse_config(std::move(raw));
    fs::path dir = out_dir.empty() ? fs::path(cfg.raw.value("output_dir", std::string("."))) : fs::path(out_dir);
    ctx.emplace(Context{std::move(cfg), dir, quiet, out, err});
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::error_code ec;
    fs::create_directories(ctx->out_dir, ec);
    if (ec) throw ConfigError("cannot create " + ctx->out_dir.string() + ": " + ec.message());
    if (command == "solve") return cmd_solve(*ctx);
    if (command == "oracle") return cmd_oracle(*ctx);
    if (command == "verify") return cmd_verify(*ctx);
    if (command == "derivcheck") return cmd_derivcheck(*ctx);
    return cmd_sweep(*ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    write_error(ctx->out_dir, to_string(e.code()), e.what(), command);
    return kExitNumerical;
  }
}

}  // namespace tshape::cli
