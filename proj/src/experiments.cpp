#include "piezolab/experiments.hpp"

#include <json.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include "piezolab/fdsolver.hpp"
#include "piezolab/inequalities.hpp"
#include "piezolab/modal.hpp"
#include "piezolab/numtheory.hpp"
#include "piezolab/spectrum.hpp"

namespace piezolab {

using json = nlohmann::ordered_json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Keys whose values are lists by nature and never expand into sweeps.
const std::set<std::string> kListKeys = {"exponents", "f", "x", "init", "window"};

std::string header(const RunContext& ctx) {
  return "# manifest=" + ctx.manifest_name + " seed=" + std::to_string(ctx.seed) + "\n";
}

json json_real(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

std::size_t positive_size(const Config& c, const std::string& key, long long def) {
  const long long v = c.get_int(key, def);
  if (v < 1) throw ConfigError("key '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  std::string t;
  while (in >> t) w.push_back(t);
  return w;
}

GridState read_grid_file(const std::string& path, double L) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open initial-data file '" + path + "'");
  std::string line;
  std::vector<std::array<double, 5>> rows;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
      continue;
    std::array<double, 5> r{};
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ss, cell, ','))
        throw ConfigError("initial-data file needs columns x,v,p,v_dot,p_dot");
      r[static_cast<std::size_t>(i)] = std::stod(cell);
    }
    rows.push_back(r);
  }
  if (rows.size() < 3) throw ConfigError("initial-data file has fewer than 3 rows");
  GridState g = GridState::zeros(rows.size() - 1, L);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i][0] - g.x(i)) > 1e-9 * L)
      throw ConfigError("initial-data grid must be uniform on [0, L]");
    g.v[i] = rows[i][1];
    g.p[i] = rows[i][2];
    g.v_dot[i] = rows[i][3];
    g.p_dot[i] = rows[i][4];
  }
  return g;
}

GridState initial_grid(const Config& c, const DerivedConstants& dc,
                       std::size_t cells, std::uint64_t seed,
                       const std::string& def_init) {
  const auto w = words(c.get_string("init", def_init));
  if (w.empty()) throw ConfigError("key 'init' is empty");
  if (w[0] == "mode") {
    if (w.size() != 3) throw ConfigError("init mode needs: mode k j");
    const int k = std::stoi(w[1]);
    const auto j = static_cast<std::size_t>(std::stoul(w[2]));
    if ((k != 1 && k != 2) || j == 0) throw ConfigError("init mode: bad k or j");
    ModalState s = ModalState::zeros(dc, j);
    s.cc(k, j) = 1.0;
    s.dd(k, j) = 1.0;
    return sample_to_grid(s, cells);
  }
  if (w[0] == "random-modal") {
    if (w.size() < 2 || w.size() > 3)
      throw ConfigError("init random-modal needs: random-modal N [seed]");
    const auto N = static_cast<std::size_t>(std::stoul(w[1]));
    const std::uint64_t s = w.size() == 3 ? std::stoull(w[2]) : seed;
    return sample_to_grid(
        random_state(dc, N, c.get_double("theta_gen", 2.0), s, 0, true), cells);
  }
  if (w[0] == "file") {
    if (w.size() != 2) throw ConfigError("init file needs: file PATH");
    return read_grid_file(w[1], dc.L);
  }
  throw ConfigError("unknown init kind '" + w[0] + "'");
}

SimulationOptions sim_options(const Config& c, const MaterialParams& p,
                              bool damped_default, double T_default) {
  SimulationOptions o;
  o.T = c.get_double("T", T_default);
  o.dx = c.get_double("dx", p.L / 256.0);
  o.cfl = c.get_double("cfl", 0.9);
  o.damped = c.get_bool("damped", damped_default);
  o.sample_dt = c.get_double("sample_dt", 0.1);
  if (!(o.T > 0.0)) throw ConfigError("key 'T' must be > 0");
  if (!(o.dx > 0.0)) throw ConfigError("key 'dx' must be > 0");
  return o;
}

std::string trace_csv(const EnergyTrace& tr, const RunContext& ctx) {
  std::string s = header(ctx) + "t,E,p_dot_L\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    s += format_real(tr.times[i]) + "," + format_real(tr.energies[i]) + "," +
         format_real(tr.p_dot_L[i]) + "\n";
  return s;
}

std::vector<Artifact> exp_spectrum(const Config& c, const RunContext& ctx) {
  const auto dc = constants_from(c);
  const auto N = positive_size(c, "modes", 10);
  std::string s = header(ctx) + "branch,index,sigma,frequency\n";
  for (const auto& m : frequencies(dc, N))
    s += std::to_string(m.branch) + "," + std::to_string(m.index) + "," +
         format_real(m.sigma) + "," + format_real(m.frequency) + "\n";
  return {{"spectrum.csv", s}};
}

std::vector<Artifact> exp_gaps(const Config& c, const RunContext& ctx) {
  const auto dc = constants_from(c);
  const auto N = positive_size(c, "modes", 100);
  if (N < 2) throw ConfigError("gaps needs modes >= 2");
  const auto g = min_gap(dc, N, c.get_double("alpha", 1.0), c.get_double("tau_prime", 0.0));
  std::string s = header(ctx) + "N,min_gap,branch_a,index_a,branch_b,index_b,C_alpha_fit\n";
  s += std::to_string(g.N) + "," + format_real(g.min_gap) + "," +
       std::to_string(g.argmin_pair.first.branch) + "," +
       std::to_string(g.argmin_pair.first.index) + "," +
       std::to_string(g.argmin_pair.second.branch) + "," +
       std::to_string(g.argmin_pair.second.index) + "," +
       format_real(g.fitted_C_alpha) + "\n";
  return {{"gaps.csv", s}};
}

std::vector<Artifact> exp_observe(const Config& c, const RunContext& ctx) {
  const auto dc = constants_from(c);
  const auto N = positive_size(c, "modes", 50);
  const auto M = positive_size(c, "ensemble", 200);
  const double T = c.get_double("T", 2.0 * dc.L * (dc.zeta1 + dc.zeta2) + 0.1);
  const double theta = c.get_double("theta", -1.0);
  if (!(T > 0.0)) throw ConfigError("key 'T' must be > 0");
  auto q = ensemble_quotients(dc, N, M, T, theta, c.get_double("theta_gen", 0.0),
                              ctx.seed, ctx.jobs);
  std::string s = header(ctx) + "state_id,quotient\n";
  for (std::size_t i = 0; i < q.size(); ++i)
    s += std::to_string(i) + "," + format_real(q[i]) + "\n";
  std::sort(q.begin(), q.end());
  const double med = q.size() % 2 ? q[q.size() / 2]
                                  : 0.5 * (q[q.size() / 2 - 1] + q[q.size() / 2]);
  s += "min," + format_real(q.front()) + "\n";
  s += "median," + format_real(med) + "\n";
  return {{"observe.csv", s}};
}

std::vector<Artifact> exp_simulate(const Config& c, const RunContext& ctx) {
  const auto p = params_from(c);
  const auto dc = derive_constants(p);
  const auto o = sim_options(c, p, true, 10.0);
  const auto g = initial_grid(c, dc, cells_for_dx(p.L, o.dx), ctx.seed, "mode 1 1");
  const auto r = simulate(p, g, o);
  return {{"trace.csv", trace_csv(r.trace, ctx)}};
}

std::vector<Artifact> exp_decay(const Config& c, const RunContext& ctx) {
  const auto p = params_from(c);
  const auto dc = derive_constants(p);
  double ta = c.get_double("window_start", 20.0);
  double tb = c.get_double("window_end", 200.0);
  if (auto w = c.get("window")) {
    const auto v = c.get_list("window");
    if (v.size() != 2) throw ConfigError("key 'window' needs two values");
    ta = v[0];
    tb = v[1];
  }
  if (!(tb > ta && ta >= 0.0)) throw ConfigError("decay window must satisfy 0 <= t_a < t_b");
  auto o = sim_options(c, p, true, tb);
  if (!o.damped) throw ConfigError("decay runs are damped");
  const auto g = initial_grid(c, dc, cells_for_dx(p.L, o.dx), ctx.seed, "random-modal 20");
  const auto r = simulate(p, g, o);
  const auto fit = decay_fit(r.trace, ta, tb);
  json j;
  j["manifest"] = ctx.manifest_name;
  j["seed"] = ctx.seed;
  j["exponent"] = json_real(fit.exponent);
  j["log_amplitude"] = json_real(fit.log_amplitude);
  j["rate"] = json_real(fit.rate);
  j["residuals"] = {{"polynomial", fit.residual_polynomial},
                    {"exponential", fit.residual_exponential}};
  j["semilog_r2"] = json_real(fit.semilog_r2);
  j["window"] = {fit.t_a, fit.t_b};
  j["points"] = fit.points;
  j["model_choice"] = fit.model_choice;
  j["dt"] = r.dt;
  j["cells"] = r.cells;
  j["max_identity_residual"] = r.max_identity_residual;
  return {{"decay.json", j.dump(2) + "\n"}, {"decay_trace.csv", trace_csv(r.trace, ctx)}};
}

json quotients_json(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::vector<Artifact> exp_diophantine(const Config& c, const RunContext& ctx) {
  const auto precision = positive_size(c, "precision", 256);
  RealRep x;
  if (c.has("liouville")) {
    x = liouville_value(static_cast<unsigned>(positive_size(c, "liouville", 5)),
                        static_cast<unsigned>(positive_size(c, "base", 10)));
  } else {
    auto v = c.get("x");
    if (!v) throw ConfigError("missing key 'x'");
    try {
      x = parse_real(*v, precision);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'x': ") + e.what());
    }
  }
  const auto depth = positive_size(c, "depth", 50);
  const auto qmax = static_cast<std::uint64_t>(c.get_int("qmax", 0));
  const auto r = classify(x, depth, qmax);
  json j;
  j["manifest"] = ctx.manifest_name;
  j["seed"] = ctx.seed;
  j["input"] = x.kind == RealKind::decimal && x.digits > 64
                   ? x.to_string().substr(0, 66) + "..."
                   : x.to_string();
  j["kind"] = x.kind == RealKind::rational    ? "rational"
              : x.kind == RealKind::quadratic ? "quadratic"
                                               : "decimal";
  j["partial_quotients"] = quotients_json(r.cf.quotients);
  json conv = json::array();
  for (const auto& cv : r.cf.convergents) conv.push_back({cv.p.str(), cv.q.str()});
  j["convergents"] = conv;
  json qual = json::array(), lq = json::array();
  for (std::size_t i = 0; i < r.quality.size(); ++i) {
    qual.push_back(json_real(r.quality[i]));
    lq.push_back(json_real(r.log10_quality[i]));
  }
  j["quality"] = qual;
  j["log10_quality"] = lq;
  j["exponent_estimate"] = json_real(r.exponent_estimate);
  j["verdict"] = verdict_name(r.verdict);
  j["heuristic"] = r.heuristic;
  j["confidence"] = {{"depth_reached", r.depth_reached},
                     {"max_quotient", r.max_quotient.str()},
                     {"precision_exhausted", r.cf.precision_exhausted}};
  if (r.cf.period)
    j["period"] = {{"preperiod", *r.cf.preperiod}, {"length", *r.cf.period}};
  if (r.odd) {
    json rec = json::array();
    for (const auto& a : r.odd->records)
      rec.push_back({{"p", a.p.str()}, {"q", a.q.str()}, {"error", json_real(a.error)},
                     {"quality", json_real(a.quality)}});
    j["odd_approximations"] = {
        {"qmax", qmax},
        {"records", rec},
        {"min_quality", json_real(r.odd->best.quality)},
        {"argmin", {r.odd->best.p.str(), r.odd->best.q.str()}},
        {"witness_C", json_real(r.odd->witness_C)}};
  }
  return {{"diophantine.json", j.dump(2) + "\n"}};
}

std::vector<Artifact> exp_check(const Config& c, const RunContext& ctx) {
  const std::string mode = c.get_string("mode", "");
  json j;
  j["manifest"] = ctx.manifest_name;
  j["seed"] = ctx.seed;
  j["mode"] = mode;
  if (mode == "gram") {
    const auto s = c.get_list("exponents");
    if (s.empty()) throw ConfigError("missing key 'exponents'");
    const double T = c.get_double("T", 10.0);
    const double tp = c.get_double("tau_prime", 0.5);
    const bool dd = c.get_bool("divided", false);
    ExponentSet e;
    try {
      e = ExponentSet::make(s, tp);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
    const auto g = gram_condition(e, T, dd);
    j["inputs"] = {{"exponents", s}, {"T", T}, {"tau_prime", tp}, {"divided", dd}};
    json ch = json::array();
    for (const auto& [a, b] : e.chains) ch.push_back({a, b});
    j["chains"] = ch;
    j["condition"] = json_real(g.condition);
    j["lambda_min"] = g.lambda_min;
    j["lambda_max"] = g.lambda_max;
    j["verdict"] = std::isfinite(g.condition) ? "finite" : "singular";
  } else if (mode == "ammari") {
    const double C = c.get_double("C", 1.0), alpha = c.get_double("alpha", 0.0);
    const double E0 = c.get_double("E0", 1.0);
    const auto K = positive_size(c, "K", 10000);
    const auto r = ammari_check(C, alpha, E0, K);
    j["inputs"] = {{"C", C}, {"alpha", alpha}, {"E0", E0}, {"K", K}};
    j["M"] = r.M;
    j["argmax"] = r.argmax;
    j["E1"] = r.E.size() > 1 ? r.E[1] : r.E[0];
    j["tail_product"] = r.tail_product;
    j["eventually_nonincreasing"] = r.eventually_nonincreasing;
    j["verdict"] = r.eventually_nonincreasing ? "bounded" : "inconclusive";
  } else if (mode == "interpolation") {
    const auto f = c.get_list("f");
    if (f.empty()) throw ConfigError("missing key 'f'");
    const double eps = c.get_double("epsilon", 0.0);
    const auto r = interpolation_check(f, eps);
    j["inputs"] = {{"f", f}, {"epsilon", eps}};
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["verdict"] = r.holds ? "holds" : "violated";
  } else {
    throw ConfigError("check needs mode gram | ammari | interpolation");
  }
  return {{"check.json", j.dump(2) + "\n"}};
}

std::string with_suffix(const std::string& name, const std::string& suffix) {
  const auto dot = name.rfind('.');
  if (dot == std::string::npos) return name + suffix;
  return name.substr(0, dot) + suffix + name.substr(dot);
}

json config_echo(const Config& c) {
  json j;
  for (const auto& [k, v] : c.values) j[k] = v;
  if (c.has_synthetic) {
    json s;
    for (const auto& [k, v] : c.synthetic) s[k] = v;
    j["synthetic"] = s;
  }
  return j;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "spectrum", "gaps", "simulate", "observe", "decay", "diophantine", "check"};
  return names;
}

std::vector<Artifact> run_experiment(const std::string& experiment,
                                     const Config& cfg, const RunContext& ctx) {
  if (experiment == "spectrum") return exp_spectrum(cfg, ctx);
  if (experiment == "gaps") return exp_gaps(cfg, ctx);
  if (experiment == "observe") return exp_observe(cfg, ctx);
  if (experiment == "simulate") return exp_simulate(cfg, ctx);
  if (experiment == "decay") return exp_decay(cfg, ctx);
  if (experiment == "diophantine") return exp_diophantine(cfg, ctx);
  if (experiment == "check") return exp_check(cfg, ctx);
  throw ConfigError("unknown experiment '" + experiment + "'");
}

std::vector<Config> expand_sweep(const Config& cfg) {
  std::vector<Config> runs{cfg};
  for (const auto& [key, value] : cfg.values) {
    if (kListKeys.count(key)) continue;
    const auto items = split_list(value);
    if (items.size() < 2) continue;
    std::vector<Config> next;
    for (const auto& r : runs)
      for (const auto& item : items) {
        Config c = r;
        c.set(key, item);
        next.push_back(c);
      }
    runs = std::move(next);
  }
  return runs;
}

int run_cli(const std::string& experiment, const Config& cfg,
            const std::optional<std::string>& out_dir, std::uint64_t seed,
            unsigned jobs, std::ostream& out, std::ostream& err) {
  try {
    const auto runs = expand_sweep(cfg);
    if (!out_dir && runs.size() > 1)
      throw ConfigError("a sweep needs --out DIR for its per-run files");
    if (out_dir) std::filesystem::create_directories(*out_dir);

    struct Done {
      std::vector<Artifact> files;
      double seconds = 0.0;
    };
    auto one = [&](std::size_t r) {
      RunContext ctx;
      ctx.seed = seed;
      ctx.jobs = runs.size() > 1 ? 1 : jobs;
      const std::string suffix = runs.size() > 1 ? "_run" + std::to_string(r) : "";
      ctx.manifest_name = out_dir ? "manifest" + suffix + ".json" : "stderr";
      const auto t0 = std::chrono::steady_clock::now();
      Done d;
      d.files = run_experiment(experiment, runs[r], ctx);
      for (auto& a : d.files) a.name = with_suffix(a.name, suffix);
      d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return d;
    };

    std::vector<Done> done(runs.size());
    const unsigned width = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(runs.size())));
    for (std::size_t base = 0; base < runs.size(); base += width) {
      std::vector<std::future<Done>> fut;
      for (std::size_t r = base; r < std::min(runs.size(), base + width); ++r)
        fut.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, r));
      for (std::size_t i = 0; i < fut.size(); ++i) done[base + i] = fut[i].get();
    }

    for (std::size_t r = 0; r < runs.size(); ++r) {
      json m;
      m["tool"] = "piezolab";
      m["version"] = kVersion;
      m["experiment"] = experiment;
      m["run_index"] = r;
      m["runs"] = runs.size();
      m["seed"] = seed;
      m["jobs"] = jobs;
      m["config_source"] = cfg.source;
      m["config"] = config_echo(runs[r]);
      json outs = json::array();
      for (const auto& a : done[r].files) outs.push_back(a.name);
      m["outputs"] = outs;
      m["timings"] = {{"wall_seconds", done[r].seconds}};
      m["build"] = {{"compiler", __VERSION__},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                  std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"boost", BOOST_LIB_VERSION}};
      if (out_dir) {
        for (const auto& a : done[r].files) {
          std::ofstream f(std::filesystem::path(*out_dir) / a.name, std::ios::binary);
          f << a.content;
          if (!f) throw std::runtime_error("cannot write " + a.name);
        }
        const std::string mname = runs.size() > 1 ? "manifest_run" + std::to_string(r) + ".json"
                                                  : "manifest.json";
        std::ofstream f(std::filesystem::path(*out_dir) / mname, std::ios::binary);
        f << m.dump(2) << "\n";
      } else {
        out << done[r].files.front().content;
        err << m.dump() << "\n";
      }
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalGuard& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalGuard;
  } catch (const PrecisionExhausted& e) {
    err << "numerical guard: precision exhausted: " << e.what() << "\n";
    return kNumericalGuard;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace piezolab
