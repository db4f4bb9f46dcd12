#include "nscv/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nscv/config.hpp"
#include "nscv/errors.hpp"
#include "nscv/frame.hpp"
#include "nscv/harmonic.hpp"
#include "nscv/nlc.hpp"
#include "nscv/norms.hpp"
#include "nscv/solver.hpp"
#include "nscv/util.hpp"

namespace nscv {

namespace {

void emit_error(const std::string& stage, const std::string& message) {
  nlohmann::json j;
  j["stage"] = stage;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

void apply_threads(const std::string& spec) {
  if (spec == "auto" || spec.empty()) {
    set_thread_count(0);
    return;
  }
  int n = 0;
  try {
    n = std::stoi(spec);
  } catch (...) {
    throw ValidationError("cli", "--threads wants an integer or 'auto'");
  }
  if (n < 1) throw ValidationError("cli", "--threads must be >= 1");
  set_thread_count(unsigned(n));
}

InitialData parse_init(const std::string& text) {
  if (text == "beltrami") return InitialData::beltrami();
  if (text == "tg") return InitialData::taylor_green();
  if (text == "gaussian") return InitialData::gaussian_vortex();
  if (text.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(text.substr(7));
    } catch (...) {
      throw ValidationError("cli", "bad seed in --init random:<seed>");
    }
    return InitialData::random_band_limited(seed);
  }
  throw ValidationError(
      "cli", "--init must be one of beltrami, tg, random:<seed>, gaussian");
}

std::string vec_to_field(const Vec3& v) {
  return format_double(v[0]) + ":" + format_double(v[1]) + ":" +
         format_double(v[2]);
}

struct GlobalOpts {
  std::string threads = "auto";
  std::string config_path;
  bool quiet = false;
};

nlohmann::json subcommand_defaults(const GlobalOpts& g, const char* name) {
  if (g.config_path.empty()) return nlohmann::json::object();
  std::ifstream is(g.config_path);
  if (!is)
    throw ValidationError("config", "cannot open config file: " + g.config_path);
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded())
    throw ValidationError("config", "malformed JSON in " + g.config_path);
  if (!j.is_object())
    throw ValidationError("config", "top-level config must be a JSON object");
  if (!j.contains(name)) return nlohmann::json::object();
  return j[name];
}

template <typename T>
void fill_default(const nlohmann::json& j, const char* key, const CLI::Option* opt,
                  T& value) {
  if (opt->count() == 0 && j.contains(key)) value = j[key].get<T>();
}

int run_simulate(const GlobalOpts& g, const CLI::App* app,
                 const std::string& init_s, int n, double L, double dt,
                 double t_end, double every, const std::string& out) {
  nlohmann::json defs = subcommand_defaults(g, "simulate");
  std::string init_str = init_s;
  int N = n;
  double half = L, step_dt = dt, T = t_end, snap_every = every;
  std::string out_dir = out;
  fill_default(defs, "init", app->get_option("--init"), init_str);
  fill_default(defs, "N", app->get_option("--N"), N);
  fill_default(defs, "L", app->get_option("--L"), half);
  fill_default(defs, "dt", app->get_option("--dt"), step_dt);
  fill_default(defs, "T", app->get_option("--T"), T);
  fill_default(defs, "snapshot_every", app->get_option("--snapshot-every"),
               snap_every);
  fill_default(defs, "out", app->get_option("--out"), out_dir);
  if (out_dir.empty())
    throw ValidationError("cli", "simulate needs --out <dir>");

  Grid3 grid = Grid3::make(N, half);
  RunResult result =
      run(grid, parse_init(init_str), 1.0, step_dt, T, snap_every, out_dir);
  if (!result.completed) {
    emit_error("solver", result.error + " (partial series on disk, " +
                             std::to_string(result.paths.size()) +
                             " snapshots)");
    return 3;
  }
  if (!g.quiet)
    std::cout << "wrote " << result.paths.size() << " snapshots to " << out_dir
              << "\n";
  return 0;
}

int run_monitor(const GlobalOpts& g, const CLI::App* app,
                const std::string& series, const std::string& config,
                const std::string& out) {
  nlohmann::json defs = subcommand_defaults(g, "monitor");
  std::string series_dir = series, config_path = config, out_csv = out;
  fill_default(defs, "series", app->get_option("--series"), series_dir);
  fill_default(defs, "config", app->get_option("--config"), config_path);
  fill_default(defs, "out", app->get_option("--out"), out_csv);
  if (series_dir.empty())
    throw ValidationError("ingest", "monitor needs --series <dir>");
  if (out_csv.empty()) throw ValidationError("cli", "monitor needs --out <csv>");

  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry :
       std::filesystem::directory_iterator(series_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".nscv")
      paths.push_back(entry.path().string());
  }
  if (ec)
    throw ValidationError("ingest",
                          "cannot read series directory: " + series_dir);
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    throw ValidationError("ingest",
                          "no .nscv snapshots found in " + series_dir);

  NlcConfig cfg = config_path.empty() ? NlcConfig::defaults()
                                      : nlc_config_from_json_file(config_path);
  MonitorResult result = monitor_run(paths, cfg, g.quiet);
  write_monitor_csv(result, out_csv);
  if (!g.quiet)
    std::cout << "monitored " << result.reports.size() << " snapshots, verdict "
              << (result.verdict ? "satisfied" : "violated") << ", failures "
              << result.failures << "\n";
  return 0;
}

int run_norms(const GlobalOpts& g, const CLI::App* app,
              const std::string& input, const std::string& component,
              const std::string& space, double p, const std::string& phi_path,
              const std::string& balls_s, double lip_radius,
              const std::string& out) {
  nlohmann::json defs = subcommand_defaults(g, "norms");
  std::string in = input, comp = component, space_s = space, phi_p = phi_path,
              balls_str = balls_s, out_csv = out;
  double pp = p, lip_r = lip_radius;
  fill_default(defs, "input", app->get_option("--input"), in);
  fill_default(defs, "component", app->get_option("--component"), comp);
  fill_default(defs, "space", app->get_option("--space"), space_s);
  fill_default(defs, "p", app->get_option("--p"), pp);
  fill_default(defs, "phi", app->get_option("--phi"), phi_p);
  fill_default(defs, "balls", app->get_option("--balls"), balls_str);
  fill_default(defs, "out", app->get_option("--out"), out_csv);
  if (in.empty()) throw ValidationError("cli", "norms needs --input <snapshot>");
  if (out_csv.empty()) throw ValidationError("cli", "norms needs --out <csv>");

  Snapshot snap = read_snapshot(in);
  ScalarField f;
  if (comp == "1" || comp == "2" || comp == "3")
    f = snap.field.comp(comp[0] - '1');
  else if (comp == "|u|")
    f = snap.field.magnitude();
  else
    throw ValidationError("cli", "--component must be 1, 2, 3 or |u|");

  GrowthFunction phi = phi_p.empty() ? make_phi(3, 4.0, 0.5, -0.75, -0.75)
                                     : growth_from_json_file(phi_p);
  BallStrategy strategy = parse_ball_strategy(balls_str);
  const Grid3& grid = f.grid();
  if (strategy.kind == BallStrategy::Kind::Dyadic && strategy.stride <= 0)
    strategy.stride = std::max(1, grid.n / 8);
  std::vector<Ball> balls = sample_balls(grid, strategy);
  std::string label = strategy.describe(grid);

  NormReport rep;
  if (space_s == "campanato")
    rep = campanato_norm(f, pp, phi, balls, label);
  else if (space_s == "pointed")
    rep = pointed_campanato_norm(f, pp, phi, balls, label);
  else if (space_s == "morrey")
    rep = morrey_norm(f, pp, phi, balls, label);
  else if (space_s == "holder")
    rep = holder_norm(f, phi);
  else if (space_s == "lip") {
    rep = NormReport{};
    rep.value = lip_norm_on_ball(f, pp, Ball{{0.0, 0.0, 0.0}, lip_r});
    rep.seminorm = rep.value;
    rep.argmax_ball = Ball{{0.0, 0.0, 0.0}, lip_r};
    rep.family = "lip";
  } else
    throw ValidationError(
        "cli", "--space must be campanato, pointed, morrey, holder or lip");

  std::ofstream os(out_csv, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("cli", "cannot open for writing: " + out_csv);
  os << "space,p,value,pointTerm,argmax_center,argmax_radius\n";
  std::string center = rep.pair_based ? vec_to_field(rep.argmax_x)
                                      : vec_to_field(rep.argmax_ball.center);
  double radius = rep.pair_based
                      ? grid.periodic_distance(rep.argmax_x, rep.argmax_y)
                      : rep.argmax_ball.radius;
  os << space_s << ',' << format_double(pp) << ',' << format_double(rep.value)
     << ',' << format_double(rep.point_term) << ',' << center << ','
     << format_double(radius) << '\n';
  return 0;
}

int run_verify(const GlobalOpts& g, const std::string& what, int n, double L,
               const std::string& out) {
  if (what != "riesz")
    throw ValidationError("cli", "verify supports only: riesz");
  std::vector<VerifyRow> rows = verify_riesz_table(n, L);
  std::ostringstream csv;
  csv << "name,value,threshold,pass\n";
  bool all = true;
  for (const VerifyRow& r : rows) {
    csv << r.name << ',' << format_double(r.value) << ','
        << format_double(r.threshold) << ',' << (r.pass ? 1 : 0) << '\n';
    all = all && r.pass;
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream os(out, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cli", "cannot open for writing: " + out);
    os << csv.str();
  }
  if (!all) {
    emit_error("verify", "one or more Riesz invariants failed");
    return 3;
  }
  if (!g.quiet && !out.empty())
    std::cout << "verified " << rows.size() << " invariants\n";
  return 0;
}

int run_counterexample(const GlobalOpts& g, const CLI::App* app, double lambda,
                       double bump_width, double theta_width, int n, double L,
                       const std::string& out) {
  nlohmann::json defs = subcommand_defaults(g, "counterexample");
  double lam = lambda, bw = bump_width, tw = theta_width, half = L;
  int N = n;
  std::string out_path = out;
  fill_default(defs, "lambda", app->get_option("--lambda"), lam);
  fill_default(defs, "bump_width", app->get_option("--bump-width"), bw);
  fill_default(defs, "theta_width", app->get_option("--theta-width"), tw);
  fill_default(defs, "N", app->get_option("--N"), N);
  fill_default(defs, "L", app->get_option("--L"), half);
  fill_default(defs, "out", app->get_option("--out"), out_path);
  if (out_path.empty())
    throw ValidationError("cli", "counterexample needs --out <snapshot>");

  Grid3 grid = Grid3::make(N, half);
  AngularProfile profile;
  profile.magnitude = 1.0;
  profile.bump_width = bw > 0.0 ? bw : half / 6.0;
  profile.theta_width = tw > 0.0 ? tw : profile.bump_width;
  profile.lambda = lam;
  VectorField3 u = counterexample_field(grid, profile);
  write_snapshot(out_path, u, 0.0, 1.0);
  if (!g.quiet) std::cout << "wrote counterexample field to " << out_path << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"blowup-diagnostic toolkit for 3D incompressible flows"};
  app.require_subcommand(0, 1);

  GlobalOpts global;
  app.add_option("--threads", global.threads, "worker threads (int or auto)");
  app.add_option("--config", global.config_path, "JSON defaults file");
  app.add_flag("--quiet", global.quiet, "suppress progress output");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the spectral solver");
  std::string sim_init = "beltrami", sim_out;
  int sim_n = 32;
  double sim_l = M_PI, sim_dt = 1e-3, sim_T = 1.0, sim_every = 0.0;
  sim->add_option("--init", sim_init, "beltrami | tg | random:<seed> | gaussian");
  sim->add_option("--N", sim_n, "grid points per axis (power of two)");
  sim->add_option("--L", sim_l, "box half-width");
  sim->add_option("--dt", sim_dt, "time step");
  sim->add_option("--T", sim_T, "end time");
  sim->add_option("--snapshot-every", sim_every,
                  "snapshot interval (<= 0: initial and final only)");
  sim->add_option("--out", sim_out, "output directory");

  // monitor
  auto* mon = app.add_subcommand("monitor", "evaluate the collapse criterion");
  std::string mon_series, mon_config, mon_out;
  mon->add_option("--series", mon_series, "directory of .nscv snapshots");
  mon->add_option("--config", mon_config, "NLC config JSON");
  mon->add_option("--out", mon_out, "output CSV");

  // norms
  auto* nrm = app.add_subcommand("norms", "compute a variable-growth norm");
  std::string nrm_input, nrm_comp = "|u|", nrm_space = "campanato",
              nrm_phi, nrm_balls = "dyadic:0", nrm_out;
  double nrm_p = 4.0, nrm_lip_radius = 1.0;
  nrm->add_option("--input", nrm_input, "snapshot file");
  nrm->add_option("--component", nrm_comp, "1 | 2 | 3 | |u|");
  nrm->add_option("--space", nrm_space,
                  "campanato | pointed | morrey | holder | lip");
  nrm->add_option("--p", nrm_p, "integrability exponent (alpha for lip)");
  nrm->add_option("--phi", nrm_phi, "growth-function JSON file");
  nrm->add_option("--balls", nrm_balls, "exhaustive | dyadic:<stride>");
  nrm->add_option("--lip-radius", nrm_lip_radius, "ball radius for --space lip");
  nrm->add_option("--out", nrm_out, "output CSV");

  // verify
  auto* ver = app.add_subcommand("verify", "run operator invariant tables");
  std::string ver_what = "riesz", ver_out;
  int ver_n = 32;
  double ver_l = M_PI;
  ver->add_option("what", ver_what, "invariant table name (riesz)");
  ver->add_option("--N", ver_n, "grid points per axis");
  ver->add_option("--L", ver_l, "box half-width");
  ver->add_option("--out", ver_out, "output CSV (default stdout)");

  // counterexample
  auto* cex = app.add_subcommand("counterexample",
                                 "write a symmetric flow with large curl");
  double cex_lambda = 10.0, cex_bw = 0.0, cex_tw = 0.0, cex_l = M_PI;
  int cex_n = 32;
  std::string cex_out;
  cex->add_option("--lambda", cex_lambda, "curl slope at the origin");
  cex->add_option("--bump-width", cex_bw, "speed bump width (default L/6)");
  cex->add_option("--theta-width", cex_tw, "angle decay width");
  cex->add_option("--N", cex_n, "grid points per axis");
  cex->add_option("--L", cex_l, "box half-width");
  cex->add_option("--out", cex_out, "output snapshot path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ExtrasError& e) {
    std::cerr << app.help();
    emit_error("cli", e.what());
    return 64;
  } catch (const CLI::ParseError& e) {
    emit_error("cli", e.what());
    return 2;
  }

  try {
    apply_threads(global.threads);
    if (sim->parsed())
      return run_simulate(global, sim, sim_init, sim_n, sim_l, sim_dt, sim_T,
                          sim_every, sim_out);
    if (mon->parsed())
      return run_monitor(global, mon, mon_series, mon_config, mon_out);
    if (nrm->parsed())
      return run_norms(global, nrm, nrm_input, nrm_comp, nrm_space, nrm_p,
                       nrm_phi, nrm_balls, nrm_lip_radius, nrm_out);
    if (ver->parsed())
      return run_verify(global, ver_what, ver_n, ver_l, ver_out);
    if (cex->parsed())
      return run_counterexample(global, cex, cex_lambda, cex_bw, cex_tw, cex_n,
                                cex_l, cex_out);
    std::cerr << app.help();
    emit_error("cli", "a subcommand is required");
    return 64;
  } catch (const ValidationError& e) {
    emit_error(e.stage(), e.what());
    return 2;
  } catch (const NumericalError& e) {
    emit_error(e.stage(), e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}

}  // namespace nscv
