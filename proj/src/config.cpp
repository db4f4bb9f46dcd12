#include "nscv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nscv/errors.hpp"

namespace nscv {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ValidationError("config", "malformed JSON in " + what);
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config", "cannot open config file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ValidationError("config",
                            "unknown key '" + it.key() + "' in " + what);
}

GrowthFunction growth_from_json(const json& j) {
  if (!j.is_object())
    throw ValidationError("config", "growth config must be a JSON object");
  reject_unknown_keys(j,
                      {"kind", "n", "p", "alpha", "alphaTilde", "beta", "delta",
                       "allowExtendedBeta"},
                      "growth config");
  std::string kind = j.value("kind", "");
  int n = j.value("n", 3);
  double p = j.value("p", 4.0);
  double alpha = j.value("alpha", 0.5);
  double alpha_tilde = j.value("alphaTilde", -0.75);
  double beta = j.value("beta", -0.75);
  bool extended = j.value("allowExtendedBeta", false);
  if (kind == "piecewise_phi")
    return make_phi(n, p, alpha, alpha_tilde, beta, extended);
  if (kind == "piecewise_psi") {
    if (j.contains("delta"))
      return make_psi_explicit(n, p, alpha, j["delta"].get<double>(), beta);
    return make_psi(n, p, alpha, alpha_tilde, beta, extended);
  }
  if (kind == "constant_one") return GrowthFunction::constant_one();
  if (kind == "power_alpha") return GrowthFunction::power(alpha);
  if (kind == "morrey_critical") return GrowthFunction::morrey_critical(n, p);
  throw ValidationError("config", "unknown growth kind '" + kind + "'");
}

json growth_to_json(const GrowthFunction& gf) {
  json j;
  const GrowthParams& p = gf.params();
  switch (gf.kind()) {
    case GrowthKind::PiecewisePowerPhi:
      j["kind"] = "piecewise_phi";
      j["n"] = p.n;
      j["p"] = p.p;
      j["alpha"] = p.alpha;
      j["alphaTilde"] = p.alpha_tilde;
      j["beta"] = p.beta;
      break;
    case GrowthKind::PiecewisePowerPsi:
      j["kind"] = "piecewise_psi";
      j["n"] = p.n;
      j["p"] = p.p;
      j["alpha"] = p.alpha;
      j["alphaTilde"] = p.alpha_tilde;
      j["beta"] = p.beta;
      j["delta"] = p.delta;
      break;
    case GrowthKind::ConstantOne:
      j["kind"] = "constant_one";
      break;
    case GrowthKind::PowerAlpha:
      j["kind"] = "power_alpha";
      j["alpha"] = p.alpha;
      break;
    case GrowthKind::MorreyCritical:
      j["kind"] = "morrey_critical";
      j["n"] = p.n;
      j["p"] = p.p;
      break;
    case GrowthKind::Custom:
      throw ValidationError("config",
                            "custom growth functions are not serializable");
  }
  return j;
}

}  // namespace

GrowthFunction growth_from_json_text(const std::string& text) {
  return growth_from_json(parse_json(text, "growth config"));
}

GrowthFunction growth_from_json_file(const std::string& path) {
  return growth_from_json(parse_json(slurp(path), path));
}

std::string growth_to_json_text(const GrowthFunction& gf) {
  return growth_to_json(gf).dump();
}

BallStrategy parse_ball_strategy(const std::string& text) {
  if (text == "exhaustive") return BallStrategy::exhaustive();
  if (text.rfind("dyadic:", 0) == 0) {
    int stride = 0;
    try {
      stride = std::stoi(text.substr(7));
    } catch (...) {
      throw ValidationError("config",
                            "bad ball strategy '" + text +
                                "' (want exhaustive or dyadic:<stride>)");
    }
    if (stride < 0)
      throw ValidationError("config", "ball stride must be >= 0");
    return BallStrategy::dyadic(stride);
  }
  if (text == "dyadic") return BallStrategy::dyadic(0);
  throw ValidationError("config", "bad ball strategy '" + text +
                                      "' (want exhaustive or dyadic:<stride>)");
}

NlcConfig nlc_config_from_json_text(const std::string& text) {
  json j = parse_json(text, "nlc config");
  if (!j.is_object())
    throw ValidationError("config", "nlc config must be a JSON object");
  reject_unknown_keys(
      j,
      {"p", "phi", "balls", "ball_radii", "C", "alpha", "T", "window_radii",
       "window_radii_rel", "tie_tol", "decay_radius_rel"},
      "nlc config");
  NlcConfig cfg = NlcConfig::defaults();
  cfg.vspec.p = j.value("p", cfg.vspec.p);
  if (j.contains("phi")) cfg.vspec.phi = growth_from_json(j["phi"]);
  if (j.contains("balls"))
    cfg.vspec.balls = parse_ball_strategy(j["balls"].get<std::string>());
  if (j.contains("ball_radii"))
    cfg.vspec.balls.radii = j["ball_radii"].get<std::vector<double>>();
  cfg.C = j.value("C", cfg.C);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.T = j.value("T", cfg.T);
  if (j.contains("window_radii"))
    cfg.window_radii = j["window_radii"].get<std::vector<double>>();
  if (j.contains("window_radii_rel"))
    cfg.window_radii_rel = j["window_radii_rel"].get<std::vector<double>>();
  cfg.tie_tol = j.value("tie_tol", cfg.tie_tol);
  cfg.decay_radius_rel = j.value("decay_radius_rel", cfg.decay_radius_rel);
  cfg.validate();
  return cfg;
}

NlcConfig nlc_config_from_json_file(const std::string& path) {
  return nlc_config_from_json_text(slurp(path));
}

std::string nlc_config_to_json_text(const NlcConfig& cfg) {
  json j;
  j["p"] = cfg.vspec.p;
  j["phi"] = growth_to_json(cfg.vspec.phi);
  std::string balls =
      cfg.vspec.balls.kind == BallStrategy::Kind::Exhaustive
          ? "exhaustive"
          : "dyadic:" + std::to_string(cfg.vspec.balls.stride);
  j["balls"] = balls;
  if (!cfg.vspec.balls.radii.empty()) j["ball_radii"] = cfg.vspec.balls.radii;
  j["C"] = cfg.C;
  j["alpha"] = cfg.alpha;
  j["T"] = cfg.T;
  if (!cfg.window_radii.empty()) j["window_radii"] = cfg.window_radii;
  j["window_radii_rel"] = cfg.window_radii_rel;
  j["tie_tol"] = cfg.tie_tol;
  j["decay_radius_rel"] = cfg.decay_radius_rel;
  return j.dump(2);
}

}  // namespace nscv
