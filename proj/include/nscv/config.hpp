#ifndef NSCV_CONFIG_HPP
#define NSCV_CONFIG_HPP

#include <string>

#include "nscv/growth.hpp"
#include "nscv/nlc.hpp"

namespace nscv {

// Structured-text form of a growth function:
//   {"kind": "piecewise_phi" | "piecewise_psi" | "constant_one" |
//            "power_alpha" | "morrey_critical",
//    "n": 3, "p": 4.0, "alpha": 0.5, "alphaTilde": -0.75, "beta": -0.75,
//    "delta": -1.5, "allowExtendedBeta": false}
// Custom evaluators are not serializable.
GrowthFunction growth_from_json_text(const std::string& text);
GrowthFunction growth_from_json_file(const std::string& path);
std::string growth_to_json_text(const GrowthFunction& gf);

// "exhaustive" or "dyadic:<stride>".
BallStrategy parse_ball_strategy(const std::string& text);

NlcConfig nlc_config_from_json_text(const std::string& text);
NlcConfig nlc_config_from_json_file(const std::string& path);
std::string nlc_config_to_json_text(const NlcConfig& cfg);

}  // namespace nscv

#endif
