#include "krig/numeric_policy.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "krig/error.hpp"

namespace krig {

NumericPolicy policy_from_json_text(const std::string& text,
                                    const std::string& origin) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error,
                origin + ": not valid JSON: " + e.what());
  }
  if (!parsed.is_object()) {
    throw Error(errc::invalid_argument,
                origin + ": expected a JSON object of tolerance overrides");
  }

  NumericPolicy policy;
  const std::map<std::string, double*> fields = {
      {"condition_threshold", &policy.condition_threshold},
      {"weight_sum_tol", &policy.weight_sum_tol},
      {"residual_tol", &policy.residual_tol},
      {"formula_equivalence_rel_tol", &policy.formula_equivalence_rel_tol},
      {"estimator_equivalence_rel_tol", &policy.estimator_equivalence_rel_tol},
      {"variance_clamp_rel", &policy.variance_clamp_rel},
      {"auto_estimation_tol", &policy.auto_estimation_tol},
      {"permutation_rel_tol", &policy.permutation_rel_tol},
      {"white_noise_tol", &policy.white_noise_tol},
      {"path_equivalence_rel_tol", &policy.path_equivalence_rel_tol},
      {"oracle_match_tol", &policy.oracle_match_tol},
      {"mc_standard_errors", &policy.mc_standard_errors},
      {"mc_trend_standard_errors", &policy.mc_trend_standard_errors},
  };

  for (const auto& [key, value] : parsed.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(errc::invalid_argument,
                  origin + ": unknown numeric-policy key '" + key + "'");
    }
    if (!value.is_number()) {
      throw Error(errc::invalid_argument,
                  origin + ": key '" + key + "' must be a number");
    }
    const double v = value.get<double>();
    if (!(std::isfinite(v) && v > 0.0)) {
      throw Error(errc::invalid_argument,
                  origin + ": key '" + key + "' must be positive and finite");
    }
    *it->second = v;
  }
  return policy;
}

NumericPolicy policy_from_env() {
  const char* path = std::getenv("KRIGE_NUMERIC_POLICY");
  if (path == nullptr || *path == '\0') return default_policy();

  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error,
                std::string("KRIGE_NUMERIC_POLICY: cannot open '") + path +
                    "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return policy_from_json_text(text.str(),
                               std::string("KRIGE_NUMERIC_POLICY (") + path +
                                   ")");
}

}  // namespace krig
