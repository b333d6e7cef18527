#include "lgvi/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lgvi/errors.hpp"

namespace lgvi {

std::string to_string(IntegratorKind k) {
  switch (k) {
    case IntegratorKind::Lgvi: return "lgvi";
    case IntegratorKind::Elgvi: return "elgvi";
    case IntegratorKind::Splt: return "splt";
    case IntegratorKind::Rk4: return "rk4";
    case IntegratorKind::Rk45: return "rk45";
  }
  return "?";
}

std::string to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::Wahba: return "wahba";
    case ObjectiveKind::Pose: return "pose";
    case ObjectiveKind::Quadratic: return "quadratic";
  }
  return "?";
}

IntegratorKind integrator_from_string(const std::string& s) {
  if (s == "lgvi") return IntegratorKind::Lgvi;
  if (s == "elgvi") return IntegratorKind::Elgvi;
  if (s == "splt") return IntegratorKind::Splt;
  if (s == "rk4") return IntegratorKind::Rk4;
  if (s == "rk45") return IntegratorKind::Rk45;
  throw ParseError("unknown integrator '" + s + "'");
}

ObjectiveKind objective_from_string(const std::string& s) {
  if (s == "wahba") return ObjectiveKind::Wahba;
  if (s == "pose") return ObjectiveKind::Pose;
  if (s == "quadratic") return ObjectiveKind::Quadratic;
  throw ParseError("unknown objective '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (p <= 0.0) throw ParseError("config: p must be > 0");
  if (C <= 0.0) throw ParseError("config: C must be > 0");
  if (lambda < 1.0) throw ParseError("config: lambda must be >= 1");
  if (h0 <= 0.0) throw ParseError("config: h0 must be > 0");
  if ((steps == 0) == (t_final == 0.0)) {
    throw ParseError("config: exactly one of steps and t_final must be set");
  }
  if (log_every < 1) throw ParseError("config: log_every must be >= 1");
  if (integrator == IntegratorKind::Rk45 && t_final == 0.0) {
    throw ParseError("config: rk45 needs a t_final horizon");
  }
  const bool embedded = integrator == IntegratorKind::Rk4 ||
                        integrator == IntegratorKind::Rk45 ||
                        integrator == IntegratorKind::Splt;
  if (embedded) {
    if (objective != ObjectiveKind::Wahba) {
      throw ParseError("config: " + to_string(integrator) +
                       " supports only the SO(3) objective");
    }
    if (J != "identity") {
      throw ParseError("config: " + to_string(integrator) + " requires J = identity");
    }
  }
  if (objective == ObjectiveKind::Pose && grad_method != "fd" &&
      grad_method != "analytic") {
    throw ParseError("config: grad_method must be fd or analytic");
  }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    }
    entries[key] = value;
  }
  return entries;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config: bad numeric value '" + v + "' for key '" + key + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config: bad integer value '" + v + "' for key '" + key + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config: bad boolean value '" + v + "' for key '" + key + "'");
}

}  // namespace

void apply_config_entries(ExperimentConfig& c,
                          const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "objective") c.objective = objective_from_string(value);
    else if (key == "integrator") c.integrator = integrator_from_string(value);
    else if (key == "p") c.p = to_double(key, value);
    else if (key == "C") c.C = to_double(key, value);
    else if (key == "lambda") c.lambda = to_double(key, value);
    else if (key == "J") c.J = value;
    else if (key == "h0") c.h0 = to_double(key, value);
    else if (key == "t0") c.t0 = to_double(key, value);
    else if (key == "t_final") c.t_final = to_double(key, value);
    else if (key == "steps") c.steps = to_long(key, value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "out") c.out = value;
    else if (key == "log_every") c.log_every = to_long(key, value);
    else if (key == "h_tolerance") c.h_tolerance = to_double(key, value);
    else if (key == "h_min") c.h_min = to_double(key, value);
    else if (key == "h_max") c.h_max = to_double(key, value);
    else if (key == "max_outer_iterations")
      c.max_outer_iterations = static_cast<int>(to_long(key, value));
    else if (key == "newton_tolerance") c.newton_tolerance = to_double(key, value);
    else if (key == "trailing_theta_k") c.trailing_theta_k = to_bool(key, value);
    else if (key == "rk_tol") c.rk_tol = to_double(key, value);
    else if (key == "timing") c.timing = to_bool(key, value);
    else if (key == "init_angle") c.init_angle = to_double(key, value);
    else if (key == "n_features") c.n_features = static_cast<int>(to_long(key, value));
    else if (key == "fx") c.fx = to_double(key, value);
    else if (key == "fy") c.fy = to_double(key, value);
    else if (key == "cx") c.cx = to_double(key, value);
    else if (key == "cy") c.cy = to_double(key, value);
    else if (key == "pose_rot_perturb") c.pose_rot_perturb = to_double(key, value);
    else if (key == "pose_trans_perturb") c.pose_trans_perturb = to_double(key, value);
    else if (key == "grad_method") c.grad_method = value;
    else if (key == "features_file") c.features_file = value;
    else if (key == "quad_dim") c.quad_dim = static_cast<int>(to_long(key, value));
    else throw ParseError("config: unknown key '" + key + "'");
  }
}

ExperimentConfig config_from_entries(
    const std::map<std::string, std::string>& entries) {
  ExperimentConfig c;
  apply_config_entries(c, entries);
  c.validate();
  return c;
}

}  // namespace lgvi
