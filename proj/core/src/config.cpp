#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qarx/results_io.hpp"

namespace qarx {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const json& object, const char* key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_optional(const json& object, const char* key, T& out, const std::string& where) {
  if (object.contains(key)) out = get_as<T>(object, key, where);
}

std::size_t get_count(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

HypothesisConstants parse_hypothesis(const json& h) {
  const std::string where = "hypothesis";
  if (!h.is_object()) throw ConfigError("hypothesis must be an object");
  reject_unknown_keys(h,
                      {"c", "c1", "c2", "c3", "c4", "gamma", "gamma_prime", "a_p0_sq", "b_q0_sq",
                       "alpha1", "alpha2", "beta1", "beta2"},
                      where);
  HypothesisConstants k;
  if (h.contains("c")) k.c = get_as<double>(h, "c", where);
  const std::pair<const char*, double*> fields[] = {
      {"c1", &k.c1},         {"c2", &k.c2},         {"c3", &k.c3},
      {"c4", &k.c4},         {"gamma", &k.gamma},   {"gamma_prime", &k.gamma_prime},
      {"a_p0_sq", &k.a_p0_sq}, {"b_q0_sq", &k.b_q0_sq}, {"alpha1", &k.alpha1},
      {"alpha2", &k.alpha2}, {"beta1", &k.beta1},   {"beta2", &k.beta2}};
  for (const auto& [key, target] : fields) {
    if (!h.contains(key)) throw ConfigError("hypothesis." + std::string(key) + " is required");
    *target = get_as<double>(h, key, where);
  }
  return k;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  reject_unknown_keys(doc,
                      {"model", "input_delta", "epsilon", "p_star", "q_star", "slope_l", "slope_v",
                       "horizon", "checkpoints", "trials", "base_seed", "output_dir",
                       "coefficient_bound", "write_criteria", "threads", "hypothesis"},
                      "config");
  for (const char* key : {"model", "input_delta", "epsilon", "p_star", "q_star", "slope_l",
                          "slope_v", "checkpoints"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }

  ExperimentConfig cfg;
  const json& model = doc.at("model");
  if (!model.is_object()) throw ConfigError("model must be an object");
  reject_unknown_keys(model, {"a", "b", "noise_std"}, "model");
  if (!model.contains("b")) throw ConfigError("model.b is required");
  read_optional(model, "a", cfg.model.a, "model");
  cfg.model.b = get_as<std::vector<double>>(model, "b", "model");
  read_optional(model, "noise_std", cfg.model.noise_std, "model");

  cfg.input_delta = get_as<double>(doc, "input_delta", "config");
  cfg.epsilon = get_as<double>(doc, "epsilon", "config");
  cfg.p_star = get_count(doc, "p_star", "config");
  cfg.q_star = get_count(doc, "q_star", "config");
  cfg.slope_l = get_as<double>(doc, "slope_l", "config");
  cfg.slope_v = get_as<double>(doc, "slope_v", "config");

  const json& cps = doc.at("checkpoints");
  if (!cps.is_array()) throw ConfigError("checkpoints must be an array");
  for (const auto& v : cps) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("checkpoints must be non-negative integers");
    }
    cfg.checkpoints.push_back(v.get<std::size_t>());
  }

  if (doc.contains("horizon")) cfg.horizon = get_count(doc, "horizon", "config");
  if (doc.contains("trials")) cfg.trials = get_count(doc, "trials", "config");
  if (doc.contains("threads")) cfg.threads = get_count(doc, "threads", "config");
  if (doc.contains("base_seed")) {
    const json& v = doc.at("base_seed");
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<long long>() < 0)) {
      throw ConfigError("config.base_seed must be a non-negative integer");
    }
    cfg.base_seed = v.get<std::uint64_t>();
  }
  read_optional(doc, "output_dir", cfg.output_dir, "config");
  read_optional(doc, "coefficient_bound", cfg.coefficient_bound, "config");
  read_optional(doc, "write_criteria", cfg.write_criteria, "config");
  if (doc.contains("hypothesis")) cfg.hypothesis = parse_hypothesis(doc.at("hypothesis"));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json doc;
  doc["model"]["a"] = cfg.model.a;
  doc["model"]["b"] = cfg.model.b;
  doc["model"]["noise_std"] = cfg.model.noise_std;
  doc["input_delta"] = cfg.input_delta;
  doc["epsilon"] = cfg.epsilon;
  doc["p_star"] = cfg.p_star;
  doc["q_star"] = cfg.q_star;
  doc["slope_l"] = cfg.slope_l;
  doc["slope_v"] = cfg.slope_v;
  doc["horizon"] = cfg.horizon;
  doc["checkpoints"] = cfg.checkpoints;
  doc["trials"] = cfg.trials;
  doc["base_seed"] = cfg.base_seed;
  doc["output_dir"] = cfg.output_dir;
  doc["coefficient_bound"] = cfg.coefficient_bound;
  doc["write_criteria"] = cfg.write_criteria;
  doc["threads"] = cfg.threads;
  if (cfg.hypothesis) {
    const auto& k = *cfg.hypothesis;
    auto& h = doc["hypothesis"];
    h["c"] = k.c.value_or(cfg.coefficient_bound);
    h["c1"] = k.c1;
    h["c2"] = k.c2;
    h["c3"] = k.c3;
    h["c4"] = k.c4;
    h["gamma"] = k.gamma;
    h["gamma_prime"] = k.gamma_prime;
    h["a_p0_sq"] = k.a_p0_sq;
    h["b_q0_sq"] = k.b_q0_sq;
    h["alpha1"] = k.alpha1;
    h["alpha2"] = k.alpha2;
    h["beta1"] = k.beta1;
    h["beta2"] = k.beta2;
  }
  return doc.dump(2) + "\n";
}

}  // namespace qarx
