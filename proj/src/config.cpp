#include <charconv>
#include <functional>
#include <istream>
#include <map>
#include <string>

#include "opml/error.hpp"
#include "opml/pipeline.hpp"

namespace opml {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("cli-io", "invalid value '" + value + "' for key " + key);
  }
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("cli-io", "invalid boolean '" + value + "' for key " + key);
}

using Setter = std::function<void(TrainConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha_degrees", [](TrainConfig& c, const auto& k, const auto& v) { c.alpha_degrees = number<double>(k, v); }},
      {"embedding_dim", [](TrainConfig& c, const auto& k, const auto& v) { c.embedding_dim = number<Index>(k, v); }},
      {"rcgd_maxiter", [](TrainConfig& c, const auto& k, const auto& v) { c.rcgd_maxiter = number<int>(k, v); }},
      {"rcgd_tol", [](TrainConfig& c, const auto& k, const auto& v) { c.rcgd_tol = number<double>(k, v); }},
      {"batch_size", [](TrainConfig& c, const auto& k, const auto& v) { c.batch_size = number<Index>(k, v); }},
      {"epochs", [](TrainConfig& c, const auto& k, const auto& v) { c.epochs = number<int>(k, v); }},
      {"seed", [](TrainConfig& c, const auto& k, const auto& v) { c.seed = number<std::uint64_t>(k, v); }},
      {"per_anchor", [](TrainConfig& c, const auto& k, const auto& v) { c.per_anchor = number<Index>(k, v); }},
      {"stochastic", [](TrainConfig& c, const auto& k, const auto& v) { c.stochastic = boolean(k, v); }},
      {"recluster", [](TrainConfig& c, const auto& k, const auto& v) { c.recluster = boolean(k, v); }},
      {"normalize", [](TrainConfig& c, const auto& k, const auto& v) { c.normalize = boolean(k, v); }},
      {"gamma", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.gamma = number<double>(k, v); }},
      {"epsilon", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.epsilon = number<double>(k, v); }},
      {"theta_min", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.theta_min = number<double>(k, v); }},
      {"k_graph", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.k_graph = number<Index>(k, v); }},
      {"c", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.c = number<double>(k, v); }},
      {"teleport", [](TrainConfig& c, const auto& k, const auto& v) { c.aas.teleport = number<double>(k, v); }},
  };
  return table;
}

}  // namespace

TrainConfig parse_config(std::istream& is) {
  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("cli-io", "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("cli-io", "unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

}  // namespace opml
