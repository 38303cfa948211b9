#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "osa/experiment.hpp"

namespace osa {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + value);
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad unsigned value for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + value);
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_commas(value))
    out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

// Scalar entries broadcast to all channels.
std::vector<double> broadcast(const std::string& key, std::vector<double> v,
                              std::size_t n) {
  if (v.size() == 1) return std::vector<double>(n, v[0]);
  if (v.size() == n) return v;
  throw ConfigError("config: '" + key + "' needs 1 or " + std::to_string(n) +
                    " values");
}

std::vector<std::int64_t> parse_checkpoints(const std::string& value) {
  if (value == "default") return {};
  std::vector<std::int64_t> out;
  for (const std::string& item : split_commas(value))
    out.push_back(parse_int("checkpoints", item));
  return out;
}

}  // namespace

std::vector<std::int64_t> default_checkpoints(std::int64_t slots) {
  std::vector<std::int64_t> points;
  for (std::int64_t p = 2; p <= slots && p > 0; p *= 2) points.push_back(p);
  for (std::int64_t d = 10; d <= slots && d > 0; d *= 10) points.push_back(d);
  points.push_back(slots);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

void apply_override(ExperimentConfig& c, const std::string& key,
                    const std::string& raw_value) {
  const std::string value = trim(raw_value);
  if (key == "policy") c.policy = value;
  else if (key == "case") {
    if (value == "full") c.sensing_case = SensingCase::kFull;
    else if (value == "partial") c.sensing_case = SensingCase::kPartial;
    else throw ConfigError("config: 'case' must be full or partial");
  }
  else if (key == "k") c.k = static_cast<int>(parse_int(key, value));
  else if (key == "m") c.m = static_cast<int>(parse_int(key, value));
  else if (key == "slots") c.slots = parse_int(key, value);
  else if (key == "runs") c.runs = parse_int(key, value);
  else if (key == "master_seed" || key == "seed") c.master_seed = parse_uint(key, value);
  else if (key == "checkpoints") c.checkpoints = parse_checkpoints(value);
  else if (key == "reward_unit") c.model.reward_unit = parse_double(key, value);
  else if (key == "label") c.label = value;
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "per_run_csv") c.per_run_csv = parse_bool(key, value);
  else if (key == "plot") c.plot = parse_bool(key, value);
  else if (key == "workers") c.workers = static_cast<int>(parse_int(key, value));
  else if (key == "alg1.fit.starts") c.alg1_fit.starts = static_cast<int>(parse_int(key, value));
  else if (key == "alg1.fit.max_iters") c.alg1_fit.max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "alg1.fit.grad_tol") c.alg1_fit.grad_tol = parse_double(key, value);
  else if (key == "alg1.fit.box_floor") c.alg1_fit.box_floor = parse_double(key, value);
  else if (key == "alg1.fit.warm_start") c.alg1_warm_start = parse_bool(key, value);
  else if (key == "alg4.sweep_cap_slots") c.alg4_sweep_cap_slots = parse_int(key, value);
  else if (key == "genie.enum_cap") c.genie_enum_cap = static_cast<int>(parse_int(key, value));
  else if (key == "genie.mc_samples") c.genie_mc_samples = parse_int(key, value);
  else if (key == "theta" || key == "p_d" || key == "p_f")
    throw ConfigError("config: model parameter '" + key +
                      "' can only be set in the config file");
  else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) +
                        ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("config: duplicate key '" + key + "' in " + path);
  }

  ExperimentConfig c;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  const std::string theta = take("theta");
  if (theta.empty()) throw ConfigError("config: 'theta' is required");
  c.model.theta = parse_double_list("theta", theta);
  const std::size_t n = c.model.theta.size();

  const std::string p_d = take("p_d");
  const std::string p_f = take("p_f");
  if (p_d.empty() || p_f.empty())
    throw ConfigError("config: 'p_d' and 'p_f' are required");
  c.model.p_d = broadcast("p_d", parse_double_list("p_d", p_d), n);
  c.model.p_f = broadcast("p_f", parse_double_list("p_f", p_f), n);

  bool case_given = kv.count("case") > 0;
  for (const auto& [key, value] : kv) apply_override(c, key, value);
  if (!case_given) {
    c.sensing_case = (c.policy == "alg3" || c.policy == "alg4")
                         ? SensingCase::kPartial
                         : SensingCase::kFull;
  }
  return c;
}

void validate_config(ExperimentConfig& c) {
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const int n = c.model.n();

  if (c.policy != "alg1" && c.policy != "alg2" && c.policy != "alg3" &&
      c.policy != "alg4")
    throw ConfigError("config: unknown policy '" + c.policy +
                      "' (expected alg1|alg2|alg3|alg4)");
  const bool partial_policy = c.policy == "alg3" || c.policy == "alg4";
  if (partial_policy && c.sensing_case != SensingCase::kPartial)
    throw ConfigError("config: " + c.policy + " is a partial-sensing policy");
  if (!partial_policy && c.sensing_case != SensingCase::kFull)
    throw ConfigError("config: " + c.policy + " is a full-sensing policy");

  if (c.sensing_case == SensingCase::kPartial) {
    if (!(1 <= c.k && c.k <= c.m && c.m <= n))
      throw ConfigError("config: partial sensing needs 1 <= k <= m <= N");
  } else {
    if (!(1 <= c.k && c.k <= n))
      throw ConfigError("config: full sensing needs 1 <= k <= N");
  }
  if (c.runs < 1) throw ConfigError("config: runs must be >= 1");
  if (c.slots < 1) throw ConfigError("config: slots must be >= 1");
  if (c.policy == "alg3") {
    if (!SensingParams{c.model.p_d, c.model.p_f}.homogeneous())
      throw ConfigError("config: alg3 requires homogeneous p_d/p_f");
    const std::int64_t init = (n + c.m - 1) / c.m;
    if (c.slots < init + 1)
      throw ConfigError("config: alg3 needs slots >= ceil(N/M) + 1 = " +
                        std::to_string(init + 1));
  }
  if (c.alg1_fit.starts < 1)
    throw ConfigError("config: alg1.fit.starts must be >= 1");
  if (c.alg1_fit.max_iters < 0)
    throw ConfigError("config: alg1.fit.max_iters must be >= 0");
  if (c.workers < 0) throw ConfigError("config: workers must be >= 0");

  if (c.checkpoints.empty()) c.checkpoints = default_checkpoints(c.slots);
  if (!std::is_sorted(c.checkpoints.begin(), c.checkpoints.end()) ||
      std::adjacent_find(c.checkpoints.begin(), c.checkpoints.end()) !=
          c.checkpoints.end())
    throw ConfigError("config: checkpoints must be strictly ascending");
  for (std::int64_t cp : c.checkpoints) {
    if (cp < 1 || cp > c.slots)
      throw ConfigError("config: checkpoint " + std::to_string(cp) +
                        " outside [1, slots]");
  }
}

}  // namespace osa
