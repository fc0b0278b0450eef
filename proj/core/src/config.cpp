#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sfcbackup/harness.hpp"

namespace sfcbackup {

namespace {

using nlohmann::json;

// Six servers, 15 VNFs, 6 SFCs on a complete graph. Link latencies were
// drawn once from U(0.3, 1.5) and are pinned here. The failure confidence
// term is optimistic with unit scale; see docs/config.md.
constexpr std::string_view kCanonicalConfig = R"({
  "servers": [10, 8, 9, 12, 8, 11],
  "links": [
    {"u": 0, "v": 1, "latency": 0.93},
    {"u": 0, "v": 2, "latency": 0.84},
    {"u": 0, "v": 3, "latency": 0.66},
    {"u": 0, "v": 4, "latency": 0.36},
    {"u": 0, "v": 5, "latency": 1.23},
    {"u": 1, "v": 2, "latency": 1.47},
    {"u": 1, "v": 3, "latency": 0.78},
    {"u": 1, "v": 4, "latency": 1.05},
    {"u": 1, "v": 5, "latency": 1.26},
    {"u": 2, "v": 3, "latency": 1.32},
    {"u": 2, "v": 4, "latency": 1.2},
    {"u": 2, "v": 5, "latency": 0.66},
    {"u": 3, "v": 4, "latency": 1.05},
    {"u": 3, "v": 5, "latency": 0.96},
    {"u": 4, "v": 5, "latency": 0.93}
  ],
  "vnf_demand": [5, 4, 4, 8, 5, 3, 5, 8, 7, 5, 1, 4, 3, 3, 4],
  "sfcs": [
    [3, 6, 9, 7, 4],
    [9, 8, 1, 3],
    [3, 1, 6],
    [10, 14, 1],
    [1, 11, 13, 1, 4],
    [8, 1, 12, 10]
  ],
  "users": 10,
  "request_prob": [0.7, 0.4, 0.6, 0.3, 0.5, 0.8],
  "failure_mean": [0.05, 0.10, 0.03, 0.08, 0.12, 0.04, 0.06, 0.15,
                   0.09, 0.02, 0.07, 0.11, 0.05, 0.10, 0.03],
  "weights": {"omega": 1.0, "mu": 1.0},
  "slots": 500,
  "seeds": "1..30",
  "policies": ["rtsd", "bandit", "random"],
  "learner": {"failure_bonus_sign": -1, "failure_bonus_scale": 1.0},
  "capacity_scale": 1.0,
  "regret": false
}
)";

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail("config field '" + key + "': " + e.what());
  }
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  if (j.is_string()) return parse_seed_spec(j.get<std::string>());
  if (j.is_number_unsigned()) return {j.get<std::uint64_t>()};
  if (j.is_array()) return get_as<std::vector<std::uint64_t>>(j, "seeds");
  fail("config field 'seeds' must be a string range, integer or array");
}

RequestModel parse_requests(const json& j) {
  RequestModel model;
  if (j.is_number()) {
    model.form = RequestModel::Form::kUniform;
    model.uniform = j.get<double>();
  } else if (j.is_array() && (j.empty() || j.front().is_number())) {
    model.form = RequestModel::Form::kPerSfc;
    model.per_sfc = get_as<std::vector<double>>(j, "request_prob");
  } else if (j.is_array()) {
    model.form = RequestModel::Form::kMatrix;
    model.matrix = get_as<std::vector<std::vector<double>>>(j, "request_prob");
  } else {
    fail("config field 'request_prob' must be a number, array or matrix");
  }
  return model;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_spec(std::string_view text) {
  auto parse_one = [&](std::string_view part) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      fail("bad seed '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) return {parse_one(text)};
  const std::uint64_t lo = parse_one(text.substr(0, dots));
  const std::uint64_t hi = parse_one(text.substr(dots + 2));
  if (hi < lo) fail("empty seed range '" + std::string(text) + "'");
  if (hi - lo >= 1'000'000) fail("seed range too large");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  return seeds;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config root must be an object");

  static const char* const kKnown[] = {
      "servers", "links", "vnf_demand", "sfcs", "users", "request_prob",
      "failure_mean", "weights", "slots", "seeds", "policies", "learner",
      "capacity_scale", "regret", "oracle_budget"};
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || item.key() == k;
    if (!known) fail("unknown config field '" + item.key() + "'");
  }
  for (const char* required : {"servers", "links", "vnf_demand", "sfcs",
                               "request_prob", "failure_mean"}) {
    if (!doc.contains(required)) {
      fail(std::string("missing config field '") + required + "'");
    }
  }

  ExperimentConfig cfg;

  const auto capacities = get_as<std::vector<std::int64_t>>(doc["servers"], "servers");
  std::vector<Link> links;
  if (!doc["links"].is_array()) fail("config field 'links' must be an array");
  for (const json& l : doc["links"]) {
    if (!l.is_object() || !l.contains("u") || !l.contains("v") ||
        !l.contains("latency")) {
      fail("each link needs 'u', 'v' and 'latency'");
    }
    links.push_back({ServerId{get_as<std::size_t>(l["u"], "links.u")},
                     ServerId{get_as<std::size_t>(l["v"], "links.v")},
                     get_as<double>(l["latency"], "links.latency")});
  }
  try {
    cfg.network = EdgeNetwork(capacities, std::move(links));
  } catch (const std::invalid_argument& e) {
    fail(std::string("config links: ") + e.what());
  }

  auto demands = get_as<std::vector<std::int64_t>>(doc["vnf_demand"], "vnf_demand");
  std::vector<std::vector<VnfId>> chains;
  for (const auto& raw : get_as<std::vector<std::vector<std::size_t>>>(doc["sfcs"], "sfcs")) {
    std::vector<VnfId> chain;
    for (std::size_t i : raw) chain.emplace_back(i);
    chains.push_back(std::move(chain));
  }
  cfg.catalog = Catalog(std::move(demands), std::move(chains));

  if (doc.contains("users")) cfg.users = get_as<std::size_t>(doc["users"], "users");
  cfg.requests = parse_requests(doc["request_prob"]);
  if (cfg.requests.form == RequestModel::Form::kMatrix && !doc.contains("users")) {
    cfg.users = cfg.requests.matrix.size();
  }
  cfg.failure_mean = get_as<std::vector<double>>(doc["failure_mean"], "failure_mean");

  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    if (w.contains("omega")) cfg.weights.omega = get_as<double>(w["omega"], "weights.omega");
    if (w.contains("mu")) cfg.weights.mu = get_as<double>(w["mu"], "weights.mu");
  }
  if (doc.contains("slots")) cfg.slots = get_as<std::uint64_t>(doc["slots"], "slots");
  if (doc.contains("seeds")) cfg.seeds = parse_seeds(doc["seeds"]);
  if (doc.contains("policies")) {
    cfg.policies.clear();
    for (const auto& name : get_as<std::vector<std::string>>(doc["policies"], "policies")) {
      const auto kind = parse_policy(name);
      if (!kind) fail("unknown policy '" + name + "'");
      cfg.policies.push_back(*kind);
    }
  }
  if (doc.contains("learner")) {
    const json& l = doc["learner"];
    if (l.contains("failure_bonus_sign")) {
      cfg.knobs.failure_bonus_sign = get_as<int>(l["failure_bonus_sign"], "learner.failure_bonus_sign");
    }
    if (l.contains("failure_bonus_scale") && !l["failure_bonus_scale"].is_null()) {
      cfg.knobs.failure_bonus_scale = get_as<double>(l["failure_bonus_scale"], "learner.failure_bonus_scale");
    }
  }
  if (doc.contains("capacity_scale")) {
    cfg.capacity_scale = get_as<double>(doc["capacity_scale"], "capacity_scale");
  }
  if (doc.contains("regret")) cfg.regret = get_as<bool>(doc["regret"], "regret");
  if (doc.contains("oracle_budget")) {
    cfg.oracle_budget = get_as<std::uint64_t>(doc["oracle_budget"], "oracle_budget");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string canonical_config_json() { return std::string(kCanonicalConfig); }

ExperimentConfig canonical_config() { return parse_config(kCanonicalConfig); }

void ExperimentConfig::validate() const {
  const auto issues = validate_instance(network, catalog);
  if (!issues.empty()) fail("invalid instance: " + issues.front().message);
  if (slots < 1) fail("slots must be >= 1");
  if (seeds.empty()) fail("at least one seed is required");
  if (policies.empty()) fail("at least one policy is required");
  if (!(capacity_scale > 0.0)) fail("capacity_scale must be > 0");
  if (users < 1) fail("users must be >= 1");
  try {
    weights.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (knobs.failure_bonus_sign != 1 && knobs.failure_bonus_sign != -1) {
    fail("learner.failure_bonus_sign must be +1 or -1");
  }
  if (knobs.failure_bonus_scale && !(*knobs.failure_bonus_scale >= 0.0)) {
    fail("learner.failure_bonus_scale must be >= 0");
  }
  if (failure_mean.size() != catalog.num_vnfs()) {
    fail("failure_mean needs one entry per VNF");
  }
  switch (requests.form) {
    case RequestModel::Form::kUniform:
      break;
    case RequestModel::Form::kPerSfc:
      if (requests.per_sfc.size() != catalog.num_sfcs()) {
        fail("request_prob needs one entry per SFC");
      }
      break;
    case RequestModel::Form::kMatrix:
      if (requests.matrix.size() != users) {
        fail("request_prob matrix needs one row per user");
      }
      for (const auto& row : requests.matrix) {
        if (row.size() != catalog.num_sfcs()) {
          fail("request_prob matrix needs one column per SFC");
        }
      }
      break;
  }
  try {
    ground_truth(0).validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

void ExperimentConfig::set_users(std::size_t k) {
  if (k < 1) fail("users must be >= 1");
  if (requests.form == RequestModel::Form::kMatrix && requests.matrix.size() != k) {
    fail("cannot override users to " + std::to_string(k) +
         ": config pins a " + std::to_string(requests.matrix.size()) +
         "-user request matrix");
  }
  users = k;
}

GroundTruth ExperimentConfig::ground_truth(std::uint64_t seed) const {
  switch (requests.form) {
    case RequestModel::Form::kUniform:
      return GroundTruth::uniform(users, catalog.num_sfcs(), requests.uniform,
                                  failure_mean, seed);
    case RequestModel::Form::kPerSfc:
      return GroundTruth::per_sfc(users, requests.per_sfc, failure_mean, seed);
    case RequestModel::Form::kMatrix:
      break;
  }
  GroundTruth gt;
  gt.request_prob = requests.matrix;
  gt.failure_mean = failure_mean;
  gt.seed = seed;
  return gt;
}

}  // namespace sfcbackup
