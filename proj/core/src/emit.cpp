#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "sfcbackup/harness.hpp"

namespace sfcbackup {

namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) +
                             ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  return parse_number<double>(text, line_no);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const std::vector<RunTrace>& traces) {
  os << kCsvHeader << '\n';
  for (const RunTrace& trace : traces) {
    for (const TraceRow& r : trace.rows) {
      os << r.t << ',' << to_string(r.policy) << ',' << r.seed << ','
         << format_double(r.realized_reward) << ','
         << format_double(r.expected_reward) << ',' << r.remaining_resource
         << ',' << r.num_deployed << ','
         << (r.oracle_value ? format_double(*r.oracle_value) : "") << ','
         << (r.regret ? format_double(*r.regret) : "") << '\n';
    }
  }
}

void write_jsonl(std::ostream& os, const std::vector<RunTrace>& traces) {
  for (const RunTrace& trace : traces) {
    for (const TraceRow& r : trace.rows) {
      json j;
      j["t"] = r.t;
      j["policy"] = std::string(to_string(r.policy));
      j["seed"] = r.seed;
      j["realized_reward"] = r.realized_reward;
      j["expected_reward"] = r.expected_reward;
      j["remaining_resource"] = r.remaining_resource;
      j["num_deployed"] = r.num_deployed;
      j["oracle_value"] = r.oracle_value ? json(*r.oracle_value) : json(nullptr);
      j["regret"] = r.regret ? json(*r.regret) : json(nullptr);
      os << j.dump() << '\n';
    }
  }
}

std::string summary_json(const std::vector<RunTrace>& traces) {
  json runs = json::array();
  for (const RunTrace& t : traces) {
    runs.push_back({
        {"policy", std::string(to_string(t.policy))},
        {"seed", t.seed},
        {"slots", t.rows.size()},
        {"total_capacity", t.total_capacity},
        {"time_average_reward", t.aggregates.mean_realized_reward},
        {"mean_expected_reward", t.aggregates.mean_expected_reward},
        {"mean_remaining_resource", t.aggregates.mean_remaining_resource},
        {"mean_num_deployed", t.aggregates.mean_num_deployed},
        {"mean_regret", t.aggregates.mean_regret},
        {"observation_hash", t.observation_hash},
    });
  }
  json policies = json::array();
  for (const PolicySummary& s : summarize(traces)) {
    policies.push_back({
        {"policy", std::string(to_string(s.policy))},
        {"runs", s.runs},
        {"mean_reward", s.mean_reward},
        {"std_reward", s.std_reward},
        {"mean_expected_reward", s.mean_expected_reward},
        {"mean_remaining_resource", s.mean_remaining},
        {"std_remaining_resource", s.std_remaining},
        {"mean_num_deployed", s.mean_deployed},
        {"std_num_deployed", s.std_deployed},
        {"mean_regret", s.mean_regret},
    });
  }
  return json{{"runs", runs}, {"policies", policies}}.dump(2) + "\n";
}

std::string learner_state_jsonl(const SlotEvent& e) {
  const Learners* l = e.engine.learners();
  if (l == nullptr) return {};
  const auto finite_or_null = [](std::span<const double> xs) {
    json out = json::array();
    for (double x : xs) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
  };
  json j;
  j["policy"] = std::string(to_string(e.policy));
  j["seed"] = e.seed;
  j["t"] = e.t;
  j["c"] = std::vector<std::uint64_t>(l->popularity.counts().begin(), l->popularity.counts().end());
  j["q_bar"] = finite_or_null(l->popularity.means());
  j["q_tilde"] = finite_or_null(l->popularity.current_estimate());
  j["h"] = std::vector<std::uint64_t>(l->failure.counts().begin(), l->failure.counts().end());
  j["v_bar"] = finite_or_null(l->failure.means());
  j["v_tilde"] = finite_or_null(l->failure.current_estimate());
  return j.dump() + "\n";
}

std::vector<TraceRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": expected 9 fields");
    }
    TraceRow r;
    r.t = parse_number<std::uint64_t>(f[0], line_no);
    const auto kind = parse_policy(f[1]);
    if (!kind) {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": unknown policy");
    }
    r.policy = *kind;
    r.seed = parse_number<std::uint64_t>(f[2], line_no);
    r.realized_reward = parse_number<double>(f[3], line_no);
    r.expected_reward = parse_number<double>(f[4], line_no);
    r.remaining_resource = parse_number<std::int64_t>(f[5], line_no);
    r.num_deployed = parse_number<std::size_t>(f[6], line_no);
    r.oracle_value = parse_optional(f[7], line_no);
    r.regret = parse_optional(f[8], line_no);
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::filesystem::path> emit(const std::vector<RunTrace>& traces,
                                        const std::filesystem::path& target,
                                        OutputFormat format) {
  namespace fs = std::filesystem;
  const std::string trace_name =
      format == OutputFormat::kCsv ? "trace.csv" : "trace.jsonl";

  const std::string spelled = target.string();
  const bool as_dir = fs::is_directory(target) ||
                      (!spelled.empty() && (spelled.back() == '/' || spelled.back() == '\\'));

  fs::path trace_path, summary_path;
  std::error_code ec;
  if (as_dir) {
    fs::create_directories(target, ec);
    if (ec) {
      throw std::runtime_error("cannot create directory '" + spelled +
                               "': " + ec.message());
    }
    trace_path = target / trace_name;
    summary_path = target / "summary.json";
  } else {
    if (target.has_parent_path()) {
      fs::create_directories(target.parent_path(), ec);
      if (ec) {
        throw std::runtime_error("cannot create directory '" +
                                 target.parent_path().string() + "': " + ec.message());
      }
    }
    trace_path = target;
    summary_path = fs::path(spelled + ".summary.json");
  }

  {
    auto out = open_for_write(trace_path);
    if (format == OutputFormat::kCsv) {
      write_csv(out, traces);
    } else {
      write_jsonl(out, traces);
    }
    check_written(out, trace_path);
  }
  {
    auto out = open_for_write(summary_path);
    out << summary_json(traces);
    check_written(out, summary_path);
  }
  return {trace_path, summary_path};
}

}  // namespace sfcbackup
