#include "vowelkit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vowelkit/error.hpp"

namespace vowelkit {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(Errc::invalid_argument, "config key '" + key + "': '" + v + "' is not a number");
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(Errc::invalid_argument, "config key '" + key + "': '" + v + "' is not an integer");
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  const long long n = parse_int(key, v);
  if (n < 0) throw Error(Errc::invalid_argument, "config key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw Error(Errc::invalid_argument, "config key '" + key + "': '" + v + "' is not a boolean");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"analysis_rate_hz",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const long long r = parse_int(k, v);
         if (r <= 0) throw Error(Errc::invalid_argument, "analysis_rate_hz must be positive");
         c.analysis_rate_hz = static_cast<int>(r);
       }},
      {"frame_duration_s", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.prepare.frame_duration_s = parse_double(k, v);
       }},
      {"silence_rel_threshold", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.prepare.silence_rel_threshold = parse_double(k, v);
       }},
      {"silence_chunk_ms", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.prepare.silence_chunk_ms = parse_double(k, v);
       }},
      {"stationarity_chunk_ms", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.prepare.stationarity_chunk_ms = parse_double(k, v);
       }},
      {"lpc_order",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.formants.lpc_order = lower(v) == "auto" ? 0 : static_cast<int>(parse_count(k, v));
       }},
      {"formant_min_hz", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.formants.min_hz = parse_double(k, v);
       }},
      {"formant_max_hz", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.formants.max_hz = parse_double(k, v);
       }},
      {"formant_max_bw_hz", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.formants.max_bandwidth_hz = parse_double(k, v);
       }},
      {"n_filters", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.n_filters = parse_count(k, v);
       }},
      {"n_cep", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.n_cep = parse_count(k, v);
       }},
      {"preemph", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.preemph = parse_double(k, v);
       }},
      {"low_hz", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.low_hz = parse_double(k, v);
       }},
      {"high_hz", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.high_hz = parse_double(k, v);
       }},
      {"log_floor", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.log_floor = parse_double(k, v);
       }},
      {"mfcc_multiframe", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mfcc.multiframe = parse_bool(k, v);
       }},
      {"train_fraction", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.split.train_fraction = parse_double(k, v);
       }},
      {"seed", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.split.seed = static_cast<std::uint64_t>(parse_count(k, v));
       }},
      {"stratified", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.split.stratified = parse_bool(k, v);
       }},
      {"max_depth",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const std::string l = lower(v);
         if (l == "none" || l == "null" || l == "unbounded") c.tree.max_depth.reset();
         else c.tree.max_depth = parse_count(k, v);
       }},
      {"min_samples_split", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.tree.min_samples_split = parse_count(k, v);
       }},
      {"outlier_k_sigma", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.outlier_k_sigma = parse_double(k, v);
       }},
      {"jobs", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.jobs = parse_count(k, v);
       }},
  };
  return table;
}

}  // namespace

void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(Errc::invalid_argument, "unknown config key '" + key + "'");
  it->second(config, key, trim(value));
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::not_found, "cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::string stripped = trim(text);
  if (!stripped.empty() && stripped.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(stripped);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::malformed, "config '" + path.string() + "': " + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_null()) v = "none";
      else v = value.dump();
      set_config_value(base, key, v);
    }
    return base;
  }

  std::istringstream lines(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::malformed, "config '" + path.string() + "' line " +
                                       std::to_string(line_no) + ": expected key=value");
    }
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["analysis_rate_hz"] = c.analysis_rate_hz;
  j["frame_duration_s"] = c.prepare.frame_duration_s;
  j["silence_rel_threshold"] = c.prepare.silence_rel_threshold;
  j["silence_chunk_ms"] = c.prepare.silence_chunk_ms;
  j["stationarity_chunk_ms"] = c.prepare.stationarity_chunk_ms;
  j["lpc_order"] = c.formants.lpc_order > 0 ? c.formants.lpc_order : auto_lpc_order(c.analysis_rate_hz);
  j["formant_min_hz"] = c.formants.min_hz;
  j["formant_max_hz"] = c.formants.max_hz;
  j["formant_max_bw_hz"] = c.formants.max_bandwidth_hz;
  j["n_filters"] = c.mfcc.n_filters;
  j["n_cep"] = c.mfcc.n_cep;
  j["preemph"] = c.mfcc.preemph;
  j["low_hz"] = c.mfcc.low_hz;
  j["high_hz"] = c.mfcc.high_hz > 0.0 ? c.mfcc.high_hz : c.analysis_rate_hz / 2.0;
  j["log_floor"] = c.mfcc.log_floor;
  j["mfcc_multiframe"] = c.mfcc.multiframe;
  j["train_fraction"] = c.split.train_fraction;
  j["seed"] = c.split.seed;
  j["stratified"] = c.split.stratified;
  j["max_depth"] = c.tree.max_depth ? nlohmann::json(*c.tree.max_depth) : nlohmann::json(nullptr);
  j["min_samples_split"] = c.tree.min_samples_split;
  j["outlier_k_sigma"] = c.outlier_k_sigma;
  return j;
}

}  // namespace vowelkit
