#include "vowelkit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vowelkit/error.hpp"
#include "vowelkit/log.hpp"
#include "vowelkit/random.hpp"

namespace vowelkit {

const char* to_string(DurationClass d) { return d == DurationClass::short_ ? "short" : "long"; }

const char* to_string(AmplitudeClass a) {
  switch (a) {
    case AmplitudeClass::quiet: return "quiet";
    case AmplitudeClass::normal: return "normal";
    case AmplitudeClass::loud: return "loud";
  }
  return "?";
}

const std::set<std::string>& default_label_set() {
  static const std::set<std::string> labels{"aa", "ae", "ah", "ax", "ee", "oo", "uu"};
  return labels;
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Lower-case; '-' and ' ' fold to '_'.
std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c == '-' || c == ' ') out.push_back('_');
    else out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

enum class Selection { keep, exclude };

}  // namespace

Manifest load_manifest(const std::filesystem::path& path, const std::set<std::string>& labels) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::not_found, "cannot open manifest '" + path.string() + "'");

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw Error(Errc::malformed, "empty manifest");
  if (lines.front().size() >= 3 && lines.front().compare(0, 3, "\xEF\xBB\xBF") == 0) {
    lines.front().erase(0, 3);
  }

  const std::vector<std::string> header = split_csv_line(lines.front());
  static const char* kColumns[] = {"path", "phoneme", "duration", "amplitude", "intonation"};
  std::size_t col[5];
  for (std::size_t c = 0; c < 5; ++c) {
    auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw Error(Errc::malformed, std::string("manifest is missing column '") + kColumns[c] + "'");
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }
  if (lines.size() == 1) throw Error(Errc::malformed, "empty manifest");

  const std::filesystem::path base = path.parent_path();
  Manifest m;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string> f = split_csv_line(lines[row]);
    const std::string where = " on manifest line " + std::to_string(row + 1);
    if (f.size() < header.size()) throw Error(Errc::malformed, "too few fields" + where);
    ++m.n_rows;

    CorpusEntry e;
    e.phoneme = fold(f[col[1]]);
    if (!labels.contains(e.phoneme)) {
      throw Error(Errc::malformed, "unknown phoneme label '" + e.phoneme + "'" + where);
    }
    if (f[col[0]].empty()) throw Error(Errc::malformed, "empty path" + where);
    e.source = f[col[0]];
    e.path = e.source;
    if (e.path.is_relative()) e.path = base / e.path;

    Selection sel = Selection::keep;
    const std::string duration = fold(f[col[2]]);
    if (duration == "short") e.duration = DurationClass::short_;
    else if (duration == "long") e.duration = DurationClass::long_;
    else if (duration == "nudge") sel = Selection::exclude;
    else throw Error(Errc::malformed, "unknown duration '" + f[col[2]] + "'" + where);

    const std::string amplitude = fold(f[col[3]]);
    if (amplitude == "quiet") e.amplitude = AmplitudeClass::quiet;
    else if (amplitude == "normal") e.amplitude = AmplitudeClass::normal;
    else if (amplitude == "loud") e.amplitude = AmplitudeClass::loud;
    else if (amplitude == "quiet_to_loud" || amplitude == "loud_to_quiet") sel = Selection::exclude;
    else throw Error(Errc::malformed, "unknown amplitude '" + f[col[3]] + "'" + where);

    const std::string intonation = fold(f[col[4]]);
    if (intonation == "level") e.intonation = IntonationClass::level;
    else if (intonation == "rising" || intonation == "falling") sel = Selection::exclude;
    else throw Error(Errc::malformed, "unknown intonation '" + f[col[4]] + "'" + where);

    if (sel == Selection::exclude) {
      ++m.n_excluded;
    } else {
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

std::map<std::string, LabelStats> label_statistics(const LabeledFeatures& data) {
  std::map<std::string, LabelStats> stats;
  for (const LabeledFeature& s : data) {
    LabelStats& st = stats[s.label];
    if (st.count == 0) {
      st.mean.assign(s.features.size(), 0.0);
      st.stddev.assign(s.features.size(), 0.0);
    } else if (st.mean.size() != s.features.size()) {
      throw Error(Errc::dimension_mismatch, "inconsistent feature dimensionality");
    }
    ++st.count;
    for (std::size_t i = 0; i < s.features.size(); ++i) st.mean[i] += s.features[i];
  }
  for (auto& [label, st] : stats) {
    for (double& m : st.mean) m /= static_cast<double>(st.count);
  }
  for (const LabeledFeature& s : data) {
    LabelStats& st = stats[s.label];
    for (std::size_t i = 0; i < s.features.size(); ++i) {
      const double d = s.features[i] - st.mean[i];
      st.stddev[i] += d * d;
    }
  }
  for (auto& [label, st] : stats) {
    for (double& v : st.stddev) v = std::sqrt(v / static_cast<double>(st.count));
  }
  return stats;
}

OutlierSplit filter_outliers(const LabeledFeatures& data, double k_sigma) {
  OutlierSplit out;
  out.stats = label_statistics(data);
  for (const auto& [label, st] : out.stats) {
    if (st.count < 2) {
      throw Error(Errc::insufficient_data,
                  "outlier filter needs at least 2 samples of label '" + label + "'");
    }
    for (std::size_t i = 0; i < st.stddev.size(); ++i) {
      if (st.stddev[i] == 0.0) {
        log_warning("label '" + label + "' has zero spread in dimension " + std::to_string(i) +
                    "; only samples at the mean are kept");
      }
    }
  }

  out.kept_mask.reserve(data.size());
  for (const LabeledFeature& s : data) {
    const LabelStats& st = out.stats.at(s.label);
    // With zero spread the strict inequality admits only the exact mean.
    bool keep = true;
    for (std::size_t i = 0; i < s.features.size() && keep; ++i) {
      const double dev = std::abs(s.features[i] - st.mean[i]);
      keep = st.stddev[i] == 0.0 ? dev == 0.0 : dev < k_sigma * st.stddev[i];
    }
    out.kept_mask.push_back(keep);
    (keep ? out.kept : out.discarded).push_back(s);
  }
  return out;
}

TrainTestSplit split(const LabeledFeatures& data, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(Errc::invalid_argument, "train fraction must lie in (0, 1)");
  }
  if (data.empty()) throw Error(Errc::insufficient_data, "cannot split an empty data set");

  // Small epsilon so that e.g. 3 * (2/3) floors to 2.
  auto n_train_of = [&](std::size_t n) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_fraction + 1e-9));
  };

  SplitMix64 rng(spec.seed);
  TrainTestSplit out;
  auto assign = [&](std::vector<std::size_t> idx) {
    shuffle(idx, rng);
    const std::size_t n_train = n_train_of(idx.size());
    out.train_indices.insert(out.train_indices.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_indices.insert(out.test_indices.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  };

  if (spec.stratified) {
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < data.size(); ++i) by_label[data[i].label].push_back(i);
    for (const auto& [label, idx] : by_label) {
      if (idx.size() < 3 || n_train_of(idx.size()) == idx.size() || n_train_of(idx.size()) == 0) {
        throw Error(Errc::insufficient_data, "label '" + label + "' has too few samples (" +
                                                 std::to_string(idx.size()) + ") to split");
      }
    }
    for (auto& [label, idx] : by_label) assign(std::move(idx));
  } else {
    std::vector<std::size_t> idx(data.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t n_train = n_train_of(idx.size());
    if (n_train == 0 || n_train == idx.size()) {
      throw Error(Errc::insufficient_data, "too few samples to split");
    }
    assign(std::move(idx));
  }

  for (std::size_t i : out.train_indices) out.train.push_back(data[i]);
  for (std::size_t i : out.test_indices) out.test.push_back(data[i]);
  return out;
}

void write_feature_cache(const std::vector<FeatureRecord>& records,
                         const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  for (const FeatureRecord& r : records) {
    nlohmann::json j;
    j["path"] = r.path;
    j["label"] = r.label;
    j["kind"] = r.kind;
    j["values"] = r.values;
    j["kept"] = r.kept;
    f << j.dump() << '\n';
  }
  if (!f) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

std::vector<FeatureRecord> read_feature_cache(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::not_found, "cannot open '" + path.string() + "'");
  std::vector<FeatureRecord> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(f, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      FeatureRecord r;
      r.path = j.at("path").get<std::string>();
      r.label = j.at("label").get<std::string>();
      r.kind = j.at("kind").get<std::string>();
      r.values = j.at("values").get<std::vector<double>>();
      r.kept = j.value("kept", true);
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::malformed, "feature cache line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace vowelkit
