#include "vowelkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "vowelkit/error.hpp"
#include "vowelkit/mfcc.hpp"
#include "vowelkit/preprocess.hpp"
#include "vowelkit/svg_plot.hpp"

namespace vowelkit {

const char* to_string(FeatureKind kind) { return kind == FeatureKind::formants ? "formants" : "mfcc"; }

std::vector<Experiment> default_experiments() {
  return {
      {"formants_ax_ae_aa_ah", FeatureKind::formants, {"ax", "ae", "aa", "ah"}},
      {"mfcc_ax_ae_aa_ah", FeatureKind::mfcc, {"ax", "ae", "aa", "ah"}},
      {"mfcc_ax_ae_ah", FeatureKind::mfcc, {"ax", "ae", "ah"}},
      {"mfcc_ah_ee_uu_oo", FeatureKind::mfcc, {"ah", "ee", "uu", "oo"}},
      {"mfcc_ah_ee_uu", FeatureKind::mfcc, {"ah", "ee", "uu"}},
  };
}

namespace {

AudioSignal load_analysis_signal(const std::filesystem::path& path, const PipelineConfig& config) {
  const AudioSignal raw = read_wav(path);
  if (std::all_of(raw.samples.begin(), raw.samples.end(), [](double s) { return s == 0.0; })) {
    throw Error(Errc::silent_frame, "silent frame");
  }
  return resample(raw, config.analysis_rate_hz);
}

std::vector<double> mfcc_of(const AudioSignal& signal, const PreparedFrame& frame,
                             const PipelineConfig& config) {
  if (!config.mfcc.multiframe) return mfcc(frame, config.mfcc).coeffs;
  const AudioSignal trimmed = normalize_amplitude(
      trim_silence(signal, config.prepare.silence_rel_threshold, config.prepare.silence_chunk_ms));
  return mfcc_multiframe(trimmed, config.mfcc).coeffs;
}

}  // namespace

PreparedFrame analyze_file(const std::filesystem::path& path, const PipelineConfig& config) {
  return prepare(load_analysis_signal(path, config), config.prepare);
}

FormantEstimate file_formants(const std::filesystem::path& path, const PipelineConfig& config) {
  return estimate_formants(analyze_file(path, config), config.formants);
}

MfccVector file_mfcc(const std::filesystem::path& path, const PipelineConfig& config) {
  const AudioSignal signal = load_analysis_signal(path, config);
  const PreparedFrame frame = prepare(signal, config.prepare);
  return MfccVector{mfcc_of(signal, frame, config), std::nullopt};
}

FileFeatures extract_features(const CorpusEntry& entry, const PipelineConfig& config) {
  FileFeatures out;
  out.source = entry.source.empty() ? entry.path.string() : entry.source;
  out.label = entry.phoneme;
  try {
    const AudioSignal signal = load_analysis_signal(entry.path, config);
    const PreparedFrame frame = prepare(signal, config.prepare);
    out.formants = estimate_formants(frame, config.formants);
    out.mfcc = mfcc_of(signal, frame, config);
  } catch (const Error& e) {
    out.formants.reset();
    out.mfcc.reset();
    out.error = e.what();
  }
  return out;
}

std::vector<FileFeatures> extract_all(const std::vector<CorpusEntry>& entries,
                                      const PipelineConfig& config) {
  std::vector<FileFeatures> results(entries.size());
  std::size_t workers = config.jobs > 0 ? config.jobs : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(entries.size(), 1));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      results[i] = extract_features(entries[i], config);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

ExperimentReport run_pipeline(const std::filesystem::path& manifest_path,
                              const PipelineConfig& config,
                              const std::vector<Experiment>& experiments) {
  const Manifest manifest = load_manifest(manifest_path);

  ExperimentReport report;
  report.config = config_to_json(config);
  report.seed = config.split.seed;
  report.loaded = manifest.n_rows;
  report.excluded_selection = manifest.n_excluded;
  report.files = extract_all(manifest.entries, config);

  LabeledFeatures formant_data;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < report.files.size(); ++i) {
    const FileFeatures& f = report.files[i];
    if (!f.error.empty()) {
      ++report.failed_extraction;
      continue;
    }
    usable.push_back(i);
    formant_data.push_back({{f.formants->f1, f.formants->f2}, f.label});
  }
  if (usable.empty()) throw Error(Errc::insufficient_data, "zero usable files");

  const OutlierSplit filtered = filter_outliers(formant_data, config.outlier_k_sigma);
  report.filter_stats = filtered.stats;
  report.kept_stats = label_statistics(filtered.kept);
  report.kept_mask.assign(report.files.size(), false);
  for (std::size_t u = 0; u < usable.size(); ++u) report.kept_mask[usable[u]] = filtered.kept_mask[u];
  report.kept = filtered.kept.size();
  report.discarded_outliers = filtered.discarded.size();

  for (const Experiment& exp : experiments) {
    ExperimentResult r;
    r.experiment = exp;

    LabeledFeatures data;
    std::set<std::string> present;
    for (std::size_t i = 0; i < report.files.size(); ++i) {
      const FileFeatures& f = report.files[i];
      if (!report.kept_mask[i]) continue;
      if (std::find(exp.labels.begin(), exp.labels.end(), f.label) == exp.labels.end()) continue;
      present.insert(f.label);
      if (exp.kind == FeatureKind::formants) {
        data.push_back({{f.formants->f1, f.formants->f2}, f.label});
      } else {
        data.push_back({*f.mfcc, f.label});
      }
    }
    std::string missing;
    for (const std::string& l : exp.labels) {
      if (!present.contains(l)) missing += (missing.empty() ? "" : ", ") + l;
    }
    r.n_samples = data.size();
    if (!missing.empty()) {
      r.skip_reason = "no data for label(s): " + missing;
      report.experiments.push_back(std::move(r));
      continue;
    }

    try {
      const TrainTestSplit parts = split(data, config.split);
      const DecisionTree tree = DecisionTree::fit(parts.train, config.tree);
      r.eval = evaluate(tree, parts.test);
      r.n_train = parts.train.size();
      r.tree_depth = tree.depth();
      r.tree_leaves = tree.leaf_count();
      r.tree_jsonl = tree.to_jsonl();
      if (exp.kind == FeatureKind::mfcc) {
        std::vector<std::vector<double>> rows;
        rows.reserve(data.size());
        for (const LabeledFeature& s : data) rows.push_back(s.features);
        r.pca = pca_fit(rows, 2);
        for (const LabeledFeature& s : data) {
          r.pca_points.push_back(pca_project(*r.pca, s.features));
          r.pca_labels.push_back(s.label);
        }
      }
      r.ran = true;
    } catch (const Error& e) {
      r.skip_reason = e.what();
    }
    report.experiments.push_back(std::move(r));
  }
  return report;
}

namespace {

nlohmann::json stats_json(const std::map<std::string, LabelStats>& stats) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [label, st] : stats) {
    j[label] = {{"n", st.count},
                {"f1_mean_hz", st.mean.at(0)},
                {"f1_std_hz", st.stddev.at(0)},
                {"f2_mean_hz", st.mean.at(1)},
                {"f2_std_hz", st.stddev.at(1)}};
  }
  return j;
}

std::vector<std::string> plot_names(const ExperimentReport& report) {
  std::vector<std::string> names;
  if (report.kept > 0) names.push_back("formants.svg");
  for (const ExperimentResult& r : report.experiments) {
    if (r.ran && r.pca) names.push_back("pca_" + r.experiment.name + ".svg");
  }
  return names;
}

std::string fixed(double v, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["config"] = report.config;
  j["seed"] = report.seed;
  j["counts"] = {{"loaded", report.loaded},
                 {"excluded_selection", report.excluded_selection},
                 {"failed_extraction", report.failed_extraction},
                 {"excluded", report.excluded()},
                 {"discarded_outliers", report.discarded_outliers},
                 {"kept", report.kept}};
  j["formant_table"] = stats_json(report.kept_stats);
  j["outlier_filter"] = {{"k_sigma", report.config.value("outlier_k_sigma", 1.5)},
                         {"stats", stats_json(report.filter_stats)}};

  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < report.files.size(); ++i) {
    const FileFeatures& f = report.files[i];
    nlohmann::json e{{"path", f.source}, {"label", f.label}, {"kept", report.kept_mask[i]}};
    if (f.error.empty()) {
      e["f1_hz"] = f.formants->f1;
      e["f2_hz"] = f.formants->f2;
      e["mfcc"] = *f.mfcc;
    } else {
      e["error"] = f.error;
    }
    files.push_back(std::move(e));
  }
  j["files"] = std::move(files);

  nlohmann::json exps = nlohmann::json::array();
  for (const ExperimentResult& r : report.experiments) {
    nlohmann::json e{{"name", r.experiment.name},
                     {"feature_kind", to_string(r.experiment.kind)},
                     {"labels", r.experiment.labels},
                     {"ran", r.ran},
                     {"n_samples", r.n_samples}};
    if (!r.ran) {
      e["skip_reason"] = r.skip_reason;
      exps.push_back(std::move(e));
      continue;
    }
    e["n_train"] = r.n_train;
    e["n_test"] = r.eval.n_test;
    e["accuracy"] = r.eval.accuracy;
    e["confusion"] = {{"labels", r.eval.labels}, {"matrix", r.eval.confusion}};
    nlohmann::json nodes = nlohmann::json::array();
    std::istringstream lines(r.tree_jsonl);
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) nodes.push_back(nlohmann::json::parse(line));
    }
    e["tree"] = {{"depth", r.tree_depth}, {"leaves", r.tree_leaves}, {"records", std::move(nodes)}};
    if (r.pca) {
      nlohmann::json points = nlohmann::json::array();
      for (std::size_t i = 0; i < r.pca_points.size(); ++i) {
        points.push_back({{"label", r.pca_labels[i]}, {"pc1", r.pca_points[i][0]}, {"pc2", r.pca_points[i][1]}});
      }
      e["pca"] = {{"mean", r.pca->mean},
                  {"components", r.pca->components},
                  {"explained_variance", r.pca->explained_variance},
                  {"eigenvalues", r.pca->all_eigenvalues},
                  {"degenerate", r.pca->degenerate},
                  {"points", std::move(points)}};
    }
    exps.push_back(std::move(e));
  }
  j["experiments"] = std::move(exps);
  j["plots"] = plot_names(report);
  return j;
}

std::string report_markdown(const ExperimentReport& report) {
  std::ostringstream o;
  o << "# Vowel classification report\n\n";
  o << "Seed: " << report.seed << "\n\n";
  o << "## Counts\n\n";
  o << "| loaded | excluded (selection) | failed extraction | discarded (outliers) | kept |\n";
  o << "|---:|---:|---:|---:|---:|\n";
  o << "| " << report.loaded << " | " << report.excluded_selection << " | " << report.failed_extraction
    << " | " << report.discarded_outliers << " | " << report.kept << " |\n\n";

  o << "## Formants (kept files, Hz)\n\n";
  o << "| phoneme | n | F1 mean | F1 std | F2 mean | F2 std |\n|---|---:|---:|---:|---:|---:|\n";
  for (const auto& [label, st] : report.kept_stats) {
    o << "| " << label << " | " << st.count << " | " << fixed(st.mean[0], 0) << " | "
      << fixed(st.stddev[0], 0) << " | " << fixed(st.mean[1], 0) << " | " << fixed(st.stddev[1], 0)
      << " |\n";
  }
  o << "\n## Decision tree accuracy\n\n";
  o << "| experiment | features | labels | train | test | accuracy (%) |\n";
  o << "|---|---|---|---:|---:|---:|\n";
  for (const ExperimentResult& r : report.experiments) {
    std::string labels;
    for (const std::string& l : r.experiment.labels) labels += (labels.empty() ? "" : " ") + l;
    o << "| " << r.experiment.name << " | " << to_string(r.experiment.kind) << " | " << labels << " | ";
    if (r.ran) {
      o << r.n_train << " | " << r.eval.n_test << " | " << fixed(r.eval.accuracy, 1) << " |\n";
    } else {
      o << "- | - | skipped: " << r.skip_reason << " |\n";
    }
  }
  for (const ExperimentResult& r : report.experiments) {
    if (!r.ran) continue;
    o << "\n### Confusion: " << r.experiment.name << " (rows: true, columns: predicted)\n\n|   |";
    for (const std::string& l : r.eval.labels) o << ' ' << l << " |";
    o << "\n|---|";
    for (std::size_t i = 0; i < r.eval.labels.size(); ++i) o << "---:|";
    o << '\n';
    for (std::size_t i = 0; i < r.eval.labels.size(); ++i) {
      o << "| " << r.eval.labels[i] << " |";
      for (std::size_t c : r.eval.confusion[i]) o << ' ' << c << " |";
      o << '\n';
    }
  }
  const std::vector<std::string> plots = plot_names(report);
  if (!plots.empty()) {
    o << "\n## Plots\n\n";
    for (const std::string& p : plots) o << "- [" << p << "](" << p << ")\n";
  }
  return o.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const nlohmann::json j = report_to_json(report);
  write_text(out_dir / "report.json", j.dump(2) + "\n");
  written.push_back(out_dir / "report.json");
  write_text(out_dir / "report.md", report_markdown(report));
  written.push_back(out_dir / "report.md");

  std::vector<FeatureRecord> cache;
  for (std::size_t i = 0; i < report.files.size(); ++i) {
    const FileFeatures& f = report.files[i];
    if (!f.error.empty()) continue;
    cache.push_back({f.source, f.label, "formants", {f.formants->f1, f.formants->f2}, report.kept_mask[i]});
    cache.push_back({f.source, f.label, "mfcc", *f.mfcc, report.kept_mask[i]});
  }
  write_feature_cache(cache, out_dir / "features.jsonl");
  written.push_back(out_dir / "features.jsonl");

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  const nlohmann::json info{{"generated_at", stamp.str()}, {"report", "report.json"}};
  write_text(out_dir / "run_info.json", info.dump(2) + "\n");
  written.push_back(out_dir / "run_info.json");

  const std::vector<std::string> plots = plot_names(report);
  const bool any_pca = std::any_of(plots.begin(), plots.end(),
                                   [](const std::string& p) { return p.starts_with("pca_"); });
  if (report.kept > 0) {
    for (auto& p : plot_from_report(j, "formants", out_dir)) written.push_back(std::move(p));
  }
  if (any_pca) {
    for (auto& p : plot_from_report(j, "pca", out_dir)) written.push_back(std::move(p));
  }
  return written;
}

std::vector<std::filesystem::path> plot_from_report(const nlohmann::json& report,
                                                    const std::string& kind,
                                                    const std::filesystem::path& out_dir) {
  if (kind != "formants" && kind != "pca") {
    throw Error(Errc::invalid_argument, "unknown plot kind '" + kind + "' (expected formants or pca)");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> out;
  try {
    if (kind == "formants") {
      ScatterPlot plot{"First two formants", "F1 (Hz)", "F2 (Hz)", {}};
      for (const auto& f : report.at("files")) {
        if (!f.value("kept", false) || !f.contains("f1_hz")) continue;
        plot.points.push_back({f.at("f1_hz").get<double>(), f.at("f2_hz").get<double>(),
                               f.at("label").get<std::string>()});
      }
      if (plot.points.empty()) {
        throw Error(Errc::insufficient_data, "report has no kept formant data to plot");
      }
      write_svg(plot, out_dir / "formants.svg");
      out.push_back(out_dir / "formants.svg");
    } else if (kind == "pca") {
      for (const auto& e : report.at("experiments")) {
        if (!e.contains("pca")) continue;
        std::string labels;
        for (const auto& l : e.at("labels")) labels += (labels.empty() ? "" : ", ") + l.get<std::string>();
        ScatterPlot plot{"PCA of MFCC (" + labels + ")", "PC1", "PC2", {}};
        for (const auto& p : e.at("pca").at("points")) {
          plot.points.push_back({p.at("pc1").get<double>(), p.at("pc2").get<double>(),
                                 p.at("label").get<std::string>()});
        }
        const auto path = out_dir / ("pca_" + e.at("name").get<std::string>() + ".svg");
        write_svg(plot, path);
        out.push_back(path);
      }
      if (out.empty()) throw Error(Errc::insufficient_data, "report has no PCA data to plot");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("report: ") + e.what());
  }
  return out;
}

}  // namespace vowelkit
