#ifndef VOWELKIT_PIPELINE_HPP
#define VOWELKIT_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vowelkit/audio_io.hpp"
#include "vowelkit/classifier_dtc.hpp"
#include "vowelkit/config.hpp"
#include "vowelkit/dataset.hpp"
#include "vowelkit/lpc_formants.hpp"
#include "vowelkit/pca.hpp"

namespace vowelkit {

enum class FeatureKind { formants, mfcc };
const char* to_string(FeatureKind kind);

struct Experiment {
  std::string name;
  FeatureKind kind;
  std::vector<std::string> labels;
};

/// The five comparisons: formants and MFCC on ax/ae/aa/ah, MFCC on ax/ae/ah,
/// MFCC on ah/ee/uu/oo and on ah/ee/uu.
std::vector<Experiment> default_experiments();

/// Decoded file resampled to the analysis rate and prepared. An all-zero
/// recording raises Errc::silent_frame.
PreparedFrame analyze_file(const std::filesystem::path& path, const PipelineConfig& config);

/// Formants of a single file (the `formants` subcommand).
FormantEstimate file_formants(const std::filesystem::path& path, const PipelineConfig& config);

/// MFCC of a single file; honours config.mfcc.multiframe.
MfccVector file_mfcc(const std::filesystem::path& path, const PipelineConfig& config);

struct FileFeatures {
  std::string source;  ///< manifest path column
  std::string label;
  std::optional<FormantEstimate> formants;
  std::optional<std::vector<double>> mfcc;
  std::string error;  ///< empty on success
};

FileFeatures extract_features(const CorpusEntry& entry, const PipelineConfig& config);

/// Feature extraction over all entries with a bounded worker pool; the
/// result is in entry order regardless of scheduling.
std::vector<FileFeatures> extract_all(const std::vector<CorpusEntry>& entries,
                                      const PipelineConfig& config);

struct ExperimentResult {
  Experiment experiment;
  bool ran = false;
  std::string skip_reason;
  std::size_t n_samples = 0;
  std::size_t n_train = 0;
  EvalResult eval;
  std::size_t tree_depth = 0;
  std::size_t tree_leaves = 0;
  std::string tree_jsonl;
  std::optional<PcaModel> pca;
  std::vector<std::vector<double>> pca_points;  ///< parallel to pca_labels
  std::vector<std::string> pca_labels;
};

struct ExperimentReport {
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::size_t loaded = 0;              ///< manifest rows
  std::size_t excluded_selection = 0;  ///< rows outside the corpus selection rules
  std::size_t failed_extraction = 0;
  std::size_t discarded_outliers = 0;
  std::size_t kept = 0;
  std::vector<FileFeatures> files;     ///< usable + failed, manifest order
  std::vector<bool> kept_mask;         ///< parallel to files (false for failures)
  std::map<std::string, LabelStats> filter_stats;  ///< over all usable files
  std::map<std::string, LabelStats> kept_stats;    ///< formant table over kept files
  std::vector<ExperimentResult> experiments;

  std::size_t excluded() const { return excluded_selection + failed_extraction; }
};

ExperimentReport run_pipeline(const std::filesystem::path& manifest_path,
                              const PipelineConfig& config,
                              const std::vector<Experiment>& experiments = default_experiments());

/// Canonical JSON: sorted keys, no timestamps.
nlohmann::json report_to_json(const ExperimentReport& report);
std::string report_markdown(const ExperimentReport& report);

/// Writes report.json, report.md, features.jsonl, run_info.json and the
/// plots into out_dir. Returns the paths written.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& out_dir);

/// Regenerates plots from a report.json. kind is "formants" or "pca".
std::vector<std::filesystem::path> plot_from_report(const nlohmann::json& report,
                                                    const std::string& kind,
                                                    const std::filesystem::path& out_dir);

}  // namespace vowelkit

#endif  // VOWELKIT_PIPELINE_HPP
