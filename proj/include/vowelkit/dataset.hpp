#ifndef VOWELKIT_DATASET_HPP
#define VOWELKIT_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace vowelkit {

enum class DurationClass { short_, long_ };
enum class AmplitudeClass { quiet, normal, loud };
enum class IntonationClass { level };

const char* to_string(DurationClass d);
const char* to_string(AmplitudeClass a);

/// ASCII corpus names: ax, ae, aa, ah, ee, uu, oo.
const std::set<std::string>& default_label_set();

struct CorpusEntry {
  std::filesystem::path path;  ///< resolved against the manifest's directory
  std::string source;          ///< path column as written in the manifest
  std::string phoneme;
  DurationClass duration = DurationClass::short_;
  AmplitudeClass amplitude = AmplitudeClass::normal;
  IntonationClass intonation = IntonationClass::level;
};

struct Manifest {
  std::vector<CorpusEntry> entries;  ///< manifest order
  std::size_t n_rows = 0;
  std::size_t n_excluded = 0;  ///< rows outside the selection rules
};

/// Reads `path,phoneme,duration,amplitude,intonation` CSV. Rows with a
/// nudge duration, amplitude sweep, or non-level intonation are counted and
/// skipped; unknown values and labels are errors.
Manifest load_manifest(const std::filesystem::path& path,
                       const std::set<std::string>& labels = default_label_set());

struct LabeledFeature {
  std::vector<double> features;
  std::string label;
};

using LabeledFeatures = std::vector<LabeledFeature>;

/// Per-label mean and population standard deviation of each feature dimension.
struct LabelStats {
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
};

std::map<std::string, LabelStats> label_statistics(const LabeledFeatures& data);

struct OutlierSplit {
  LabeledFeatures kept;
  LabeledFeatures discarded;
  std::vector<bool> kept_mask;  ///< parallel to the input
  std::map<std::string, LabelStats> stats;
};

/// Keeps a sample iff |x_i - mu_i| < k * sigma_i for every dimension i, with
/// per-label statistics computed once over the whole input.
OutlierSplit filter_outliers(const LabeledFeatures& data, double k_sigma = 1.5);

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct TrainTestSplit {
  LabeledFeatures train;
  LabeledFeatures test;
  std::vector<std::size_t> train_indices;  ///< into the input
  std::vector<std::size_t> test_indices;
};

/// Seeded shuffle (splitmix64 + Fisher-Yates), per label when stratified;
/// the first floor(n * train_fraction) go to train.
TrainTestSplit split(const LabeledFeatures& data, const SplitSpec& spec = {});

/// One line-delimited JSON record per file.
struct FeatureRecord {
  std::string path;
  std::string label;
  std::string kind;  ///< "formants" or "mfcc"
  std::vector<double> values;
  bool kept = true;
};

void write_feature_cache(const std::vector<FeatureRecord>& records,
                         const std::filesystem::path& path);
std::vector<FeatureRecord> read_feature_cache(const std::filesystem::path& path);

}  // namespace vowelkit

#endif  // VOWELKIT_DATASET_HPP
