#ifndef VOWELKIT_CONFIG_HPP
#define VOWELKIT_CONFIG_HPP

#include <filesystem>
#include <string>

#include "json.hpp"
#include "vowelkit/classifier_dtc.hpp"
#include "vowelkit/dataset.hpp"
#include "vowelkit/lpc_formants.hpp"
#include "vowelkit/mfcc.hpp"
#include "vowelkit/preprocess.hpp"

namespace vowelkit {

struct PipelineConfig {
  int analysis_rate_hz = 10000;
  PrepareConfig prepare;
  FormantConfig formants;
  MfccConfig mfcc;
  SplitSpec split;
  TreeParams tree;
  double outlier_k_sigma = 1.5;
  std::size_t jobs = 0;  ///< worker threads; 0 = hardware concurrency. Never affects output.
};

/// Sets one flat key (e.g. "lpc_order", "seed"). Throws on unknown keys or bad values.
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

/// Reads either a flat JSON object or `key = value` lines ('#' starts a comment).
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Every output-affecting key with its effective value (jobs is omitted).
nlohmann::json config_to_json(const PipelineConfig& config);

}  // namespace vowelkit

#endif  // VOWELKIT_CONFIG_HPP
