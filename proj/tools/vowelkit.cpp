// vowelkit: formant / MFCC extraction and vowel classification experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vowelkit/config.hpp"
#include "vowelkit/error.hpp"
#include "vowelkit/pipeline.hpp"
#include "vowelkit/synth_oracle.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(vowelkit::Errc code) {
  switch (code) {
    case vowelkit::Errc::invalid_argument:
      return kExitUsage;
    case vowelkit::Errc::unstable_model:
    case vowelkit::Errc::numeric:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

vowelkit::PipelineConfig make_config(const std::string& config_path) {
  vowelkit::PipelineConfig config;
  if (!config_path.empty()) config = vowelkit::load_config(config_path, config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vowel formant/MFCC analysis and decision-tree classification"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Config file (JSON or key=value)");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every experiment over a corpus manifest");
  std::string manifest, out_dir;
  std::uint64_t seed = 42;
  std::size_t jobs = 0;
  bool no_stratify = false;
  pipeline->add_option("--manifest", manifest, "Corpus manifest CSV")->required();
  pipeline->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = pipeline->add_option("--seed", seed, "Split seed (default 42)");
  pipeline->add_option("--jobs", jobs, "Worker threads (default: all CPUs)");
  pipeline->add_flag("--no-stratify", no_stratify, "Shuffle all samples together when splitting");
  pipeline->add_option("--config", config_path, "Config file (JSON or key=value)");

  // formants
  auto* formants = app.add_subcommand("formants", "Print F1 and F2 of a WAV file");
  std::string wav_path;
  bool as_json = false;
  formants->add_option("file", wav_path, "WAV file")->required();
  formants->add_flag("--json", as_json, "Machine-readable output");
  formants->add_option("--config", config_path, "Config file (JSON or key=value)");

  // mfcc
  auto* mfcc_cmd = app.add_subcommand("mfcc", "Print the MFCC vector of a WAV file");
  mfcc_cmd->add_option("file", wav_path, "WAV file")->required();
  mfcc_cmd->add_flag("--json", as_json, "Machine-readable output");
  mfcc_cmd->add_option("--config", config_path, "Config file (JSON or key=value)");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic vowel corpus and manifest");
  std::string preset = "default";
  vowelkit::SynthCorpusOptions synth_opts;
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--n", synth_opts.n_per_label, "Files per label (default 150)");
  synth->add_option("--jitter", synth_opts.jitter_hz, "Formant jitter sigma in Hz (default 40)")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opts.seed, "Seed (default 42)");
  synth->add_option("--preset", preset, "Formant table: default | extended");
  synth->add_option("--rate", synth_opts.sample_rate, "Sample rate of the written files (default 16000)");

  // plot
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a report.json");
  std::string report_path, kind, plot_out;
  plot->add_option("--report", report_path, "report.json written by `pipeline`")->required();
  plot->add_option("--kind", kind, "formants | pca")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*pipeline) {
      vowelkit::PipelineConfig config = make_config(config_path);
      if (seed_opt->count() > 0) config.split.seed = seed;
      if (jobs > 0) config.jobs = jobs;
      if (no_stratify) config.split.stratified = false;
      const vowelkit::ExperimentReport report = vowelkit::run_pipeline(manifest, config);
      vowelkit::write_report(report, out_dir);
      std::cout << vowelkit::report_markdown(report);
      std::cout << "\nReport written to " << (std::filesystem::path(out_dir) / "report.json").string()
                << '\n';
    } else if (*formants) {
      const vowelkit::PipelineConfig config = make_config(config_path);
      const vowelkit::FormantEstimate est = vowelkit::file_formants(wav_path, config);
      const int order = config.formants.lpc_order > 0 ? config.formants.lpc_order
                                                      : vowelkit::auto_lpc_order(config.analysis_rate_hz);
      if (as_json) {
        nlohmann::json j{{"file", wav_path},
                         {"f1_hz", est.f1},
                         {"f2_hz", est.f2},
                         {"bandwidths_hz", est.bandwidths},
                         {"lpc_order", order},
                         {"analysis_rate_hz", config.analysis_rate_hz}};
        std::cout << j.dump() << '\n';
      } else {
        std::printf("F1 = %.1f Hz\nF2 = %.1f Hz\nLPC order: %d (analysis rate %d Hz)\n", est.f1,
                    est.f2, order, config.analysis_rate_hz);
      }
    } else if (*mfcc_cmd) {
      const vowelkit::PipelineConfig config = make_config(config_path);
      const vowelkit::MfccVector v = vowelkit::file_mfcc(wav_path, config);
      if (as_json) {
        std::cout << nlohmann::json{{"file", wav_path}, {"mfcc", v.coeffs}}.dump() << '\n';
      } else {
        for (std::size_t i = 0; i < v.coeffs.size(); ++i) std::printf("c%zu = %.6f\n", i + 1, v.coeffs[i]);
      }
    } else if (*synth) {
      const auto path = vowelkit::synth_corpus(vowelkit::formant_table_preset(preset), synth_opts, out_dir);
      std::cout << path.string() << '\n';
    } else if (*plot) {
      std::ifstream in(report_path);
      if (!in) throw vowelkit::Error(vowelkit::Errc::not_found, "cannot open '" + report_path + "'");
      nlohmann::json report;
      try {
        report = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw vowelkit::Error(vowelkit::Errc::malformed, std::string("report: ") + e.what());
      }
      const std::filesystem::path dir =
          plot_out.empty() ? std::filesystem::path(report_path).parent_path() : std::filesystem::path(plot_out);
      for (const auto& p : vowelkit::plot_from_report(report, kind, dir)) std::cout << p.string() << '\n';
    }
  } catch (const vowelkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
