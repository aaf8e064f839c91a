#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"
#include "vowelkit/dataset.hpp"
#include "vowelkit/error.hpp"
#include "vowelkit/lpc_formants.hpp"
#include "vowelkit/spectral.hpp"
#include "vowelkit/synth_oracle.hpp"

using namespace vowelkit;
using vowelkit::testing::read_file;
using vowelkit::testing::TempDir;

TEST_SUITE("synth_oracle") {

TEST_CASE("length and peak amplitude") {
  VowelSpec spec;
  spec.formants = {{631, 80}, {1049, 100}};
  for (double d : {0.0, 0.01, 0.5, 1.2345}) {
    spec.duration_s = d;
    CHECK(synth_vowel(spec).samples.size() == static_cast<std::size_t>(std::lround(d * 10000)));
  }
  spec.duration_s = 0.3;
  spec.amplitude = 0.42;
  const AudioSignal s = synth_vowel(spec);
  double peak = 0.0;
  for (double v : s.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(0.42));
  CHECK(s.sample_rate == 10000);

  spec.amplitude = 0.0;
  for (double v : synth_vowel(spec).samples) CHECK(v == 0.0);
}

TEST_CASE("invalid specifications") {
  VowelSpec spec;
  spec.formants = {{6000, 80}};
  CHECK_THROWS_AS(synth_vowel(spec), Error);
  spec.formants = {{500, 0}};
  CHECK_THROWS_AS(synth_vowel(spec), Error);
  spec.formants = {{500, 80}};
  spec.f0_hz = 0.0;
  CHECK_THROWS_AS(synth_vowel(spec), Error);
  CHECK_THROWS_AS(formant_table_preset("klingon"), Error);
}

TEST_CASE("resonator has unity DC gain and peaks at its centre frequency") {
  const Resonance r{1000.0, 80.0};
  const auto h = resonator_impulse_response(r, 10000, 4096);
  double dc = 0.0;
  for (double v : h) dc += v;
  CHECK(dc == doctest::Approx(1.0).epsilon(1e-6));
  const Spectrum s = dft_power(h, 4096, 10000);
  const auto peak = std::max_element(s.power.begin() + 1, s.power.end());
  const double peak_hz = static_cast<double>(peak - s.power.begin()) * s.bin_hz;
  CHECK(std::abs(peak_hz - 1000.0) <= 2 * s.bin_hz + 5.0);
}

TEST_CASE("output is periodic at f0") {
  VowelSpec spec;
  spec.formants = {{693, 80}, {1182, 100}};
  spec.f0_hz = 125.0;  // 80-sample period at 10 kHz
  const AudioSignal s = synth_vowel(spec);
  const std::vector<double> tail(s.samples.begin() + 2000, s.samples.end());
  const auto r = oracle::brute_autocorrelation(tail, 120);
  const auto best = std::max_element(r.begin() + 40, r.end());
  CHECK(best - r.begin() == 80);
}

TEST_CASE("recovered formants do not depend on f0") {
  for (const auto& [label, t] : default_formant_table()) {
    for (double f0 : {95.0, 120.0, 150.0, 180.0}) {
      VowelSpec spec;
      spec.formants = {{t.f1_hz, 80}, {t.f2_hz, 100}};
      spec.f0_hz = f0;
      const FormantEstimate est = estimate_formants(prepare(synth_vowel(spec)));
      CHECK(std::abs(est.f1 - t.f1_hz) <= 40.0);
      CHECK(std::abs(est.f2 - t.f2_hz) <= 40.0);
    }
  }
}

TEST_CASE("formant tables") {
  const FormantTable d = default_formant_table();
  CHECK(d.size() == 4);
  CHECK(d.at("ax").f1_hz == 631);
  CHECK(d.at("ax").f2_hz == 1049);
  CHECK(d.at("ae").f1_hz == 720);
  CHECK(d.at("ae").f2_hz == 1644);
  CHECK(d.at("aa").f1_hz == 573);
  CHECK(d.at("aa").f2_hz == 1311);
  CHECK(d.at("ah").f1_hz == 693);
  CHECK(d.at("ah").f2_hz == 1182);
  const FormantTable e = extended_formant_table();
  CHECK(e.size() == 7);
  for (const auto& [label, t] : d) CHECK(e.at(label).f1_hz == t.f1_hz);
  for (const auto& [label, t] : e) CHECK(default_label_set().count(label) == 1);
  CHECK(formant_table_preset("default").size() == 4);
  CHECK(formant_table_preset("extended").size() == 7);
}

TEST_CASE("corpus generation writes a loadable manifest deterministically") {
  TempDir a, b;
  SynthCorpusOptions opts;
  opts.n_per_label = 6;
  const auto ma = synth_corpus(default_formant_table(), opts, a.path());
  const auto mb = synth_corpus(default_formant_table(), opts, b.path());
  const Manifest m = load_manifest(ma);
  CHECK(m.entries.size() == 24);
  CHECK(m.n_excluded == 0);
  CHECK(read_file(ma) == read_file(mb));
  for (const auto& e : m.entries) {
    CHECK(read_file(e.path) == read_file(b.path() / e.source));
    const AudioSignal s = read_wav(e.path);
    CHECK(s.sample_rate == 16000);
    CHECK(s.samples.front() == 0.0);
    CHECK(s.samples.back() == 0.0);
  }
  opts.seed = 7;
  TempDir c;
  synth_corpus(default_formant_table(), opts, c.path());
  CHECK(read_file(c / "ax_0000.wav") != read_file(a / "ax_0000.wav"));
}

TEST_CASE("default corpus has 600 rows") {
  TempDir dir;
  const auto path = synth_corpus(default_formant_table(), SynthCorpusOptions{}, dir.path());
  const Manifest m = load_manifest(path);
  CHECK(m.n_rows == 600);
  CHECK(m.entries.size() == 600);
}

}  // TEST_SUITE
