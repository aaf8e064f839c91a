#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "vowelkit/error.hpp"
#include "vowelkit/mfcc.hpp"
#include "vowelkit/random.hpp"
#include "vowelkit/synth_oracle.hpp"

using namespace vowelkit;

namespace {

PreparedFrame vowel_frame(double f1, double f2, double f0 = 120.0) {
  VowelSpec spec;
  spec.formants = {{f1, 80}, {f2, 100}};
  spec.f0_hz = f0;
  return prepare(synth_vowel(spec));
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

TEST_SUITE("mfcc") {

TEST_CASE("mel scale reference values") {
  CHECK(hz_to_mel(0.0) == 0.0);
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  CHECK(hz_to_mel(700.0) == doctest::Approx(781.1728).epsilon(1e-6));
  CHECK(hz_to_mel(1000.0) == doctest::Approx(999.99).epsilon(1e-4));
  CHECK_THROWS_AS(hz_to_mel(-1.0), Error);
  for (double hz = 0.0; hz <= 8000.0; hz += 37.5) CHECK(mel_to_hz(hz_to_mel(hz)) == doctest::Approx(hz).epsilon(1e-12));
  double prev = -1.0;
  for (double hz = 0.0; hz <= 20000.0; hz += 100.0) {
    const double m = hz_to_mel(hz);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("filterbank structure at 2048 points and 10 kHz") {
  const MelFilterbank fb = build_filterbank(26, 2048, 10000, 0, 5000);
  CHECK(fb.n_filters == 26);
  CHECK(fb.n_bins == 1025);
  CHECK(fb.weights.size() == 26 * 1025);
  CHECK(fb.edge_bins.size() == 28);
  CHECK(fb.edge_bins.front() == 0);
  for (std::size_t i = 1; i < fb.edge_bins.size(); ++i) {
    CHECK(fb.edge_bins[i] > fb.edge_bins[i - 1]);
    CHECK(fb.edge_mels[i] - fb.edge_mels[i - 1] == doctest::Approx(fb.edge_mels[1] - fb.edge_mels[0]));
  }
  for (std::size_t j = 0; j < 26; ++j) {
    double row_max = 0.0;
    for (std::size_t k = 0; k < fb.n_bins; ++k) {
      const double w = fb.weight(j, k);
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
      if (k < fb.edge_bins[j] || k > fb.edge_bins[j + 2]) CHECK(w == 0.0);
      row_max = std::max(row_max, w);
    }
    CHECK(row_max == 1.0);
    CHECK(fb.weight(j, fb.edge_bins[j + 1]) == 1.0);
  }
  // Every bin strictly inside the band is covered by some filter.
  for (std::size_t k = fb.edge_bins.front() + 1; k < fb.edge_bins.back(); ++k) {
    double col = 0.0;
    for (std::size_t j = 0; j < 26; ++j) col += fb.weight(j, k);
    CHECK(col > 0.0);
  }
}

TEST_CASE("filterbank rejects degenerate configurations") {
  CHECK_THROWS_AS(build_filterbank(26, 64, 10000, 0, 5000), Error);
  CHECK_THROWS_AS(build_filterbank(26, 1000, 10000, 0, 5000), Error);
  CHECK_THROWS_AS(build_filterbank(26, 512, 10000, 0, 6000), Error);
  CHECK_THROWS_AS(build_filterbank(26, 512, 10000, 3000, 2000), Error);
  CHECK_THROWS_AS(build_filterbank(1, 512, 10000, 0, 5000), Error);
}

TEST_CASE("cached filterbank is shared and safe across threads") {
  const auto a = cached_filterbank(26, 512, 10000, 0, 5000);
  const auto b = cached_filterbank(26, 512, 10000, 0, 5000);
  CHECK(a.get() == b.get());
  std::vector<std::shared_ptr<const MelFilterbank>> got(8);
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < got.size(); ++i)
      threads.emplace_back([&got, i] { got[i] = cached_filterbank(20, 1024, 16000, 100, 7000); });
  }
  for (const auto& p : got) CHECK(p.get() == got.front().get());
}

TEST_CASE("coefficient count and finiteness") {
  const MfccVector v = mfcc(vowel_frame(631, 1049));
  CHECK(v.coeffs.size() == 13);
  for (double c : v.coeffs) CHECK(std::isfinite(c));

  SplitMix64 rng(6);
  PreparedFrame noise;
  noise.sample_rate = 10000;
  for (int i = 0; i < 400; ++i) noise.segment.push_back(rng.normal());
  const auto w = hamming_window(400);
  for (int i = 0; i < 400; ++i) noise.samples.push_back(noise.segment[i] * w[i]);
  for (double c : mfcc(noise).coeffs) CHECK(std::isfinite(c));
}

TEST_CASE("coefficients are invariant to input gain") {
  const PreparedFrame f = vowel_frame(720, 1644);
  const auto base = mfcc(f).coeffs;
  for (double c : {0.1, 0.37, 2.0, 12.0}) {
    PreparedFrame g = f;
    for (double& s : g.samples) s *= c;
    for (double& s : g.segment) s *= c;
    const auto scaled = mfcc(g).coeffs;
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(scaled[i] - base[i]) <= 1e-8);
  }
}

TEST_CASE("the log floor breaks gain invariance once energies fall below it") {
  const PreparedFrame f = vowel_frame(720, 1644);
  PreparedFrame g = f;
  for (double& s : g.samples) s *= 1e-4;
  for (double& s : g.segment) s *= 1e-4;
  const MfccTrace t = mfcc_trace(g);
  CHECK(*std::min_element(t.energies.begin(), t.energies.end()) < 1e-10);
  const auto base = mfcc(f).coeffs;
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) worst = std::max(worst, std::abs(t.coeffs[i] - base[i]));
  CHECK(worst > 1e-3);
}

TEST_CASE("dropping index zero removes the log-gain term from the cepstrum") {
  const PreparedFrame f = vowel_frame(573, 1311);
  PreparedFrame g = f;
  for (double& s : g.samples) s *= 3.0;
  for (double& s : g.segment) s *= 3.0;
  const auto a = mfcc_trace(f), b = mfcc_trace(g);
  REQUIRE(a.cepstrum.size() == 26);
  CHECK(b.cepstrum[0] - a.cepstrum[0] == doctest::Approx(std::sqrt(26.0) * std::log(9.0)).epsilon(1e-9));
}

TEST_CASE("stage wiring through the bypass hooks") {
  const PreparedFrame f = vowel_frame(693, 1182);
  MfccConfig cfg;
  cfg.bypass_filterbank = true;
  cfg.bypass_log_dct = true;
  const MfccTrace t = mfcc_trace(f, cfg);
  CHECK(t.coeffs == t.spectrum.power);
  CHECK(t.spectrum.fft_size == 512);
  CHECK(t.coeffs.size() == 257);
  CHECK(t.cepstrum.empty());

  // Filterbank only: energies equal the filterbank applied to the periodogram.
  MfccConfig fb_only;
  fb_only.bypass_log_dct = true;
  const MfccTrace u = mfcc_trace(f, fb_only);
  const MelFilterbank fb = build_filterbank(26, 512, 10000, 0, 5000);
  const auto expected = fb.apply(u.spectrum.power);
  REQUIRE(u.coeffs.size() == 26);
  for (std::size_t j = 0; j < 26; ++j) CHECK(u.coeffs[j] == doctest::Approx(expected[j]).epsilon(1e-12));

  // Full path: coefficients are DCT indices 1..13 of the floored log energies.
  const MfccTrace full = mfcc_trace(f);
  std::vector<double> logs;
  for (double e : full.energies) logs.push_back(std::log(std::max(e, 1e-10)));
  const auto c = dct2(logs);
  for (std::size_t i = 0; i < 13; ++i) CHECK(full.coeffs[i] == doctest::Approx(c[i + 1]).epsilon(1e-12));
}

TEST_CASE("pre-emphasis acts on the unwindowed segment") {
  const PreparedFrame f = vowel_frame(631, 1049);
  const MfccTrace t = mfcc_trace(f);
  const auto w = hamming_window(f.segment.size());
  for (std::size_t i = 1; i < f.segment.size(); ++i)
    CHECK(t.frame[i] == doctest::Approx((f.segment[i] - 0.97 * f.segment[i - 1]) * w[i]).epsilon(1e-12));

  MfccConfig off;
  off.preemph = 0.0;
  CHECK(mfcc_trace(f, off).frame == f.samples);
}

TEST_CASE("a distinct vowel is farther away than a perturbed copy of the same vowel") {
  const auto ah = mfcc(vowel_frame(693, 1182, 120)).coeffs;
  const auto ah_near = mfcc(vowel_frame(705, 1170, 130)).coeffs;
  const auto uu = mfcc(vowel_frame(378, 997, 120)).coeffs;
  CHECK(distance(ah, uu) > distance(ah, ah_near));
}

TEST_CASE("deterministic and silent-frame error") {
  const PreparedFrame f = vowel_frame(720, 1644);
  CHECK(mfcc(f).coeffs == mfcc(f).coeffs);

  PreparedFrame silent;
  silent.sample_rate = 10000;
  silent.samples.assign(400, 0.0);
  silent.segment.assign(400, 0.0);
  try {
    mfcc(silent);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::silent_frame);
  }
}

TEST_CASE("multiframe averaging") {
  VowelSpec spec;
  spec.formants = {{693, 80}, {1182, 100}};
  const AudioSignal s = synth_vowel(spec);
  const MfccVector v = mfcc_multiframe(s);
  CHECK(v.coeffs.size() == 13);
  for (double c : v.coeffs) CHECK(std::isfinite(c));
  CHECK_THROWS_AS(mfcc_multiframe(AudioSignal{std::vector<double>(100, 0.1), 10000}), Error);
  CHECK_THROWS_AS(mfcc_multiframe(AudioSignal{std::vector<double>(1000, 0.0), 10000}), Error);
}

}  // TEST_SUITE
