#include <cmath>
#include <cstdint>
#include <cstring>
#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "vowelkit/audio_io.hpp"
#include "vowelkit/error.hpp"
#include "vowelkit/lpc_formants.hpp"
#include "vowelkit/preprocess.hpp"
#include "vowelkit/spectral.hpp"
#include "vowelkit/synth_oracle.hpp"

using namespace vowelkit;
using vowelkit::testing::TempDir;

namespace {

// Hand-rolled RIFF encoder so reader tests do not depend on write_wav.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                      std::uint16_t bits, const std::string& payload) {
  std::string out;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
  };
  out += "RIFF";
  u32(static_cast<std::uint32_t>(36 + payload.size()));
  out += "WAVEfmt ";
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  out += "data";
  u32(static_cast<std::uint32_t>(payload.size()));
  out += payload;
  return out;
}

std::string pcm16(std::initializer_list<std::int16_t> values) {
  std::string s;
  for (std::int16_t v : values) {
    const auto u = static_cast<std::uint16_t>(v);
    s.push_back(static_cast<char>(u & 0xFF));
    s.push_back(static_cast<char>(u >> 8));
  }
  return s;
}

std::string float32(std::initializer_list<float> values) {
  std::string s;
  for (float f : values) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
  }
  return s;
}

// Integer PCM of the given depth for a waveform in [-1, 1).
std::string encode_int(const std::vector<double>& x, int bits) {
  std::string s;
  const double full = std::ldexp(1.0, bits - 1);
  for (double v : x) {
    auto q = static_cast<std::int64_t>(std::floor(v * full + 0.5));
    q = std::clamp<std::int64_t>(q, -static_cast<std::int64_t>(full), static_cast<std::int64_t>(full) - 1);
    if (bits == 8) {
      s.push_back(static_cast<char>(q + 128));
      continue;
    }
    const auto u = static_cast<std::uint64_t>(q);
    for (int i = 0; i < bits / 8; ++i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
  }
  return s;
}

std::size_t peak_bin(const std::vector<double>& x) {
  const Spectrum s = dft_power(x, next_power_of_two(x.size()));
  return static_cast<std::size_t>(std::max_element(s.power.begin() + 1, s.power.end()) - s.power.begin());
}

}  // namespace

TEST_SUITE("audio_io") {

TEST_CASE("16-bit full-scale positive sample scales by 1/32768") {
  TempDir dir;
  vowelkit::testing::write_file(dir / "one.wav", wav_bytes(1, 1, 44100, 16, pcm16({32767})));
  const AudioSignal s = read_wav(dir / "one.wav");
  CHECK(s.sample_rate == 44100);
  REQUIRE(s.samples.size() == 1);
  CHECK(s.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
}

TEST_CASE("16-bit zeros decode to exact zeros") {
  TempDir dir;
  std::string payload(200, '\0');
  vowelkit::testing::write_file(dir / "z.wav", wav_bytes(1, 1, 8000, 16, payload));
  const AudioSignal s = read_wav(dir / "z.wav");
  REQUIRE(s.samples.size() == 100);
  for (double v : s.samples) CHECK(v == 0.0);
}

TEST_CASE("stereo frames are averaged to mono") {
  TempDir dir;
  vowelkit::testing::write_file(dir / "st.wav", wav_bytes(3, 2, 16000, 32, float32({1.0f, 0.0f, -0.5f, 0.25f})));
  const AudioSignal s = read_wav(dir / "st.wav");
  REQUIRE(s.samples.size() == 2);
  CHECK(s.samples[0] == 0.5);
  CHECK(s.samples[1] == -0.125);
}

TEST_CASE("decode errors are distinguished") {
  TempDir dir;
  SUBCASE("missing file") {
    try {
      read_wav(dir / "nope.wav");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::not_found);
    }
  }
  SUBCASE("malformed header") {
    vowelkit::testing::write_file(dir / "bad.wav", "RIFX....WAVEjunk");
    try {
      read_wav(dir / "bad.wav");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::malformed);
    }
  }
  SUBCASE("missing data chunk") {
    std::string bytes = wav_bytes(1, 1, 8000, 16, pcm16({1, 2}));
    bytes.resize(36);  // cut after fmt
    vowelkit::testing::write_file(dir / "nodata.wav", bytes);
    CHECK_THROWS_AS(read_wav(dir / "nodata.wav"), Error);
  }
  SUBCASE("compressed encoding") {
    vowelkit::testing::write_file(dir / "adpcm.wav", wav_bytes(2, 1, 8000, 4, std::string(16, '\x11')));
    try {
      read_wav(dir / "adpcm.wav");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unsupported);
    }
  }
  SUBCASE("64-bit float is not accepted") {
    vowelkit::testing::write_file(dir / "f64.wav", wav_bytes(3, 1, 8000, 64, std::string(16, '\0')));
    CHECK_THROWS_AS(read_wav(dir / "f64.wav"), Error);
  }
}

TEST_CASE("decoding is scale-invariant across bit depths") {
  TempDir dir;
  std::vector<double> wave(300);
  for (std::size_t i = 0; i < wave.size(); ++i) wave[i] = 0.8 * std::sin(0.07 * static_cast<double>(i));
  std::vector<std::vector<double>> decoded;
  for (int bits : {8, 16, 24, 32}) {
    const auto path = dir / ("d" + std::to_string(bits) + ".wav");
    vowelkit::testing::write_file(path, wav_bytes(1, 1, 8000, static_cast<std::uint16_t>(bits), encode_int(wave, bits)));
    decoded.push_back(read_wav(path).samples);
  }
  // Each pair must agree within one quantization step of the coarser depth.
  const double step[] = {1.0 / 128, 1.0 / 32768, 1.0 / 8388608, 1.0 / 2147483648.0};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      for (std::size_t i = 0; i < wave.size(); ++i) {
        CHECK(std::abs(decoded[a][i] - decoded[b][i]) <= step[a]);
      }
    }
  }
}

TEST_CASE("write/read round trip is within one 16-bit step") {
  TempDir dir;
  AudioSignal sine{{}, 44100};
  for (int i = 0; i < 44100; ++i) sine.samples.push_back(0.9 * std::sin(2 * std::numbers::pi * 1000.0 * i / 44100.0));
  write_wav(sine, dir / "sine.wav");
  const AudioSignal back = read_wav(dir / "sine.wav");
  REQUIRE(back.samples.size() == sine.samples.size());
  CHECK(back.sample_rate == 44100);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.samples.size(); ++i) worst = std::max(worst, std::abs(back.samples[i] - sine.samples[i]));
  CHECK(worst <= 1.0 / 32768.0);
}

TEST_CASE("write_wav rejects empty signals and clips out-of-range samples") {
  TempDir dir;
  try {
    write_wav(AudioSignal{{}, 8000}, dir / "e.wav");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_signal);
    CHECK(std::string(e.what()) == "empty signal");
  }
  write_wav(AudioSignal{{1.5, -2.0, 0.0}, 8000}, dir / "clip.wav");
  const AudioSignal back = read_wav(dir / "clip.wav");
  CHECK(back.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(back.samples[1] == -1.0);
  CHECK(back.samples[2] == 0.0);
}

TEST_CASE("write_wav to an unwritable path fails") {
  TempDir dir;
  CHECK_THROWS_AS(write_wav(AudioSignal{{0.1}, 8000}, dir / "missing_dir" / "x.wav"), Error);
}

TEST_CASE("synthetic vowel formants survive a write/read round trip") {
  TempDir dir;
  VowelSpec spec;
  spec.formants = {{631, 80}, {1049, 100}};
  spec.f0_hz = 120;
  const AudioSignal vowel = synth_vowel(spec);
  write_wav(vowel, dir / "ax.wav");
  const AudioSignal back = read_wav(dir / "ax.wav");
  const FormantEstimate before = estimate_formants(prepare(vowel));
  const FormantEstimate after = estimate_formants(prepare(back));
  CHECK(std::abs(before.f1 - after.f1) <= 1.0);
  CHECK(std::abs(before.f2 - after.f2) <= 1.0);
}

TEST_CASE("resample at the source rate is the identity") {
  AudioSignal s{{0.1, -0.3, 0.7, 0.2, 1e-17}, 16000};
  const AudioSignal r = resample(s, 16000);
  CHECK(r.sample_rate == 16000);
  CHECK(r.samples == s.samples);
}

TEST_CASE("resample length follows the rate ratio") {
  AudioSignal s{std::vector<double>(400, 0.25), 20000};
  const AudioSignal r = resample(s, 10000);
  CHECK(r.sample_rate == 10000);
  CHECK(r.samples.size() >= 199);
  CHECK(r.samples.size() <= 201);
  CHECK(std::abs(r.duration_s() - s.duration_s()) <= 1.0 / 10000);

  const AudioSignal up = resample(AudioSignal{std::vector<double>(441, 0.0), 44100}, 48000);
  CHECK(std::abs(up.duration_s() - 0.01) <= 1.0 / 48000);
}

TEST_CASE("resampling keeps a pure tone in its DFT bin") {
  AudioSignal s{{}, 44100};
  for (int i = 0; i < 44100; ++i) s.samples.push_back(std::sin(2 * std::numbers::pi * 100.0 * i / 44100.0));
  const AudioSignal r = resample(s, 10000);
  const std::size_t fft = next_power_of_two(r.samples.size());
  const double bin_hz = 10000.0 / static_cast<double>(fft);
  const double peak_hz = static_cast<double>(peak_bin(r.samples)) * bin_hz;
  CHECK(std::abs(peak_hz - 100.0) <= bin_hz);
}

TEST_CASE("resampling property: tones below the target Nyquist stay within one bin") {
  for (double f : {250.0, 900.0, 1700.0, 3100.0, 4300.0}) {
    AudioSignal s{{}, 16000};
    for (int i = 0; i < 8000; ++i) s.samples.push_back(std::sin(2 * std::numbers::pi * f * i / 16000.0));
    const AudioSignal r = resample(s, 10000);
    const double bin_hz = 10000.0 / static_cast<double>(next_power_of_two(r.samples.size()));
    CHECK(std::abs(static_cast<double>(peak_bin(r.samples)) * bin_hz - f) <= bin_hz);
  }
}

TEST_CASE("resample rejects non-positive rates") {
  CHECK_THROWS_AS(resample(AudioSignal{{0.0}, 8000}, 0), Error);
}

}  // TEST_SUITE
