#include "vowelkit/audio_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "vowelkit/error.hpp"
#include "vowelkit/log.hpp"

namespace vowelkit {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const FormatChunk& fmt) {
  if (fmt.format == kFormatFloat) {
    float f;
    std::uint32_t bits = le32(p);
    std::memcpy(&f, &bits, sizeof f);
    return static_cast<double>(f);
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return static_cast<std::int16_t>(le16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(le32(p)) / 2147483648.0;
  }
  return 0.0;
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::not_found, "cannot open '" + path.string() + "'");
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in '" + path.string() + "'";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(Errc::malformed, "not a RIFF/WAVE file" + where);
  }

  FormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    // Some writers leave a streaming placeholder size on the data chunk.
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw Error(Errc::malformed, "truncated fmt chunk" + where);
      const unsigned char* f = bytes.data() + body;
      fmt.format = le16(f);
      fmt.channels = le16(f + 2);
      fmt.sample_rate = le32(f + 4);
      fmt.bits = le16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 26) throw Error(Errc::malformed, "truncated extensible fmt chunk" + where);
        fmt.format = le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, avail);
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw Error(Errc::malformed, "missing fmt chunk" + where);
  if (data == nullptr) throw Error(Errc::malformed, "missing data chunk" + where);
  if (fmt.sample_rate == 0) throw Error(Errc::malformed, "zero sample rate" + where);

  const bool int_ok = fmt.format == kFormatPcm &&
                      (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  const bool float_ok = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!int_ok && !float_ok) {
    throw Error(Errc::unsupported, "unsupported encoding (format " + std::to_string(fmt.format) +
                                       ", " + std::to_string(fmt.bits) + " bits)" + where);
  }
  if (fmt.channels != 1 && fmt.channels != 2) {
    throw Error(Errc::unsupported,
                "unsupported channel count " + std::to_string(fmt.channels) + where);
  }

  const std::size_t sample_bytes = fmt.bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt.channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw Error(Errc::malformed, "empty data chunk" + where);

  AudioSignal signal;
  signal.sample_rate = static_cast<int>(fmt.sample_rate);
  signal.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) acc += decode_sample(p + c * sample_bytes, fmt);
    signal.samples[i] = acc / fmt.channels;
  }
  return signal;
}

void write_wav(const AudioSignal& signal, const std::filesystem::path& path) {
  if (signal.samples.empty()) throw Error(Errc::empty_signal, "empty signal");
  if (signal.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");

  std::size_t clipped = 0;
  std::vector<unsigned char> out;
  const auto n = static_cast<std::uint32_t>(signal.samples.size());
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put32(out, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, 2 * n);
  for (double s : signal.samples) {
    if (s > 1.0 || s < -1.0) {
      ++clipped;
      s = std::clamp(s, -1.0, 1.0);
    }
    const long q = std::lround(s * 32768.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
  }
  if (clipped > 0) {
    log_warning(std::to_string(clipped) + " samples clipped while writing '" + path.string() + "'");
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

AudioSignal resample(const AudioSignal& signal, int target_rate) {
  if (target_rate <= 0) throw Error(Errc::invalid_argument, "target rate must be positive");
  if (target_rate == signal.sample_rate) return signal;
  if (signal.samples.empty()) return AudioSignal{{}, target_rate};

  const double ratio = static_cast<double>(target_rate) / signal.sample_rate;
  const std::vector<double>* source = &signal.samples;
  std::vector<double> filtered;

  if (ratio < 1.0) {
    // Low-pass just below the new Nyquist; Blackman-windowed sinc, zero phase.
    constexpr double pi = std::numbers::pi;
    const double cutoff = 0.5 * ratio * 0.9;  // cycles per input sample
    const int half = static_cast<int>(std::ceil(4.0 / cutoff));
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
      const double x = 2.0 * cutoff * k;
      const double sinc = k == 0 ? 1.0 : std::sin(pi * x) / (pi * x);
      const double t = static_cast<double>(k + half) / (2 * half);
      const double w = 0.42 - 0.5 * std::cos(2 * pi * t) + 0.08 * std::cos(4 * pi * t);
      taps[k + half] = 2.0 * cutoff * sinc * w;
      sum += taps[k + half];
    }
    for (double& t : taps) t /= sum;

    const auto n = static_cast<long>(signal.samples.size());
    filtered.assign(signal.samples.size(), 0.0);
    for (long i = 0; i < n; ++i) {
      const long lo = std::max(-static_cast<long>(half), -i);
      const long hi = std::min(static_cast<long>(half), n - 1 - i);
      double acc = 0.0;
      for (long k = lo; k <= hi; ++k) acc += taps[k + half] * signal.samples[i + k];
      filtered[i] = acc;
    }
    source = &filtered;
  }

  const std::size_t in_n = source->size();
  const auto out_n = static_cast<std::size_t>(
      std::max<long>(1, std::lround(static_cast<double>(in_n) * ratio)));
  AudioSignal out;
  out.sample_rate = target_rate;
  out.samples.resize(out_n);
  const double step = static_cast<double>(signal.sample_rate) / target_rate;
  for (std::size_t i = 0; i < out_n; ++i) {
    const double t = static_cast<double>(i) * step;
    const auto j = static_cast<std::size_t>(t);
    if (j + 1 >= in_n) {
      out.samples[i] = (*source)[in_n - 1];
    } else {
      const double frac = t - static_cast<double>(j);
      out.samples[i] = (1.0 - frac) * (*source)[j] + frac * (*source)[j + 1];
    }
  }
  return out;
}

}  // namespace vowelkit
