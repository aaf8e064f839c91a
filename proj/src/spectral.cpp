#include "vowelkit/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "vowelkit/error.hpp"

namespace vowelkit {

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (max_lag >= x.size()) {
    throw Error(Errc::invalid_argument, "autocorrelation: max_lag " + std::to_string(max_lag) +
                                            " must be below the sequence length " +
                                            std::to_string(x.size()));
  }
  std::vector<double> r(max_lag + 1, 0.0);
  const std::size_t n = x.size();
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += x[i] * x[i + k];
    r[k] = acc;
  }
  return r;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw Error(Errc::invalid_argument, "fft size " + std::to_string(n) + " is not a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Twiddles evaluated directly rather than by recurrence to keep error flat in n.
        const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

Spectrum dft_power(std::span<const double> x, std::size_t fft_size, double sample_rate) {
  if (!is_power_of_two(fft_size)) {
    throw Error(Errc::invalid_argument,
                "fft size " + std::to_string(fft_size) + " is not a power of two");
  }
  if (x.empty() || fft_size < x.size()) {
    throw Error(Errc::invalid_argument, "fft size must cover a non-empty frame");
  }
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  fft_inplace(buf);

  Spectrum s;
  s.fft_size = fft_size;
  s.bin_hz = sample_rate / static_cast<double>(fft_size);
  s.power.resize(fft_size / 2 + 1);
  const double norm = 1.0 / static_cast<double>(x.size());
  for (std::size_t k = 0; k < s.power.size(); ++k) s.power[k] = std::norm(buf[k]) * norm;
  return s;
}

std::vector<double> dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::invalid_argument, "dct2 of an empty sequence");
  std::vector<double> out(n);
  const double a0 = std::sqrt(1.0 / n);
  const double ak = std::sqrt(2.0 / n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
    }
    out[k] = (k == 0 ? a0 : ak) * acc;
  }
  return out;
}

std::vector<double> dct3(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::invalid_argument, "dct3 of an empty sequence");
  std::vector<double> out(n);
  const double a0 = std::sqrt(1.0 / n);
  const double ak = std::sqrt(2.0 / n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = a0 * x[0];
    for (std::size_t k = 1; k < n; ++k) {
      acc += ak * x[k] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace vowelkit
