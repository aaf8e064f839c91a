#ifndef VOWELKIT_SPECTRAL_HPP
#define VOWELKIT_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>

namespace vowelkit {

/// One-sided power spectrum over bins 0..fft_size/2.
struct Spectrum {
  std::vector<double> power;
  double bin_hz = 0.0;
  std::size_t fft_size = 0;
};

/// Biased autocorrelation r[k] = sum_n x[n] x[n+k], k = 0..max_lag.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// In-place iterative radix-2 FFT (forward, no scaling). Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// Periodogram of x zero-padded to fft_size: |X[k]|^2 / len(x).
/// sample_rate only sets bin_hz; pass 0 when it does not matter.
Spectrum dft_power(std::span<const double> x, std::size_t fft_size, double sample_rate = 0.0);

/// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct2(std::span<const double> x);
std::vector<double> dct3(std::span<const double> x);

}  // namespace vowelkit

#endif  // VOWELKIT_SPECTRAL_HPP
