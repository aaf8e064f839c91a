#ifndef VOWELKIT_LPC_FORMANTS_HPP
#define VOWELKIT_LPC_FORMANTS_HPP

#include <span>
#include <vector>

#include "vowelkit/preprocess.hpp"

namespace vowelkit {

/// All-pole model s[n] ~ sum_k coeffs[k-1] * s[n-k].
struct LpcModel {
  int order = 0;
  std::vector<double> coeffs;  ///< a_1..a_M
  double gain = 0.0;           ///< sqrt(residual_energy)
  double residual_energy = 0.0;
};

struct FormantEstimate {
  double f1 = 0.0;
  double f2 = 0.0;
  std::vector<double> bandwidths;  ///< Hz, for f1 and f2
};

struct FormantConfig {
  int lpc_order = 0;  ///< 0 selects 2 + sample_rate / 1000
  double min_hz = 90.0;
  double max_hz = 4000.0;
  double max_bandwidth_hz = 400.0;
};

/// Classical order rule: one pole pair per kHz plus two.
int auto_lpc_order(int sample_rate);

/// Levinson-Durbin solution of the autocorrelation normal equations.
/// Throws Errc::silent_frame when r[0] == 0 and Errc::unstable_model when a
/// reflection coefficient reaches magnitude 1.
LpcModel lpc_from_autocorrelation(std::span<const double> r, int order);
LpcModel lpc_fit(std::span<const double> frame, int order);
inline LpcModel lpc_fit(const PreparedFrame& frame, int order) {
  return lpc_fit(frame.samples, order);
}

/// G^2 / |A(e^{jw})|^2 on n_points frequencies spread evenly over [0, fs/2].
std::vector<double> lpc_envelope(const LpcModel& model, std::size_t n_points, double sample_rate);

/// One root of A(z) in the upper half plane, expressed in Hz.
struct PoleCandidate {
  double frequency_hz;
  double bandwidth_hz;
};

/// Roots of A(z) = 1 - sum a_k z^-k with positive imaginary part, sorted by frequency.
std::vector<PoleCandidate> lpc_pole_candidates(const LpcModel& model, double sample_rate);

/// First two gated pole frequencies. Throws Errc::formants_not_found.
FormantEstimate find_formants(const LpcModel& model, double sample_rate,
                              const FormantConfig& config = {});

/// prepare()d frame -> LPC -> formants, using config.lpc_order (or the auto rule).
FormantEstimate estimate_formants(const PreparedFrame& frame, const FormantConfig& config = {});

}  // namespace vowelkit

#endif  // VOWELKIT_LPC_FORMANTS_HPP
