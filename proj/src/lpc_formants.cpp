#include "vowelkit/lpc_formants.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "vowelkit/error.hpp"
#include "vowelkit/spectral.hpp"

namespace vowelkit {

int auto_lpc_order(int sample_rate) { return 2 + sample_rate / 1000; }

LpcModel lpc_from_autocorrelation(std::span<const double> r, int order) {
  if (order < 1) throw Error(Errc::invalid_argument, "lpc order must be at least 1");
  if (r.size() < static_cast<std::size_t>(order) + 1) {
    throw Error(Errc::invalid_argument, "need order+1 autocorrelation lags");
  }
  if (!(r[0] > 0.0)) throw Error(Errc::silent_frame, "silent frame");

  std::vector<double> a(order + 1, 0.0);
  std::vector<double> prev(order + 1, 0.0);
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    if (!(std::abs(k) < 1.0)) {
      throw Error(Errc::unstable_model,
                  "unstable model (reflection coefficient " + std::to_string(k) + " at step " +
                      std::to_string(i) + ")");
    }
    prev = a;
    a[i] = k;
    for (int j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    err *= (1.0 - k * k);
  }

  LpcModel model;
  model.order = order;
  model.coeffs.assign(a.begin() + 1, a.end());
  model.residual_energy = err;
  model.gain = std::sqrt(err);
  return model;
}

LpcModel lpc_fit(std::span<const double> frame, int order) {
  if (order < 1) throw Error(Errc::invalid_argument, "lpc order must be at least 1");
  if (frame.size() <= static_cast<std::size_t>(order)) {
    throw Error(Errc::invalid_argument, "frame of " + std::to_string(frame.size()) +
                                            " samples is too short for order " +
                                            std::to_string(order));
  }
  const std::vector<double> r = autocorrelation(frame, static_cast<std::size_t>(order));
  return lpc_from_autocorrelation(r, order);
}

std::vector<double> lpc_envelope(const LpcModel& model, std::size_t n_points, double sample_rate) {
  if (n_points < 2) throw Error(Errc::invalid_argument, "envelope needs at least 2 points");
  std::vector<double> env(n_points);
  const double g2 = model.gain * model.gain;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double f = 0.5 * sample_rate * static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double w = 2.0 * std::numbers::pi * f / sample_rate;
    std::complex<double> denom = 1.0;
    for (int k = 1; k <= model.order; ++k) {
      denom -= model.coeffs[k - 1] * std::polar(1.0, -w * k);
    }
    env[i] = g2 / std::norm(denom);
  }
  return env;
}

std::vector<PoleCandidate> lpc_pole_candidates(const LpcModel& model, double sample_rate) {
  const int m = model.order;
  if (m < 1) return {};
  // z^M A(z) = z^M - a_1 z^{M-1} - ... - a_M; companion matrix eigenvalues are its roots.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) companion(0, k) = model.coeffs[k];
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::numeric, "companion-matrix eigenvalue iteration did not converge");
  }

  std::vector<PoleCandidate> out;
  for (int i = 0; i < m; ++i) {
    const std::complex<double> root = solver.eigenvalues()[i];
    if (root.imag() <= 0.0) continue;
    const double f = sample_rate / (2.0 * std::numbers::pi) * std::arg(root);
    const double bw = -sample_rate / std::numbers::pi * std::log(std::abs(root));
    out.push_back({f, bw});
  }
  std::sort(out.begin(), out.end(),
            [](const PoleCandidate& a, const PoleCandidate& b) { return a.frequency_hz < b.frequency_hz; });
  return out;
}

FormantEstimate find_formants(const LpcModel& model, double sample_rate,
                              const FormantConfig& config) {
  if (model.order < 4) {
    throw Error(Errc::invalid_argument, "formant picking needs lpc order >= 4");
  }
  FormantEstimate est;
  std::vector<double> freqs;
  for (const PoleCandidate& c : lpc_pole_candidates(model, sample_rate)) {
    if (c.frequency_hz < config.min_hz || c.frequency_hz > config.max_hz) continue;
    if (c.bandwidth_hz > config.max_bandwidth_hz) continue;
    freqs.push_back(c.frequency_hz);
    est.bandwidths.push_back(c.bandwidth_hz);
    if (freqs.size() == 2) break;
  }
  if (freqs.size() < 2) throw Error(Errc::formants_not_found, "formants not found");
  est.f1 = freqs[0];
  est.f2 = freqs[1];
  return est;
}

FormantEstimate estimate_formants(const PreparedFrame& frame, const FormantConfig& config) {
  const int order = config.lpc_order > 0 ? config.lpc_order : auto_lpc_order(frame.sample_rate);
  const LpcModel model = lpc_fit(frame, order);
  return find_formants(model, frame.sample_rate, config);
}

}  // namespace vowelkit
