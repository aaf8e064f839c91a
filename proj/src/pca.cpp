#include "vowelkit/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vowelkit/error.hpp"
#include "vowelkit/log.hpp"

namespace vowelkit {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, int max_sweeps) {
  if (a.size() != n * n) throw Error(Errc::dimension_mismatch, "jacobi_eigen: matrix is not n x n");
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));

  SymmetricEigen out;
  bool converged = false;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off <= 1e-30 * scale * scale) {
      converged = true;
      break;
    }
    if (sweep == max_sweeps) break;
    ++out.sweeps;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(Errc::numeric,
                "jacobi_eigen did not converge in " + std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });
  for (std::size_t idx : order) {
    out.values.push_back(at(idx, idx));
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + idx];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> covariance(const std::vector<std::vector<double>>& data,
                               std::vector<double>* mean_out) {
  if (data.size() < 2) throw Error(Errc::insufficient_data, "covariance needs at least 2 samples");
  const std::size_t d = data.front().size();
  std::vector<double> mean(d, 0.0);
  for (const auto& row : data) {
    if (row.size() != d) throw Error(Errc::dimension_mismatch, "inconsistent sample dimensionality");
    for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
  }
  for (double& m : mean) m /= static_cast<double>(data.size());

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centred(d);
  for (const auto& row : data) {
    for (std::size_t i = 0; i < d; ++i) centred[i] = row[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += centred[i] * centred[j];
  }
  const double denom = static_cast<double>(data.size() - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= denom;
      cov[j * d + i] = cov[i * d + j];
    }
  }
  if (mean_out != nullptr) *mean_out = std::move(mean);
  return cov;
}

PcaModel pca_fit(const std::vector<std::vector<double>>& data, std::size_t n_components) {
  if (data.size() < 3) throw Error(Errc::insufficient_data, "pca needs at least 3 samples");
  const std::size_t d = data.front().size();
  if (n_components == 0 || n_components > d) {
    throw Error(Errc::invalid_argument, "n_components must lie in [1, dimension]");
  }
  if (data.size() < n_components) {
    throw Error(Errc::insufficient_data, "fewer samples than components");
  }

  PcaModel model;
  const std::vector<double> cov = covariance(data, &model.mean);
  SymmetricEigen eig = jacobi_eigen(cov, d);

  for (double& v : eig.values) v = std::max(v, 0.0);  // clamp round-off negatives
  model.all_eigenvalues = eig.values;
  model.degenerate = std::all_of(eig.values.begin(), eig.values.end(), [](double v) { return v == 0.0; });
  if (model.degenerate) log_warning("pca: data has zero variance; components are arbitrary");

  for (std::size_t c = 0; c < n_components; ++c) {
    std::vector<double> comp = eig.vectors[c];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(comp[i]) > std::abs(comp[arg])) arg = i;
    }
    if (comp[arg] < 0.0) {
      for (double& x : comp) x = -x;
    }
    model.components.push_back(std::move(comp));
    model.explained_variance.push_back(eig.values[c]);
  }
  return model;
}

std::vector<double> pca_project(const PcaModel& model, std::span<const double> x) {
  if (x.size() != model.mean.size()) {
    throw Error(Errc::dimension_mismatch, "pca_project: expected " +
                                              std::to_string(model.mean.size()) + " values, got " +
                                              std::to_string(x.size()));
  }
  std::vector<double> out(model.components.size(), 0.0);
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    for (std::size_t i = 0; i < x.size(); ++i) out[c] += (x[i] - model.mean[i]) * model.components[c][i];
  }
  return out;
}

}  // namespace vowelkit
