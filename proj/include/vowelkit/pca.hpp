#ifndef VOWELKIT_PCA_HPP
#define VOWELKIT_PCA_HPP

#include <span>
#include <vector>

namespace vowelkit {

struct SymmetricEigen {
  std::vector<double> values;                ///< descending
  std::vector<std::vector<double>> vectors;  ///< vectors[i] pairs with values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric n x n matrix (row-major).
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n, int max_sweeps = 100);

/// Sample covariance (divides by n - 1) of row vectors, row-major d x d.
std::vector<double> covariance(const std::vector<std::vector<double>>& data,
                               std::vector<double>* mean_out = nullptr);

struct PcaModel {
  std::vector<double> mean;
  std::vector<std::vector<double>> components;  ///< orthonormal rows
  std::vector<double> explained_variance;       ///< per component, descending
  std::vector<double> all_eigenvalues;          ///< full spectrum, descending
  bool degenerate = false;                      ///< all eigenvalues zero
};

/// Mean-centred PCA. Each component is signed so its largest-magnitude entry is positive.
PcaModel pca_fit(const std::vector<std::vector<double>>& data, std::size_t n_components = 2);

std::vector<double> pca_project(const PcaModel& model, std::span<const double> x);

}  // namespace vowelkit

#endif  // VOWELKIT_PCA_HPP
