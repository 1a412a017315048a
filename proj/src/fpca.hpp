#pragma once

#include <utility>
#include <vector>

#include "record.hpp"

namespace tsc {

// Principal components of the discretized curves, flattened channel-major.
struct FpcaBasis {
    int channels = 0;
    int length = 0;
    std::vector<double> mean_curve;               // channels * length
    std::vector<std::vector<double>> components;  // k orthonormal vectors
    std::vector<double> eigenvalues;              // k, non-increasing, >= 0

    int dim() const { return channels * length; }
    int k() const { return int(components.size()); }
};

// Top-k eigenvectors of the 1/N sample covariance; uses the Gram matrix when
// the dataset has fewer records than grid points. Sign convention: first
// non-negligible entry of each component is positive.
FpcaBasis fpca_fit(const Dataset& dataset, int k);

// scores = components^T (x - mean); reconstruction = mean + components * scores.
std::pair<std::vector<double>, Record> fpca_project_reconstruct(const FpcaBasis& basis,
                                                                const Record& record);

// Reconstruction from the first k components only; returns (mse, reconstruction).
std::pair<double, Record> fpca_reconstruct(const FpcaBasis& basis, const Record& record, int k);

// Mean curve plus components viewed as records, for debugging dumps.
Dataset basis_as_dataset(const FpcaBasis& basis);

// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n*n).
// Fills eigenvalues (unsorted) and eigenvectors as columns of v.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& v);

}  // namespace tsc
