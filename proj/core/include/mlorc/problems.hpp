#ifndef MLORC_PROBLEMS_HPP
#define MLORC_PROBLEMS_HPP

#include <string>
#include <variant>
#include <vector>

#include "mlorc/matrix.hpp"
#include "mlorc/rng.hpp"

namespace mlorc {

// f(W) = 0.5 * ||a W b - c||_F^2 over W in R^{m x n}, with additive Gaussian
// gradient noise of per-entry std noise_std / sqrt(batch) as the stochastic
// oracle. Smoothness constant L = sigma_max(a)^2 * sigma_max(b)^2 is cached
// at construction.
struct MatrixQuadratic {
    Matrix a;  // q x m
    Matrix b;  // n x k
    Matrix c;  // q x k
    double noise_std = 0.0;
    double lipschitz = 0.0;

    int w_rows() const { return a.cols(); }
    int w_cols() const { return b.rows(); }
};

// Binary logistic regression; the parameter is an m x n matrix whose first
// row carries the classifier, remaining rows only see the l2 term. Batches
// are sampled uniformly without replacement within a step.
struct LogisticTask {
    Matrix features;          // N x n
    std::vector<int> labels;  // {0, 1}, length N
    int w_rows = 1;
    double l2_reg = 0.0;

    int num_samples() const { return features.rows(); }
    int w_cols() const { return features.cols(); }
};

using Problem = std::variant<MatrixQuadratic, LogisticTask>;

struct GradSample {
    Matrix grad;
    std::vector<int> batch_indices;
    double loss_value = 0.0;
};

// Quadratic with a planted rank-`planted_rank` solution: c = a W* b + noise.
// a and b get log-spaced singular values in [0.5, 1.5] over random
// orthonormal factors, so the instance is well-conditioned and L is tame.
MatrixQuadratic make_planted_quadratic(int q, int m, int n, int k, int planted_rank,
                                       double noise_std, double c_noise_std, RngStream& rng);

// Synthetic binary classification task: Gaussian features, labels drawn from
// a logistic model with a fixed random direction.
LogisticTask make_synthetic_logistic(int num_samples, int num_features, int w_rows,
                                     double l2_reg, RngStream& rng);

// Dense numeric CSV, one sample per row, last column is the 0/1 label.
LogisticTask load_logistic_csv(const std::string& path, int w_rows, double l2_reg);

double loss(const Problem& problem, const Matrix& w);
Matrix grad(const Problem& problem, const Matrix& w);
GradSample stoch_grad(const Problem& problem, const Matrix& w, int batch_size, RngStream& rng);
Matrix finite_diff_grad(const Problem& problem, const Matrix& w, double h);

int param_rows(const Problem& problem);
int param_cols(const Problem& problem);

// Smoothness constant: exact for the quadratic, the standard
// sigma_max(X)^2 / (4N) + l2 bound for the logistic task.
double lipschitz_bound(const Problem& problem);

}  // namespace mlorc

#endif
