#include "mlorc/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "mlorc/decomp.hpp"
#include "mlorc/errors.hpp"

namespace mlorc {

namespace {

void check_param_shape(const Problem& problem, const Matrix& w) {
    if (w.rows() != param_rows(problem) || w.cols() != param_cols(problem)) {
        throw shape_error("problem: parameter is " + std::to_string(w.rows()) + "x" +
                          std::to_string(w.cols()) + ", expected " +
                          std::to_string(param_rows(problem)) + "x" +
                          std::to_string(param_cols(problem)));
    }
}

// random matrix with orthonormal outer factors and log-spaced singular values
Matrix spectrum_shaped(int rows, int cols, double smin, double smax, RngStream& rng) {
    const int k = std::min(rows, cols);
    auto [qu, ru] = qr_thin(gaussian_matrix(rows, k, rng));
    auto [qv, rv] = qr_thin(gaussian_matrix(cols, k, rng));
    Matrix out(rows, cols);
    for (int t = 0; t < k; ++t) {
        const double frac = k == 1 ? 0.0 : static_cast<double>(t) / (k - 1);
        const double sv = smax * std::pow(smin / smax, frac);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out(i, j) += sv * qu(i, t) * qv(j, t);
    }
    return out;
}

double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// numerically safe log(1 + exp(z))
double log1pexp(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double quad_loss(const MatrixQuadratic& p, const Matrix& w) {
    const Matrix resid = matmul(matmul(p.a, w), p.b) - p.c;
    const double f = frob_norm(resid);
    return 0.5 * f * f;
}

Matrix quad_grad(const MatrixQuadratic& p, const Matrix& w) {
    const Matrix resid = matmul(matmul(p.a, w), p.b) - p.c;
    return matmul(matmul(transpose(p.a), resid), transpose(p.b));
}

double logistic_logit(const LogisticTask& p, const Matrix& w, int sample) {
    double z = 0.0;
    for (int j = 0; j < p.features.cols(); ++j) z += p.features(sample, j) * w(0, j);
    return z;
}

double logistic_l2_term(const LogisticTask& p, const Matrix& w) {
    const double f = frob_norm(w);
    return 0.5 * p.l2_reg * f * f;
}

double logistic_loss(const LogisticTask& p, const Matrix& w) {
    const int n = p.num_samples();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = logistic_logit(p, w, i);
        // -[y log p + (1-y) log(1-p)] = log(1+e^z) - y z
        sum += log1pexp(z) - (p.labels[i] != 0 ? z : 0.0);
    }
    return sum / n + logistic_l2_term(p, w);
}

Matrix logistic_grad_over(const LogisticTask& p, const Matrix& w,
                          const std::vector<int>& indices, double* batch_loss) {
    Matrix g(w.rows(), w.cols());
    double sum = 0.0;
    for (int i : indices) {
        const double z = logistic_logit(p, w, i);
        const double err = sigmoid(z) - (p.labels[i] != 0 ? 1.0 : 0.0);
        for (int j = 0; j < w.cols(); ++j) g(0, j) += err * p.features(i, j);
        sum += log1pexp(z) - (p.labels[i] != 0 ? z : 0.0);
    }
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (double& x : g.data()) x *= inv;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) g(i, j) += p.l2_reg * w(i, j);
    if (batch_loss) *batch_loss = sum * inv + logistic_l2_term(p, w);
    return g;
}

}  // namespace

MatrixQuadratic make_planted_quadratic(int q, int m, int n, int k, int planted_rank,
                                       double noise_std, double c_noise_std, RngStream& rng) {
    if (q < 1 || m < 1 || n < 1 || k < 1) {
        throw shape_error("make_planted_quadratic: dimensions must be positive");
    }
    if (planted_rank < 1 || planted_rank > std::min(m, n)) {
        throw shape_error("make_planted_quadratic: planted rank out of range");
    }
    if (noise_std < 0.0 || c_noise_std < 0.0) {
        throw shape_error("make_planted_quadratic: noise std must be >= 0");
    }

    MatrixQuadratic p;
    p.a = spectrum_shaped(q, m, 0.5, 1.5, rng);
    p.b = spectrum_shaped(n, k, 0.5, 1.5, rng);
    p.noise_std = noise_std;

    // planted solution W* = sum of planted_rank outer products, unit-ish scale
    Matrix w_star(m, n);
    const double col_scale = 1.0 / std::sqrt(static_cast<double>(planted_rank));
    for (int t = 0; t < planted_rank; ++t) {
        std::vector<double> uvec(m), vvec(n);
        for (double& x : uvec) x = rng.normal();
        for (double& x : vvec) x = rng.normal();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) w_star(i, j) += col_scale * uvec[i] * vvec[j];
    }
    p.c = matmul(matmul(p.a, w_star), p.b);
    if (c_noise_std > 0.0) {
        for (double& x : p.c.data()) x += c_noise_std * rng.normal();
    }

    const SvdResult sa = svd_small(p.a);
    const SvdResult sb = svd_small(p.b);
    p.lipschitz = sa.s[0] * sa.s[0] * sb.s[0] * sb.s[0];
    return p;
}

LogisticTask make_synthetic_logistic(int num_samples, int num_features, int w_rows,
                                     double l2_reg, RngStream& rng) {
    if (num_samples < 1 || num_features < 1 || w_rows < 1) {
        throw shape_error("make_synthetic_logistic: dimensions must be positive");
    }
    LogisticTask p;
    p.w_rows = w_rows;
    p.l2_reg = l2_reg;
    p.features = gaussian_matrix(num_samples, num_features, rng);
    std::vector<double> direction(num_features);
    double norm = 0.0;
    for (double& x : direction) {
        x = rng.normal();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    const double strength = 2.0;
    p.labels.resize(num_samples);
    for (int i = 0; i < num_samples; ++i) {
        double z = 0.0;
        for (int j = 0; j < num_features; ++j) z += p.features(i, j) * direction[j] / norm;
        p.labels[i] = rng.uniform01() < sigmoid(strength * z) ? 1 : 0;
    }
    return p;
}

LogisticTask load_logistic_csv(const std::string& path, int w_rows, double l2_reg) {
    std::ifstream in(path);
    if (!in) throw config_error("problem.dataset: cannot open \"" + path + "\"");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw config_error("problem.dataset: non-numeric cell \"" + cell + "\" in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw config_error("problem.dataset: ragged rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().size() < 2) {
        throw config_error("problem.dataset: need at least one row and two columns in " + path);
    }

    const int n_samples = static_cast<int>(rows.size());
    const int n_features = static_cast<int>(rows.front().size()) - 1;
    LogisticTask p;
    p.w_rows = w_rows;
    p.l2_reg = l2_reg;
    p.features = Matrix(n_samples, n_features);
    p.labels.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        for (int j = 0; j < n_features; ++j) p.features(i, j) = rows[i][j];
        const double lab = rows[i].back();
        if (lab != 0.0 && lab != 1.0) {
            throw config_error("problem.dataset: labels must be 0 or 1, got " +
                               std::to_string(lab));
        }
        p.labels[i] = lab != 0.0 ? 1 : 0;
    }
    return p;
}

double loss(const Problem& problem, const Matrix& w) {
    check_param_shape(problem, w);
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) return quad_loss(p, w);
            else return logistic_loss(p, w);
        },
        problem);
}

Matrix grad(const Problem& problem, const Matrix& w) {
    check_param_shape(problem, w);
    return std::visit(
        [&](const auto& p) -> Matrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) {
                return quad_grad(p, w);
            } else {
                std::vector<int> all(p.num_samples());
                std::iota(all.begin(), all.end(), 0);
                return logistic_grad_over(p, w, all, nullptr);
            }
        },
        problem);
}

GradSample stoch_grad(const Problem& problem, const Matrix& w, int batch_size, RngStream& rng) {
    check_param_shape(problem, w);
    if (batch_size < 1) throw shape_error("stoch_grad: batch size must be >= 1");
    GradSample out;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) {
                out.grad = quad_grad(p, w);
                if (p.noise_std > 0.0) {
                    const double scale = p.noise_std / std::sqrt(static_cast<double>(batch_size));
                    for (double& x : out.grad.data()) x += scale * rng.normal();
                }
                out.loss_value = quad_loss(p, w);
            } else {
                const int n = p.num_samples();
                if (batch_size > n) {
                    throw shape_error("stoch_grad: batch size " + std::to_string(batch_size) +
                                      " exceeds dataset size " + std::to_string(n));
                }
                // uniform without replacement: partial Fisher-Yates
                std::vector<int> pool(n);
                std::iota(pool.begin(), pool.end(), 0);
                out.batch_indices.reserve(batch_size);
                for (int i = 0; i < batch_size; ++i) {
                    const auto j = i + static_cast<int>(rng.uniform_below(
                                           static_cast<std::uint64_t>(n - i)));
                    std::swap(pool[i], pool[j]);
                    out.batch_indices.push_back(pool[i]);
                }
                out.grad = logistic_grad_over(p, w, out.batch_indices, &out.loss_value);
            }
        },
        problem);
    return out;
}

Matrix finite_diff_grad(const Problem& problem, const Matrix& w, double h) {
    check_param_shape(problem, w);
    if (!(h > 0.0)) throw shape_error("finite_diff_grad: h must be > 0");
    Matrix out(w.rows(), w.cols());
    Matrix probe = w;
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double saved = probe(i, j);
            probe(i, j) = saved + h;
            const double fp = loss(problem, probe);
            probe(i, j) = saved - h;
            const double fm = loss(problem, probe);
            probe(i, j) = saved;
            out(i, j) = (fp - fm) / (2.0 * h);
        }
    }
    return out;
}

int param_rows(const Problem& problem) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) return p.w_rows();
            else return p.w_rows;
        },
        problem);
}

int param_cols(const Problem& problem) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) return p.w_cols();
            else return p.w_cols();
        },
        problem);
}

double lipschitz_bound(const Problem& problem) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixQuadratic>) {
                return p.lipschitz;
            } else {
                const SvdResult s = svd_small(p.features);
                return s.s[0] * s.s[0] / (4.0 * p.num_samples()) + p.l2_reg;
            }
        },
        problem);
}

}  // namespace mlorc
