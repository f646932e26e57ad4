#include "mlorc/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mlorc/errors.hpp"

namespace mlorc {

namespace {

constexpr double kJacobiTol = 1e-15;
constexpr int kMaxSweeps = 64;

double col_dot(const Matrix& a, int p, int q) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, p) * a(i, q);
    return s;
}

// Orthogonal completion for (near-)zero singular directions: project identity
// columns against the columns of u already in place and keep the first
// candidate with a substantial residual.
void fill_orthonormal_column(Matrix& u, int col) {
    const int m = u.rows();
    for (int cand = 0; cand < m; ++cand) {
        std::vector<double> v(m, 0.0);
        v[cand] = 1.0;
        for (int j = 0; j < u.cols(); ++j) {
            if (j == col) continue;
            double dot = 0.0;
            for (int i = 0; i < m; ++i) dot += u(i, j) * v[i];
            for (int i = 0; i < m; ++i) v[i] -= dot * u(i, j);
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.5) {
            for (int i = 0; i < m; ++i) u(i, col) = v[i] / norm;
            return;
        }
    }
    throw shape_error("svd_small: failed to complete orthonormal basis");
}

// Make the first nonzero component of each left singular vector nonnegative;
// flip the matching right vector so the product is unchanged.
void fix_signs(Matrix& u, Matrix& v) {
    for (int j = 0; j < u.cols(); ++j) {
        double lead = 0.0;
        for (int i = 0; i < u.rows(); ++i) {
            if (u(i, j) != 0.0) {
                lead = u(i, j);
                break;
            }
        }
        if (lead < 0.0) {
            for (int i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
            for (int i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
        }
    }
}

// Hestenes one-sided Jacobi on a tall matrix (rows >= cols).
SvdResult svd_tall(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    Matrix w = a;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = col_dot(w, p, p);
                const double aqq = col_dot(w, q, q);
                const double apq = col_dot(w, p, q);
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= kJacobiTol * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(w, j, j));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
    const double tiny = static_cast<double>(std::max(m, n)) *
                        std::numeric_limits<double>::epsilon() * sig_max;

    SvdResult out;
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    out.s.resize(n);
    std::vector<int> to_fill;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        const double sj = sigma[src];
        for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sj > tiny && sj > 0.0) {
            out.s[j] = sj;
            for (int i = 0; i < m; ++i) out.u(i, j) = w(i, src) / sj;
        } else {
            out.s[j] = 0.0;
            to_fill.push_back(j);
        }
    }
    for (int j : to_fill) fill_orthonormal_column(out.u, j);
    return out;
}

}  // namespace

std::pair<Matrix, Matrix> qr_thin(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    if (m < n) {
        throw shape_error("qr_thin: need rows >= cols, got " + std::to_string(m) +
                          "x" + std::to_string(n));
    }
    require_finite(a, "qr_thin");

    Matrix work = a;
    // Householder vectors, one per column; empty marks a skipped reflection.
    std::vector<std::vector<double>> hh(n);

    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < m; ++i) norm += work(i, k) * work(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;  // zero column, reflection not needed

        const double alpha = work(k, k) >= 0.0 ? -norm : norm;
        std::vector<double> v(m - k);
        for (int i = k; i < m; ++i) v[i - k] = work(i, k);
        v[0] -= alpha;
        double vsq = 0.0;
        for (double x : v) vsq += x * x;
        if (vsq == 0.0) continue;  // column already reduced

        const double beta = 2.0 / vsq;
        for (int j = k; j < n; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v[i - k] * work(i, j);
            dot *= beta;
            for (int i = k; i < m; ++i) work(i, j) -= dot * v[i - k];
        }
        work(k, k) = alpha;  // clean the pivot entry
        for (int i = k + 1; i < m; ++i) work(i, k) = 0.0;
        hh[k] = std::move(v);
    }

    Matrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) r(i, j) = work(i, j);

    // q = H_0 ... H_{n-1} applied to the first n identity columns
    Matrix q(m, n);
    for (int j = 0; j < n; ++j) q(j, j) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        if (hh[k].empty()) continue;
        const auto& v = hh[k];
        double vsq = 0.0;
        for (double x : v) vsq += x * x;
        const double beta = 2.0 / vsq;
        for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v[i - k] * q(i, j);
            dot *= beta;
            for (int i = k; i < m; ++i) q(i, j) -= dot * v[i - k];
        }
    }
    return {std::move(q), std::move(r)};
}

SvdResult svd_small(const Matrix& b) {
    require_finite(b, "svd_small");
    SvdResult out;
    if (b.rows() >= b.cols()) {
        out = svd_tall(b);
    } else {
        SvdResult t = svd_tall(transpose(b));
        out.u = std::move(t.v);
        out.s = std::move(t.s);
        out.v = std::move(t.u);
    }
    fix_signs(out.u, out.v);
    return out;
}

}  // namespace mlorc
