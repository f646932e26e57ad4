#include "mlorc/rsvd.hpp"

#include <algorithm>
#include <string>

#include "mlorc/decomp.hpp"
#include "mlorc/errors.hpp"

namespace mlorc {

FactoredMomentum FactoredMomentum::zero(int rows, int cols, int l) {
    FactoredMomentum f;
    f.u = Matrix(rows, l);
    f.s.assign(static_cast<std::size_t>(l), 0.0);
    f.v = Matrix(cols, l);
    return f;
}

Matrix gaussian_matrix(int n, int l, RngStream& rng) {
    if (n < 1 || l < 1) {
        throw shape_error("gaussian_matrix: dimensions must be positive");
    }
    Matrix out(n, l);
    for (double& x : out.data()) x = rng.normal();
    return out;
}

FactoredMomentum rsvd(const Matrix& a, int r, int p, RngStream& rng) {
    if (r < 1) throw shape_error("rsvd: target rank must be >= 1");
    if (p < 0) throw shape_error("rsvd: oversampling must be >= 0");
    require_finite(a, "rsvd");

    const int l = std::min(r + p, std::min(a.rows(), a.cols()));
    const Matrix omega = gaussian_matrix(a.cols(), l, rng);
    const Matrix y = matmul(a, omega);
    auto [q, rr] = qr_thin(y);
    const Matrix b = matmul(transpose(q), a);  // l x n
    SvdResult small = svd_small(b);

    FactoredMomentum f;
    f.u = matmul(q, small.u);
    f.s = std::move(small.s);
    f.v = std::move(small.v);
    return f;
}

Matrix reconstruct(const FactoredMomentum& f) {
    const int l = f.u.cols();
    if (static_cast<int>(f.s.size()) != l || f.v.cols() != l) {
        throw shape_error("reconstruct: factor widths disagree (u " +
                          std::to_string(f.u.cols()) + ", s " +
                          std::to_string(f.s.size()) + ", v " +
                          std::to_string(f.v.cols()) + ")");
    }
    Matrix us = f.u;
    for (int i = 0; i < us.rows(); ++i)
        for (int j = 0; j < l; ++j) us(i, j) *= f.s[j];
    return matmul(us, transpose(f.v));
}

FactoredMomentum truncate(const FactoredMomentum& f, int rank) {
    const int l = f.factor_cols();
    if (rank < 1 || rank > l) {
        throw shape_error("truncate: rank " + std::to_string(rank) +
                          " not in [1, " + std::to_string(l) + "]");
    }
    FactoredMomentum out;
    out.u = Matrix(f.u.rows(), rank);
    out.v = Matrix(f.v.rows(), rank);
    out.s.assign(f.s.begin(), f.s.begin() + rank);
    for (int i = 0; i < f.u.rows(); ++i)
        for (int j = 0; j < rank; ++j) out.u(i, j) = f.u(i, j);
    for (int i = 0; i < f.v.rows(); ++i)
        for (int j = 0; j < rank; ++j) out.v(i, j) = f.v(i, j);
    return out;
}

}  // namespace mlorc
