#ifndef MLORC_DECOMP_HPP
#define MLORC_DECOMP_HPP

#include <utility>
#include <vector>

#include "mlorc/matrix.hpp"

namespace mlorc {

// Thin SVD a = u * diag(s) * v^T with s nonincreasing and orthonormal
// u (m x k), v (n x k), k = min(m, n). Left singular vectors are sign-fixed
// so the first nonzero component of each column is nonnegative.
struct SvdResult {
    Matrix u;
    std::vector<double> s;
    Matrix v;
};

// Householder thin QR for rows >= cols: a = q * r with orthonormal q
// (rows x cols) and upper-triangular r (cols x cols). Rank-deficient input
// is fine; q stays orthonormal.
std::pair<Matrix, Matrix> qr_thin(const Matrix& a);

// One-sided Jacobi SVD, applied on the smaller-dimension side. Meant for the
// small matrices this library actually decomposes (sketch projections and
// desk-scale metric inputs); deterministic for a fixed input.
SvdResult svd_small(const Matrix& b);

}  // namespace mlorc

#endif
