#ifndef MLORC_RSVD_HPP
#define MLORC_RSVD_HPP

#include <vector>

#include "mlorc/matrix.hpp"
#include "mlorc/rng.hpp"

namespace mlorc {

// Rank-bounded factorization u * diag(s) * v^T of a stored moment.
// u is m x l, v is n x l, s has length l with l = min(r + p, min(m, n)).
// Factors fresh out of rsvd() have orthonormal columns; the all-zero
// initial state (factors of zeros) reconstructs to the zero matrix.
struct FactoredMomentum {
    Matrix u;
    std::vector<double> s;
    Matrix v;

    static FactoredMomentum zero(int rows, int cols, int l);
    int represented_rows() const { return u.rows(); }
    int represented_cols() const { return v.rows(); }
    int factor_cols() const { return u.cols(); }
};

// n x l matrix of i.i.d. standard normal draws; advances rng.
Matrix gaussian_matrix(int n, int l, RngStream& rng);

// Randomized SVD with oversampling: sketch a with a Gaussian test matrix,
// orthonormalize the sample, and take an exact SVD of the small projection.
// Sketch width r + p is clamped to min(m, n), which makes the factorization
// exact on small inputs.
FactoredMomentum rsvd(const Matrix& a, int r, int p, RngStream& rng);

Matrix reconstruct(const FactoredMomentum& f);

// Keep only the leading `rank` singular triples.
FactoredMomentum truncate(const FactoredMomentum& f, int rank);

}  // namespace mlorc

#endif
