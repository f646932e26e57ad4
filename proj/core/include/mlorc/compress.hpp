#ifndef MLORC_COMPRESS_HPP
#define MLORC_COMPRESS_HPP

#include "mlorc/matrix.hpp"

namespace mlorc {

// Summary of the negative part of a reconstructed second moment.
// zeta is the absolute mean over strictly negative entries, 0 when none.
struct CorrectionReport {
    double zeta = 0.0;
    long long negative_count = 0;
};

CorrectionReport zeta(const Matrix& v_tilde);

// Non-negativity repair for a reconstructed second moment: negative entries
// (compression artifacts) are replaced by the absolute mean of the negative
// part instead of being zeroed outright, so the exponential average does not
// inherit spurious exact zeros. Idempotent, identity on nonnegative input.
Matrix correct_nonneg(const Matrix& v_tilde);

}  // namespace mlorc

#endif
