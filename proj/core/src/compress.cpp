#include "mlorc/compress.hpp"

#include <cmath>

#include "mlorc/matrix.hpp"

namespace mlorc {

CorrectionReport zeta(const Matrix& v_tilde) {
    require_finite(v_tilde, "zeta");
    CorrectionReport rep;
    double neg_sum = 0.0;
    for (double x : v_tilde.data()) {
        if (x < 0.0) {
            neg_sum += -x;
            ++rep.negative_count;
        }
    }
    rep.zeta = rep.negative_count > 0 ? neg_sum / static_cast<double>(rep.negative_count) : 0.0;
    return rep;
}

Matrix correct_nonneg(const Matrix& v_tilde) {
    const CorrectionReport rep = zeta(v_tilde);
    if (rep.negative_count == 0) return v_tilde;
    Matrix out = v_tilde;
    for (double& x : out.data()) {
        if (x < 0.0) x = rep.zeta;
    }
    return out;
}

}  // namespace mlorc
