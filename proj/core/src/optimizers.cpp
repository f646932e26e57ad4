#include "mlorc/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlorc/compress.hpp"
#include "mlorc/decomp.hpp"
#include "mlorc/errors.hpp"

namespace mlorc {

namespace {

void check_step_inputs(const Matrix& w, const Matrix& g) {
    if (!w.same_shape(g)) {
        throw shape_error("optimizer step: weight is " + std::to_string(w.rows()) + "x" +
                          std::to_string(w.cols()) + " but gradient is " +
                          std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
    }
    require_finite(g, "optimizer step gradient");
}

int effective_factor_cols(int rows, int cols, const HyperParams& hp) {
    return std::min(hp.rank + hp.oversample, std::min(rows, cols));
}

double sign_of(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

// w' = w - alpha * (mhat / (sqrt(vhat) + eps) + lambda * w), with the
// bias-corrected moments computed from the uncompressed m, v.
Matrix adamw_update(const Matrix& w, const Matrix& m, const Matrix& v, long long t,
                    const HyperParams& hp) {
    const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(t));
    Matrix out = w;
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double mhat = m(i, j) / c1;
            const double vhat = v(i, j) / c2;
            out(i, j) = w(i, j) - hp.alpha * (mhat / (std::sqrt(vhat) + hp.epsilon) +
                                              hp.weight_decay * w(i, j));
        }
    }
    return out;
}

}  // namespace

void validate(const HyperParams& hp) {
    if (!(hp.alpha > 0.0)) throw config_error("optimizer.alpha: must be > 0");
    if (hp.beta1 < 0.0 || hp.beta1 >= 1.0) throw config_error("optimizer.beta1: must be in [0, 1)");
    if (hp.beta2 < 0.0 || hp.beta2 >= 1.0) throw config_error("optimizer.beta2: must be in [0, 1)");
    if (hp.weight_decay < 0.0) throw config_error("optimizer.weight_decay: must be >= 0");
    if (!(hp.epsilon > 0.0)) throw config_error("optimizer.epsilon: must be > 0");
    if (hp.rank < 1) throw config_error("optimizer.rank: must be >= 1");
    if (hp.oversample < 0) throw config_error("optimizer.oversample: must be >= 0");
    if (hp.batch_size < 1) throw config_error("optimizer.batch_size: must be >= 1");
    if (hp.galore_update_freq < 1) throw config_error("optimizer.galore_update_freq: must be >= 1");
}

OptKind opt_kind_from_string(const std::string& name) {
    if (name == "adamw") return OptKind::adamw;
    if (name == "lion") return OptKind::lion;
    if (name == "mlorc-adamw") return OptKind::mlorc_adamw;
    if (name == "mlorc-lion") return OptKind::mlorc_lion;
    if (name == "galore-adamw") return OptKind::galore_adamw;
    throw config_error("optimizer.kind: unknown value \"" + name +
                       "\" (expected adamw|lion|mlorc-adamw|mlorc-lion|galore-adamw)");
}

std::string to_string(OptKind kind) {
    switch (kind) {
        case OptKind::adamw: return "adamw";
        case OptKind::lion: return "lion";
        case OptKind::mlorc_adamw: return "mlorc-adamw";
        case OptKind::mlorc_lion: return "mlorc-lion";
        case OptKind::galore_adamw: return "galore-adamw";
    }
    return "?";
}

bool is_mlorc(OptKind kind) {
    return kind == OptKind::mlorc_adamw || kind == OptKind::mlorc_lion;
}

bool is_lion_family(OptKind kind) {
    return kind == OptKind::lion || kind == OptKind::mlorc_lion;
}

Matrix adamw_step(const Matrix& w, const Matrix& g, AdamWState& state,
                  const HyperParams& hp, StepInfo* info) {
    check_step_inputs(w, g);
    if (!state.m.same_shape(w) || !state.v.same_shape(w)) {
        throw shape_error("adamw_step: state does not match parameter shape");
    }
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double gij = g(i, j);
            state.m(i, j) = hp.beta1 * state.m(i, j) + (1.0 - hp.beta1) * gij;
            state.v(i, j) = hp.beta2 * state.v(i, j) + (1.0 - hp.beta2) * gij * gij;
        }
    }
    Matrix out = adamw_update(w, state.m, state.v, state.t, hp);
    if (info && info->want_moments) {
        info->moment_m = state.m;
        info->moment_v = state.v;
    }
    state.t += 1;
    return out;
}

Matrix lion_step(const Matrix& w, const Matrix& g, LionState& state,
                 const HyperParams& hp, StepInfo* info) {
    check_step_inputs(w, g);
    if (!state.m.same_shape(w)) {
        throw shape_error("lion_step: state does not match parameter shape");
    }
    if (hp.warm_start_lion_momentum && state.t == 1) state.m = g;

    Matrix out = w;
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double gij = g(i, j);
            const double c = hp.beta1 * state.m(i, j) + (1.0 - hp.beta1) * gij;
            state.m(i, j) = hp.beta2 * state.m(i, j) + (1.0 - hp.beta2) * gij;
            out(i, j) = w(i, j) - hp.alpha * sign_of(c);
        }
    }
    if (info && info->want_moments) info->moment_m = state.m;
    state.t += 1;
    return out;
}

Matrix mlorc_adamw_step(const Matrix& w, const Matrix& g, MLorcAdamWState& state,
                        const HyperParams& hp, RngStream& rng, StepInfo* info) {
    check_step_inputs(w, g);
    if (hp.rank < 1) throw config_error("optimizer.rank: must be >= 1");

    // reconstruct the carried moments, repairing the second one
    Matrix m = reconstruct(state.fm);
    Matrix v_raw = reconstruct(state.fv);
    if (m.rows() != w.rows() || m.cols() != w.cols()) {
        throw shape_error("mlorc_adamw_step: state does not match parameter shape");
    }
    const CorrectionReport rep = zeta(v_raw);
    Matrix v_tilde = correct_nonneg(v_raw);
    if (info) {
        info->zeta = rep.zeta;
        info->v_tilde_min = min_entry(v_tilde);
    }

    Matrix v = std::move(v_tilde);
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double gij = g(i, j);
            m(i, j) = hp.beta1 * m(i, j) + (1.0 - hp.beta1) * gij;
            v(i, j) = hp.beta2 * v(i, j) + (1.0 - hp.beta2) * gij * gij;
        }
    }

    // compression only affects what is carried to the next step; the weight
    // update below uses the uncompressed current-step moments
    state.fm = rsvd(m, hp.rank, hp.oversample, rng);
    state.fv = rsvd(v, hp.rank, hp.oversample, rng);

    if (info) {
        info->comp_err_m = frob_norm(reconstruct(state.fm) - m);
        if (info->want_moments) {
            info->moment_m = m;
            info->moment_v = v;
        }
    }

    Matrix out = adamw_update(w, m, v, state.t, hp);
    state.t += 1;
    return out;
}

Matrix mlorc_lion_step(const Matrix& w, const Matrix& g, MLorcLionState& state,
                       const HyperParams& hp, RngStream& rng, StepInfo* info) {
    check_step_inputs(w, g);
    if (hp.rank < 1) throw config_error("optimizer.rank: must be >= 1");

    Matrix m_prev = (hp.warm_start_lion_momentum && state.t == 1) ? g : reconstruct(state.fm);
    if (m_prev.rows() != w.rows() || m_prev.cols() != w.cols()) {
        throw shape_error("mlorc_lion_step: state does not match parameter shape");
    }

    Matrix out = w;
    Matrix m(w.rows(), w.cols());
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double gij = g(i, j);
            const double c = hp.beta1 * m_prev(i, j) + (1.0 - hp.beta1) * gij;
            m(i, j) = hp.beta2 * m_prev(i, j) + (1.0 - hp.beta2) * gij;
            out(i, j) = w(i, j) - hp.alpha * sign_of(c);
        }
    }
    state.fm = rsvd(m, hp.rank, hp.oversample, rng);
    if (info) {
        info->comp_err_m = frob_norm(reconstruct(state.fm) - m);
        if (info->want_moments) info->moment_m = m;
    }
    state.t += 1;
    return out;
}

Matrix galore_adamw_step(const Matrix& w, const Matrix& g, GaLoreState& state,
                         const HyperParams& hp, StepInfo* info) {
    check_step_inputs(w, g);
    const int r = hp.rank;
    if (r > std::min(w.rows(), w.cols())) {
        throw shape_error("galore_adamw_step: rank exceeds min(rows, cols)");
    }
    if (state.projector.rows() != w.rows() || state.projector.cols() != r ||
        state.m_low.rows() != r || state.m_low.cols() != w.cols()) {
        throw shape_error("galore_adamw_step: state does not match parameter shape");
    }

    if ((state.t - 1) % hp.galore_update_freq == 0) {
        // refit the projector from the leading left singular vectors of g
        SvdResult dec = svd_small(g);
        for (int i = 0; i < w.rows(); ++i)
            for (int j = 0; j < r; ++j) state.projector(i, j) = dec.u(i, j);
    }

    const Matrix r_low = matmul(transpose(state.projector), g);  // r x n
    const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.t));
    Matrix n_low(r, w.cols());
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const double rij = r_low(i, j);
            state.m_low(i, j) = hp.beta1 * state.m_low(i, j) + (1.0 - hp.beta1) * rij;
            state.v_low(i, j) = hp.beta2 * state.v_low(i, j) + (1.0 - hp.beta2) * rij * rij;
            const double mhat = state.m_low(i, j) / c1;
            const double vhat = state.v_low(i, j) / c2;
            n_low(i, j) = mhat / (std::sqrt(vhat) + hp.epsilon);
        }
    }

    const Matrix back = matmul(state.projector, n_low);
    Matrix out = w;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            out(i, j) = w(i, j) - hp.alpha * (back(i, j) + hp.weight_decay * w(i, j));

    (void)info;
    state.t += 1;
    return out;
}

OptState make_state(OptKind kind, int rows, int cols, const HyperParams& hp) {
    validate(hp);
    switch (kind) {
        case OptKind::adamw:
            return AdamWState{Matrix(rows, cols), Matrix(rows, cols), 1};
        case OptKind::lion:
            return LionState{Matrix(rows, cols), 1};
        case OptKind::mlorc_adamw: {
            const int l = effective_factor_cols(rows, cols, hp);
            return MLorcAdamWState{FactoredMomentum::zero(rows, cols, l),
                                   FactoredMomentum::zero(rows, cols, l), 1};
        }
        case OptKind::mlorc_lion: {
            const int l = effective_factor_cols(rows, cols, hp);
            return MLorcLionState{FactoredMomentum::zero(rows, cols, l), 1};
        }
        case OptKind::galore_adamw: {
            if (hp.rank > std::min(rows, cols)) {
                throw shape_error("galore-adamw: rank exceeds min(rows, cols)");
            }
            Matrix proj(rows, hp.rank);
            for (int j = 0; j < hp.rank; ++j) proj(j, j) = 1.0;
            return GaLoreState{std::move(proj), Matrix(hp.rank, cols), Matrix(hp.rank, cols), 1};
        }
    }
    throw config_error("optimizer.kind: unknown enumeration value");
}

Matrix optimizer_step(OptKind kind, const Matrix& w, const Matrix& g, OptState& state,
                      const HyperParams& hp, RngStream& rng, StepInfo* info) {
    switch (kind) {
        case OptKind::adamw:
            if (auto* s = std::get_if<AdamWState>(&state)) return adamw_step(w, g, *s, hp, info);
            break;
        case OptKind::lion:
            if (auto* s = std::get_if<LionState>(&state)) return lion_step(w, g, *s, hp, info);
            break;
        case OptKind::mlorc_adamw:
            if (auto* s = std::get_if<MLorcAdamWState>(&state))
                return mlorc_adamw_step(w, g, *s, hp, rng, info);
            break;
        case OptKind::mlorc_lion:
            if (auto* s = std::get_if<MLorcLionState>(&state))
                return mlorc_lion_step(w, g, *s, hp, rng, info);
            break;
        case OptKind::galore_adamw:
            if (auto* s = std::get_if<GaLoreState>(&state))
                return galore_adamw_step(w, g, *s, hp, info);
            break;
    }
    throw config_error("optimizer_step: state type does not match kind " + to_string(kind));
}

long long step_count(const OptState& state) {
    return std::visit([](const auto& s) { return s.t; }, state);
}

}  // namespace mlorc
