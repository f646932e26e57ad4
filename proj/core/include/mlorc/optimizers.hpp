#ifndef MLORC_OPTIMIZERS_HPP
#define MLORC_OPTIMIZERS_HPP

#include <optional>
#include <string>
#include <variant>

#include "mlorc/matrix.hpp"
#include "mlorc/rng.hpp"
#include "mlorc/rsvd.hpp"

namespace mlorc {

struct HyperParams {
    double alpha = 1e-3;        // learning rate
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 0.0;  // decoupled, AdamW family only
    double epsilon = 1e-8;
    int rank = 4;               // target rank r
    int oversample = 0;         // oversampling p
    int batch_size = 1;
    int galore_update_freq = 200;       // projector refresh period T
    bool warm_start_lion_momentum = false;  // m_0 <- g_1 for theory-check runs
};

// Throws config_error naming the offending field.
void validate(const HyperParams& hp);

enum class OptKind { adamw, lion, mlorc_adamw, mlorc_lion, galore_adamw };

OptKind opt_kind_from_string(const std::string& name);
std::string to_string(OptKind kind);
bool is_mlorc(OptKind kind);
bool is_lion_family(OptKind kind);

struct AdamWState {
    Matrix m;
    Matrix v;  // entrywise >= 0
    long long t = 1;
};

struct LionState {
    Matrix m;
    long long t = 1;
};

struct MLorcAdamWState {
    FactoredMomentum fm;
    FactoredMomentum fv;
    long long t = 1;
};

struct MLorcLionState {
    FactoredMomentum fm;
    long long t = 1;
};

struct GaLoreState {
    Matrix projector;  // m x r, orthonormal columns
    Matrix m_low;      // r x n
    Matrix v_low;      // r x n, entrywise >= 0
    long long t = 1;
};

using OptState = std::variant<AdamWState, LionState, MLorcAdamWState, MLorcLionState, GaLoreState>;

// Per-step diagnostics, filled only when a caller passes a StepInfo in.
// Moments are the uncompressed current-step values (what the update used),
// copied out only when want_moments is set.
struct StepInfo {
    bool want_moments = false;
    std::optional<double> zeta;          // MLorc-AdamW correction magnitude
    std::optional<double> v_tilde_min;   // post-correction minimum entry
    std::optional<double> comp_err_m;    // ||reconstruct(fm_t) - m_t||_F
    std::optional<Matrix> moment_m;
    std::optional<Matrix> moment_v;
};

Matrix adamw_step(const Matrix& w, const Matrix& g, AdamWState& state,
                  const HyperParams& hp, StepInfo* info = nullptr);

Matrix lion_step(const Matrix& w, const Matrix& g, LionState& state,
                 const HyperParams& hp, StepInfo* info = nullptr);

Matrix mlorc_adamw_step(const Matrix& w, const Matrix& g, MLorcAdamWState& state,
                        const HyperParams& hp, RngStream& rng, StepInfo* info = nullptr);

Matrix mlorc_lion_step(const Matrix& w, const Matrix& g, MLorcLionState& state,
                       const HyperParams& hp, RngStream& rng, StepInfo* info = nullptr);

Matrix galore_adamw_step(const Matrix& w, const Matrix& g, GaLoreState& state,
                         const HyperParams& hp, StepInfo* info = nullptr);

// Fresh state for a rows x cols parameter. GaLore's projector starts as the
// leading identity columns so its orthonormality invariant holds from t = 1.
OptState make_state(OptKind kind, int rows, int cols, const HyperParams& hp);

// Uniform dispatch; throws if the state type does not match `kind`.
Matrix optimizer_step(OptKind kind, const Matrix& w, const Matrix& g, OptState& state,
                      const HyperParams& hp, RngStream& rng, StepInfo* info = nullptr);

long long step_count(const OptState& state);

}  // namespace mlorc

#endif
