#ifndef MLORC_RUNNER_HPP
#define MLORC_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "mlorc/config.hpp"
#include "mlorc/matrix.hpp"

namespace mlorc {

// One recorded step. Optional columns stay empty when they do not apply to
// the optimizer kind (or when a spectral ratio is undefined on a zero
// matrix). loss and the gradient norms refer to the exact objective at the
// pre-update iterate; the spectral ratios describe the sampled gradient and
// the uncompressed current-step moments.
struct RunRecord {
    long long step = 0;
    double loss = 0.0;
    double grad_l11 = 0.0;
    double grad_frob = 0.0;
    std::optional<double> topk_g;
    std::optional<double> topk_m;
    std::optional<double> topk_v;
    std::optional<double> comp_err_m;
    std::optional<double> zeta;
    long long state_elements = 0;
};

struct RunResult {
    std::vector<RunRecord> records;
    Matrix final_w;
    // populated only when cfg.keep_trajectory: w after each step, 1-based
    // step i at index i-1
    std::vector<Matrix> trajectory;
};

// Drive the configured optimizer for cfg.steps steps. Writes the records CSV
// to cfg.output_path (plus "<output_path>.weights.csv" with the final
// weights) unless output_path is empty. A non-finite loss or weight aborts
// the run: the partial CSV and a "<output_path>.error.json" manifest are
// written, then run_abort_error is thrown with the offending step.
RunResult run_experiment(const ExperimentConfig& cfg);

// Record-level divergence (CSV-compatible: loss column).
struct DivergenceReport {
    std::size_t steps = 0;
    double max_rel_loss = 0.0;
    double mean_rel_loss = 0.0;
};

DivergenceReport compare_runs(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b);

// Weight-trajectory divergence for runs kept in memory.
struct TrajectoryDivergence {
    std::size_t steps = 0;
    double max_rel_weight = 0.0;
    double mean_rel_weight = 0.0;
};

TrajectoryDivergence compare_trajectories(const std::vector<Matrix>& a,
                                          const std::vector<Matrix>& b);

}  // namespace mlorc

#endif
