#ifndef MLORC_CONFIG_HPP
#define MLORC_CONFIG_HPP

#include <cstdint>
#include <string>

#include "mlorc/optimizers.hpp"
#include "mlorc/problems.hpp"

namespace mlorc {

enum class ProblemKind { quadratic, logistic };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::quadratic;
    // quadratic
    int rows = 0;
    int cols = 0;
    int a_rows = 0;        // 0 -> rows
    int b_cols = 0;        // 0 -> cols
    int planted_rank = 0;  // 0 -> min(rows, cols)
    double noise_std = 0.0;
    double c_noise_std = 0.0;
    // logistic
    int num_samples = 0;
    int num_features = 0;
    double l2_reg = 0.0;
    std::string dataset;  // optional CSV; empty -> synthetic
};

enum class ScheduleKind { constant, linear };

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::constant;
    double warmup_ratio = 0.03;  // linear schedule only
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    ProblemSpec problem;
    OptKind optimizer = OptKind::adamw;
    HyperParams hp;
    long long steps = 0;
    long long record_every = 1;
    int spectral_k = 8;
    double w0_scale = 0.0;  // 0 -> zero init, else Gaussian * scale
    ScheduleSpec schedule;
    std::string output_path;

    // in-memory knob, not part of the JSON schema: retain the per-step
    // weight trajectory for divergence analysis
    bool keep_trajectory = false;
};

// Parse and validate a JSON config document. Family-dependent defaults are
// applied here: beta1 = 0.8 for mlorc-adamw and 0.9 otherwise, beta2 = 0.99
// for the Lion family and 0.999 otherwise, oversample = 0. Errors name the
// offending field.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config_file(const std::string& path);

// Instantiate the problem deterministically from cfg.seed.
Problem build_problem(const ExperimentConfig& cfg);

// Learning rate at 1-based step t under the configured schedule.
double scheduled_alpha(const ExperimentConfig& cfg, long long t);

}  // namespace mlorc

#endif
