#ifndef MLORC_METRICS_HPP
#define MLORC_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "mlorc/matrix.hpp"
#include "mlorc/optimizers.hpp"

namespace mlorc {

// Low-rankness concentration: sum of the top-k singular values over the sum
// of all of them. Always computed from an exact SVD, never from a sketch.
struct SpectralRatio {
    int k = 0;
    double ratio = 0.0;
};

SpectralRatio topk_ratio(const Matrix& a, int k);

enum class MemMethod { full_adamw, lora_adamw, galore, mlorc_adamw };

MemMethod mem_method_from_string(const std::string& name);
std::string to_string(MemMethod method);

// Element counts (not bytes) for one m x n parameter at rank r.
struct MemoryCount {
    MemMethod method = MemMethod::full_adamw;
    long long weights = 0;
    long long optimizer_states = 0;
};

MemoryCount memory_count(MemMethod method, int m, int n, int r);

// Real numbers actually stored in a state's moment structures. Singular
// value vectors are treated as absorbed into the factors and not counted,
// matching the accounting convention of memory_count.
long long measured_state_elements(const OptState& state);

// Per-step l_{1,1} gradient norms and their running average.
struct GradTrace {
    std::vector<double> per_step;
    std::vector<double> running_avg;
};

GradTrace grad_l11_trace(std::span<const Matrix> gradients);
GradTrace grad_l11_trace(std::span<const double> l11_norms);

}  // namespace mlorc

#endif
