#include "mlorc/metrics.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "mlorc/decomp.hpp"
#include "mlorc/errors.hpp"

namespace mlorc {

SpectralRatio topk_ratio(const Matrix& a, int k) {
    if (k < 1 || k > std::min(a.rows(), a.cols())) {
        throw std::invalid_argument("topk_ratio: k must be in [1, min(rows, cols)]");
    }
    const SvdResult dec = svd_small(a);
    const double total = std::accumulate(dec.s.begin(), dec.s.end(), 0.0);
    if (total == 0.0) {
        throw std::domain_error("topk_ratio: zero matrix has no singular mass");
    }
    const double top = std::accumulate(dec.s.begin(), dec.s.begin() + k, 0.0);
    return SpectralRatio{k, top / total};
}

MemMethod mem_method_from_string(const std::string& name) {
    if (name == "full-adamw") return MemMethod::full_adamw;
    if (name == "lora-adamw") return MemMethod::lora_adamw;
    if (name == "galore") return MemMethod::galore;
    if (name == "mlorc-adamw") return MemMethod::mlorc_adamw;
    throw config_error("memory method: unknown value \"" + name +
                       "\" (expected full-adamw|lora-adamw|galore|mlorc-adamw)");
}

std::string to_string(MemMethod method) {
    switch (method) {
        case MemMethod::full_adamw: return "full-adamw";
        case MemMethod::lora_adamw: return "lora-adamw";
        case MemMethod::galore: return "galore";
        case MemMethod::mlorc_adamw: return "mlorc-adamw";
    }
    return "?";
}

MemoryCount memory_count(MemMethod method, int m, int n, int r) {
    if (m < 1 || n < 1 || r < 1) {
        throw std::invalid_argument("memory_count: m, n, r must be >= 1");
    }
    const long long mn = static_cast<long long>(m) * n;
    const long long mr = static_cast<long long>(m) * r;
    const long long nr = static_cast<long long>(n) * r;
    switch (method) {
        case MemMethod::full_adamw: return {method, mn, 2 * mn};
        case MemMethod::lora_adamw: return {method, mn + mr + nr, 2 * mr + 2 * nr};
        case MemMethod::galore: return {method, mn, mr + 2 * nr};
        case MemMethod::mlorc_adamw: return {method, mn, 2 * mr + 2 * nr};
    }
    throw std::invalid_argument("memory_count: unknown method");
}

namespace {

long long factored_elements(const FactoredMomentum& f) {
    // s is absorbed by convention
    return static_cast<long long>(f.u.size()) + static_cast<long long>(f.v.size());
}

}  // namespace

long long measured_state_elements(const OptState& state) {
    return std::visit(
        [](const auto& s) -> long long {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AdamWState>) {
                return static_cast<long long>(s.m.size()) + static_cast<long long>(s.v.size());
            } else if constexpr (std::is_same_v<T, LionState>) {
                return static_cast<long long>(s.m.size());
            } else if constexpr (std::is_same_v<T, MLorcAdamWState>) {
                return factored_elements(s.fm) + factored_elements(s.fv);
            } else if constexpr (std::is_same_v<T, MLorcLionState>) {
                return factored_elements(s.fm);
            } else {
                return static_cast<long long>(s.projector.size()) +
                       static_cast<long long>(s.m_low.size()) +
                       static_cast<long long>(s.v_low.size());
            }
        },
        state);
}

GradTrace grad_l11_trace(std::span<const Matrix> gradients) {
    std::vector<double> norms;
    norms.reserve(gradients.size());
    for (const Matrix& g : gradients) norms.push_back(l11_norm(g));
    return grad_l11_trace(std::span<const double>(norms));
}

GradTrace grad_l11_trace(std::span<const double> l11_norms) {
    GradTrace trace;
    trace.per_step.assign(l11_norms.begin(), l11_norms.end());
    trace.running_avg.resize(trace.per_step.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < trace.per_step.size(); ++i) {
        sum += trace.per_step[i];
        trace.running_avg[i] = sum / static_cast<double>(i + 1);
    }
    return trace;
}

}  // namespace mlorc
