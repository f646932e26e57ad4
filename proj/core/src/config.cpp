#include "mlorc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mlorc/errors.hpp"

namespace mlorc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw config_error(field + ": " + why);
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& prefix, const char* key,
                  bool required, double fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) fail(prefix + key, "missing required field");
        return fallback;
    }
    if (!v->is_number()) fail(prefix + key, "expected a number");
    return v->get<double>();
}

long long get_integer(const json& obj, const std::string& prefix, const char* key,
                      bool required, long long fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) fail(prefix + key, "missing required field");
        return fallback;
    }
    if (!v->is_number_integer()) fail(prefix + key, "expected an integer");
    return v->get<long long>();
}

std::string get_string(const json& obj, const std::string& prefix, const char* key,
                       bool required, const std::string& fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) fail(prefix + key, "missing required field");
        return fallback;
    }
    if (!v->is_string()) fail(prefix + key, "expected a string");
    return v->get<std::string>();
}

bool get_bool(const json& obj, const std::string& prefix, const char* key, bool fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(prefix + key, "expected a boolean");
    return v->get<bool>();
}

ProblemSpec parse_problem(const json& obj) {
    if (!obj.is_object()) fail("problem", "expected an object");
    ProblemSpec spec;
    const std::string kind = get_string(obj, "problem.", "kind", true, "");
    if (kind == "quadratic") {
        spec.kind = ProblemKind::quadratic;
        spec.rows = static_cast<int>(get_integer(obj, "problem.", "rows", true, 0));
        spec.cols = static_cast<int>(get_integer(obj, "problem.", "cols", true, 0));
        if (spec.rows < 1) fail("problem.rows", "must be >= 1");
        if (spec.cols < 1) fail("problem.cols", "must be >= 1");
        spec.a_rows = static_cast<int>(get_integer(obj, "problem.", "a_rows", false, spec.rows));
        spec.b_cols = static_cast<int>(get_integer(obj, "problem.", "b_cols", false, spec.cols));
        if (spec.a_rows < 1) fail("problem.a_rows", "must be >= 1");
        if (spec.b_cols < 1) fail("problem.b_cols", "must be >= 1");
        spec.planted_rank = static_cast<int>(get_integer(obj, "problem.", "planted_rank", false,
                                                         std::min(spec.rows, spec.cols)));
        if (spec.planted_rank < 1 || spec.planted_rank > std::min(spec.rows, spec.cols)) {
            fail("problem.planted_rank", "must be in [1, min(rows, cols)]");
        }
        spec.noise_std = get_number(obj, "problem.", "noise_std", false, 0.0);
        if (spec.noise_std < 0.0) fail("problem.noise_std", "must be >= 0");
        spec.c_noise_std = get_number(obj, "problem.", "c_noise_std", false, 0.0);
        if (spec.c_noise_std < 0.0) fail("problem.c_noise_std", "must be >= 0");
    } else if (kind == "logistic") {
        spec.kind = ProblemKind::logistic;
        spec.dataset = get_string(obj, "problem.", "dataset", false, "");
        if (spec.dataset.empty()) {
            spec.num_samples =
                static_cast<int>(get_integer(obj, "problem.", "num_samples", true, 0));
            spec.num_features =
                static_cast<int>(get_integer(obj, "problem.", "num_features", true, 0));
            if (spec.num_samples < 1) fail("problem.num_samples", "must be >= 1");
            if (spec.num_features < 1) fail("problem.num_features", "must be >= 1");
        }
        spec.rows = static_cast<int>(get_integer(obj, "problem.", "rows", false, 4));
        if (spec.rows < 1) fail("problem.rows", "must be >= 1");
        spec.l2_reg = get_number(obj, "problem.", "l2_reg", false, 0.0);
        if (spec.l2_reg < 0.0) fail("problem.l2_reg", "must be >= 0");
    } else {
        fail("problem.kind", "unknown value \"" + kind + "\" (expected quadratic|logistic)");
    }
    return spec;
}

ScheduleSpec parse_schedule(const json* obj) {
    ScheduleSpec spec;
    if (!obj) return spec;
    if (!obj->is_object()) fail("schedule", "expected an object");
    const std::string kind = get_string(*obj, "schedule.", "kind", false, "constant");
    if (kind == "constant") {
        spec.kind = ScheduleKind::constant;
    } else if (kind == "linear") {
        spec.kind = ScheduleKind::linear;
        spec.warmup_ratio = get_number(*obj, "schedule.", "warmup_ratio", false, 0.03);
        if (spec.warmup_ratio < 0.0 || spec.warmup_ratio > 1.0) {
            fail("schedule.warmup_ratio", "must be in [0, 1]");
        }
    } else {
        fail("schedule.kind", "unknown value \"" + kind + "\" (expected constant|linear)");
    }
    return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config: top level must be an object");

    ExperimentConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(get_integer(doc, "", "seed", true, 0));

    const json* prob = find(doc, "problem");
    if (!prob) fail("problem", "missing required field");
    cfg.problem = parse_problem(*prob);

    const json* opt = find(doc, "optimizer");
    if (!opt || !opt->is_object()) fail("optimizer", "missing required field");
    cfg.optimizer = opt_kind_from_string(get_string(*opt, "optimizer.", "kind", true, ""));

    HyperParams hp;
    hp.beta1 = cfg.optimizer == OptKind::mlorc_adamw ? 0.8 : 0.9;
    hp.beta2 = is_lion_family(cfg.optimizer) ? 0.99 : 0.999;
    hp.alpha = get_number(*opt, "optimizer.", "alpha", true, 0.0);
    hp.beta1 = get_number(*opt, "optimizer.", "beta1", false, hp.beta1);
    hp.beta2 = get_number(*opt, "optimizer.", "beta2", false, hp.beta2);
    hp.weight_decay = get_number(*opt, "optimizer.", "weight_decay", false, 0.0);
    hp.epsilon = get_number(*opt, "optimizer.", "epsilon", false, 1e-8);
    hp.rank = static_cast<int>(get_integer(*opt, "optimizer.", "rank", false, 4));
    hp.oversample = static_cast<int>(get_integer(*opt, "optimizer.", "oversample", false, 0));
    hp.batch_size = static_cast<int>(get_integer(*opt, "optimizer.", "batch_size", false, 1));
    hp.galore_update_freq =
        static_cast<int>(get_integer(*opt, "optimizer.", "galore_update_freq", false, 200));
    validate(hp);
    cfg.hp = hp;

    cfg.steps = get_integer(doc, "", "steps", true, 0);
    if (cfg.steps < 1) fail("steps", "must be >= 1");
    cfg.record_every = get_integer(doc, "", "record_every", false, 1);
    if (cfg.record_every < 1 || cfg.record_every > cfg.steps) {
        fail("record_every", "must be in [1, steps]");
    }
    cfg.spectral_k = static_cast<int>(get_integer(doc, "", "spectral_k", false, 8));
    if (cfg.spectral_k < 1) fail("spectral_k", "must be >= 1");
    cfg.hp.warm_start_lion_momentum = get_bool(doc, "", "warm_start_lion_momentum", false);
    cfg.w0_scale = get_number(doc, "", "w0_scale", false, 0.0);
    if (cfg.w0_scale < 0.0) fail("w0_scale", "must be >= 0");
    cfg.schedule = parse_schedule(find(doc, "schedule"));
    cfg.output_path = get_string(doc, "", "output_path", false, "");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Problem build_problem(const ExperimentConfig& cfg) {
    RngStream rng(derive_seed({cfg.seed, kStreamProblem}));
    if (cfg.problem.kind == ProblemKind::quadratic) {
        return make_planted_quadratic(cfg.problem.a_rows, cfg.problem.rows, cfg.problem.cols,
                                      cfg.problem.b_cols, cfg.problem.planted_rank,
                                      cfg.problem.noise_std, cfg.problem.c_noise_std, rng);
    }
    if (!cfg.problem.dataset.empty()) {
        return load_logistic_csv(cfg.problem.dataset, cfg.problem.rows, cfg.problem.l2_reg);
    }
    return make_synthetic_logistic(cfg.problem.num_samples, cfg.problem.num_features,
                                   cfg.problem.rows, cfg.problem.l2_reg, rng);
}

double scheduled_alpha(const ExperimentConfig& cfg, long long t) {
    if (cfg.schedule.kind == ScheduleKind::constant) return cfg.hp.alpha;
    const auto warm = static_cast<long long>(
        std::ceil(cfg.schedule.warmup_ratio * static_cast<double>(cfg.steps)));
    if (warm > 0 && t <= warm) {
        return cfg.hp.alpha * static_cast<double>(t) / static_cast<double>(warm);
    }
    const long long tail = cfg.steps - warm;
    if (tail <= 0) return cfg.hp.alpha;
    // decays from alpha down to alpha/tail on the final step
    return cfg.hp.alpha * static_cast<double>(cfg.steps - t + 1) / static_cast<double>(tail);
}

}  // namespace mlorc
