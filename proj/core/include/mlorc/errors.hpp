#ifndef MLORC_ERRORS_HPP
#define MLORC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlorc {

// Dimension or structural mismatch between operands.
class shape_error : public std::invalid_argument {
public:
    explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid or inconsistent experiment configuration; message names the field.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A run hit a non-finite value and was aborted at `step`.
class run_abort_error : public std::runtime_error {
public:
    run_abort_error(long long step, const std::string& what)
        : std::runtime_error(what), step_(step) {}
    long long step() const { return step_; }

private:
    long long step_;
};

}  // namespace mlorc

#endif
