#ifndef MLORC_RNG_HPP
#define MLORC_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mlorc {

// Seeded Gaussian stream. The engine (mt19937_64) and the Box-Muller
// transform are both pinned down explicitly, so an identical seed yields an
// identical draw sequence on every run and platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    // standard normal draw
    double normal();

    // uniform in [0, 1)
    double uniform01();

    // uniform integer in [0, bound)
    std::uint64_t uniform_below(std::uint64_t bound);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64-based combination of seed components, e.g.
// (experiment seed, stream tag, step counter) -> per-step substream seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

// stream tags used by the harness
inline constexpr std::uint64_t kStreamProblem = 1;
inline constexpr std::uint64_t kStreamInit = 2;
inline constexpr std::uint64_t kStreamGrad = 3;
inline constexpr std::uint64_t kStreamOptimizer = 4;

}  // namespace mlorc

#endif
