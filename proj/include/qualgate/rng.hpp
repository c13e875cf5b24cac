#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qualgate {

/// Deterministic RNG wrapper with a documented draw discipline so manifests
/// regenerate identically everywhere: the engine is std::mt19937_64 (fully
/// specified by the standard) and bounded draws use rejection sampling on
/// raw 64-bit words instead of std::uniform_int_distribution, whose output
/// is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0; rejection on the top
    /// incomplete block.
    uint64_t below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % bound;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 step; used to derive independent per-stream seeds from one
/// run seed.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

/// k distinct indices from [0, n) by partial Fisher-Yates, returned sorted
/// ascending so manifests keep input order.
std::vector<size_t> sample_indices_without_replacement(size_t n, size_t k, Rng& rng);

} // namespace qualgate
