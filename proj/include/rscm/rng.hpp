#pragma once

#include <cstdint>
#include <random>

namespace rscm {

// Deterministic random stream. Streams for independent work items are
// derived from a (master seed, index) pair through a SplitMix64
// finalizer, so trial i always sees the same draws no matter how the
// trials are scheduled across threads.
//
// All variates are generated by explicit algorithms on top of the raw
// 64-bit engine output (never std::*_distribution), so sequences are
// identical across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t mix(std::uint64_t master, std::uint64_t index);
    static RngStream derive(std::uint64_t master, std::uint64_t index) {
        return RngStream(mix(master, index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);

    // Uniform integer on {lo, ..., hi}, unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal, Marsaglia polar method (one value cached).
    double normal();

    // Gamma(shape, 1) for shape >= 1, Marsaglia-Tsang squeeze method.
    double gamma(double shape);

    // Chi-square with (possibly non-integer) dof > 2.
    double chi_squared(double dof);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace rscm
