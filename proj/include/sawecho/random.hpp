#pragma once

#include <cstdint>
#include <random>

namespace sawecho {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for one independent realization: mix64 chained over
/// (master_seed, grid_index, realization_index).
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t grid_index,
                                    std::uint64_t realization_index) {
    return mix64(mix64(mix64(master_seed) ^ grid_index) ^ realization_index);
}

/// Per-realization random stream. Uniform draws are built from the raw
/// 64-bit engine output so they do not depend on the standard library's
/// distribution implementation.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    NoiseStream(std::uint64_t master_seed, std::uint64_t grid_index, std::uint64_t realization_index)
        : engine_(stream_seed(master_seed, grid_index, realization_index)) {}

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-half_width, half_width).
    double symmetric(double half_width) { return half_width * (2.0 * unit() - 1.0); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sawecho
