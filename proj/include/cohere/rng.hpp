#pragma once

#include <cmath>
#include <cstdint>

namespace cohere::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Keyed stream derivation. For a fixed key the map index -> seed is injective
// (kGolden is odd), so derived streams never collide. Chaining derive_stream
// gives the per-column keying hash(master_seed, replicate, column).
constexpr std::uint64_t derive_stream(std::uint64_t key, std::uint64_t index) {
    return mix64(key + kGolden * (index + 1));
}

// Counter-based uniform/normal stream (SplitMix64 sequence, Box-Muller pairs).
// One Stream per column; generation order within a column is fixed, so output
// is independent of any parallel schedule across columns.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // uniform on (0, 1]; never returns 0 so log() below is safe
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cohere::rng
