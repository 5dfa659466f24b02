#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace adenet {

// splitmix64 step (Steele/Lea/Flood mixing constants); used only to derive
// well-spread engine seeds from small (base, replication, stream) tuples.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replication,
                                 std::uint64_t stream) {
    std::uint64_t s = base;
    (void)splitmix64(s);
    s += 0x9E3779B97F4A7C15ULL * (replication + 1);
    (void)splitmix64(s);
    s += 0xD1B54A32D192ED03ULL * (stream + 1);
    return splitmix64(s);
}

// Deterministic generator fixed for the whole repo: mt19937_64 engine
// (bit-exact by the C++ standard) with Box-Muller normals. Results are
// reproducible across platforms and parallel schedules as long as each
// consumer owns its own stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng from_stream(std::uint64_t base, std::uint64_t replication,
                           std::uint64_t stream) {
        return Rng(derive_seed(base, replication, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [2^-54, 1 - 2^-54]; never returns an exact 0 or 1
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace adenet
