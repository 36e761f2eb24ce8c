#pragma once

#include <cstdint>
#include <random>

namespace precnet {

// Portable seeded stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the uniform and normal transforms are implemented
// here because the std distributions are implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    // Independent stream derived from (seed, index); does not advance *this.
    RngStream child(std::uint64_t index) const {
        return RngStream(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    // Standard normal via the Marsaglia polar method.
    double normal();

private:
    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace precnet
