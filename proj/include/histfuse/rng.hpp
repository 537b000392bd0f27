#ifndef HISTFUSE_RNG_HPP
#define HISTFUSE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace histfuse::mc {

// Splittable generator: one independent stream per replication index, derived
// from (seed, index) by avalanche mixing. Draws depend only on the pair, so
// results do not depend on how replications are distributed over threads.
class RepStream {
public:
    RepStream(std::uint64_t seed, std::uint64_t rep) {
        state_ = mix(mix(seed + 0x9E3779B97F4A7C15ULL * (rep + 1)) ^ rep);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // uniform on (0,1), never exactly 0 or 1
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; the pair partner is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Bernoulli-sum binomial; trial counts here stay small (<= a few hundred)
    std::int64_t binomial(std::int64_t trials, double p) {
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < trials; ++i)
            if (uniform() < p) ++count;
        return count;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace histfuse::mc

#endif
