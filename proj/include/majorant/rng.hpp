#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace majorant {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = a ^ (0x9E3779B97F4A7C15ull * (b + 1));
    std::uint64_t z = splitmix64(state);
    return z ^ splitmix64(state);
}

} // namespace detail

/// Reproducible random stream addressed by (master seed, stream index).
///
/// The same (seed, index) pair always yields the same sample sequence;
/// distinct indices yield streams that are statistically independent.
/// Replication-level parallelism hands one index per replication, so
/// results do not depend on how work is scheduled across threads.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_(master_seed),
          index_(stream_index),
          key_(detail::derive_key(master_seed, stream_index)),
          gen_(key_) {}

    /// A derived stream, independent of this one and of other salts.
    RngStream substream(std::uint64_t salt) const {
        RngStream s(*this);
        s.key_ = detail::derive_key(key_, salt);
        s.gen_.seed(s.key_);
        s.have_spare_ = false;
        return s;
    }

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_index() const noexcept { return index_; }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform; pairs are cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::uint64_t master_;
    std::uint64_t index_;
    std::uint64_t key_;
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace majorant
