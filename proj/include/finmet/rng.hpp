#ifndef FINMET_RNG_HPP
#define FINMET_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace finmet::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based substream: the draws for sample k depend only on (seed, k),
// so results are independent of how samples are partitioned across workers.
class SampleStream {
  public:
    SampleStream(std::uint64_t seed, std::uint64_t sample_index)
        : state_(seed ^ (0xD1B54A32D192ED03ull * (sample_index + 1))) {
        // decorrelate nearby sample indices
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in (0, 1]
    double uniform() {
        while (true) {
            double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace finmet::rng

#endif
