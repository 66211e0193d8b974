#ifndef AVC_RNG_HPP
#define AVC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace avc {

// splitmix64 finalizer (Steele, Lea, Flood).  Used both as the stream
// update and to mix seeds for substream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Purpose tags for substream derivation.  Every consumer of randomness
// derives its own stream from (master seed, tag, indices), so results do
// not depend on scheduling or on how many threads run the trials.
namespace seed_tag {
inline constexpr std::uint64_t codeword        = 0x01;
inline constexpr std::uint64_t trial_strategy  = 0x02;
inline constexpr std::uint64_t trial_key       = 0x03;
inline constexpr std::uint64_t trial_noise     = 0x04;
inline constexpr std::uint64_t trial_thin      = 0x05;
inline constexpr std::uint64_t message_sample  = 0x06;
inline constexpr std::uint64_t sweep_codebook  = 0x07;
inline constexpr std::uint64_t attack          = 0x08;
inline constexpr std::uint64_t verify          = 0x09;
inline constexpr std::uint64_t converse        = 0x0a;
inline constexpr std::uint64_t probe           = 0x0b;
} // namespace seed_tag

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = mix64(master + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (tag + 0x9E3779B97F4A7C15ULL));
    h = mix64(h ^ (a + 0xD1B54A32D192ED03ULL));
    h = mix64(h ^ (b + 0x8CB92BA72F3D8DD7ULL));
    return h;
}

// Counter-based splitmix64 stream.  Deliberately self-contained (no
// std::normal_distribution) so that sequences are identical for a given
// seed on every build of this project.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via the Marsaglia polar method; one spare cached
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // unbiased uniform integer in [0, bound), Lemire's method
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace avc

#endif
