#ifndef AVC_CODEBOOK_HPP
#define AVC_CODEBOOK_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "avc/model.hpp"
#include "avc/rng.hpp"

namespace avc {

// uniform point on the sphere of the given radius: n iid standard
// Gaussians rescaled to exact norm (zero vector redrawn)
RealVector sample_sphere(Rng& rng, int n, double radius);
void sample_sphere(Rng& rng, int n, double radius, double* out);

enum class Storage {
    materialized, // all words held in memory
    on_demand     // words recomputed from (seed, i, t) on access
};

struct Transmission {
    std::uint64_t message = 1; // row index, 1-based
    std::uint64_t key = 1;     // column index, 1-based
    RealVector codeword;
};

// The M x keysPerRow array of spherical codewords.  Word (i, t) is a pure
// function of (seed, i, t), so the materialized and on-demand modes agree
// bit for bit; materialized storage is just a cache.
class Codebook {
public:
    static Codebook build(std::uint64_t seed, const ChannelParams& params,
                          const CodeParams& code, Storage mode,
                          std::size_t memory_budget_bytes = kDefaultMemoryBudget);

    // hand-built words, for tests and oracles
    static Codebook from_words(const ChannelParams& params, const CodeParams& code,
                               std::vector<RealVector> words);

    const ChannelParams& params() const { return params_; }
    const CodeParams& code() const { return code_; }
    std::uint64_t seed() const { return seed_; }
    Storage storage() const { return storage_; }
    double radius() const { return radius_; }

    // copies/recomputes word (i, t) into out (size n); 1-based indices
    void get_word(std::uint64_t i, std::uint64_t t, double* out) const;
    RealVector word(std::uint64_t i, std::uint64_t t) const;

    // contiguous storage fast path; nullptr in on-demand mode
    const double* data() const { return words_.empty() ? nullptr : words_.data(); }
    const double* norms2() const { return norms2_.empty() ? nullptr : norms2_.data(); }
    double word_norm2(std::uint64_t i, std::uint64_t t) const;

    // stochastic encoder: key T uniform on {1..keysPerRow}
    Transmission encode(std::uint64_t i, Rng& rng) const;

    // binary export: 40-byte header (magic "AVCB", version u32, n u64,
    // M u64, keysPerRow u64, seed u64), then row-major f64 little-endian
    void export_binary(std::ostream& os) const;

    static constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 30;

private:
    Codebook() = default;
    void check_indices(std::uint64_t i, std::uint64_t t) const;
    std::size_t flat_index(std::uint64_t i, std::uint64_t t) const;

    ChannelParams params_;
    CodeParams code_;
    std::uint64_t seed_ = 0;
    Storage storage_ = Storage::materialized;
    double radius_ = 0;
    bool generated_ = true; // false for from_words
    std::vector<double> words_;  // M*keys*n when materialized
    std::vector<double> norms2_; // |word|^2 per word when materialized
};

// word derivation shared by both storage modes
void generate_codeword(std::uint64_t seed, int n, double radius, std::uint64_t i,
                       std::uint64_t t, double* out);

} // namespace avc

#endif
