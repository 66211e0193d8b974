#include "avc/codebook.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <string>

#include "avc/errors.hpp"

namespace avc {

void sample_sphere(Rng& rng, int n, double radius, double* out) {
    if (n < 1) throw ConstraintError("n >= 1");
    if (!(radius > 0)) throw ConstraintError("radius > 0");
    double nrm2;
    do {
        nrm2 = 0;
        for (int i = 0; i < n; ++i) {
            out[i] = rng.next_gaussian();
            nrm2 += out[i] * out[i];
        }
    } while (nrm2 == 0.0);
    const double scale = radius / std::sqrt(nrm2);
    for (int i = 0; i < n; ++i) out[i] *= scale;
}

RealVector sample_sphere(Rng& rng, int n, double radius) {
    RealVector v(static_cast<std::size_t>(n));
    sample_sphere(rng, n, radius, v.data());
    return v;
}

void generate_codeword(std::uint64_t seed, int n, double radius, std::uint64_t i,
                       std::uint64_t t, double* out) {
    Rng rng(derive_seed(seed, seed_tag::codeword, i, t));
    sample_sphere(rng, n, radius, out);
}

Codebook Codebook::build(std::uint64_t seed, const ChannelParams& params,
                         const CodeParams& code, Storage mode,
                         std::size_t memory_budget_bytes) {
    params.validate();
    Codebook cb;
    cb.params_ = params;
    cb.code_ = code;
    cb.seed_ = seed;
    cb.storage_ = mode;
    cb.radius_ = std::sqrt(params.transmit_energy());
    if (mode == Storage::materialized) {
        if (!code.m_exact && code.log_m + code.log_keys > 40.0)
            throw ConfigError(
                "codebook too large to materialize; use regenerate-on-demand mode");
        const std::uint64_t total = code.total_words();
        const std::uint64_t bytes = total * static_cast<std::uint64_t>(params.n) * 8;
        if (bytes > memory_budget_bytes)
            throw ConfigError("codebook memory budget exceeded (" + std::to_string(bytes) +
                              " bytes needed); use regenerate-on-demand mode");
        cb.words_.resize(static_cast<std::size_t>(total) * params.n);
        cb.norms2_.resize(static_cast<std::size_t>(total));
        const std::int64_t total_s = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static)
        for (std::int64_t w = 0; w < total_s; ++w) {
            const std::uint64_t i = static_cast<std::uint64_t>(w) / code.keys_per_row + 1;
            const std::uint64_t t = static_cast<std::uint64_t>(w) % code.keys_per_row + 1;
            double* dst = cb.words_.data() + static_cast<std::size_t>(w) * params.n;
            generate_codeword(seed, params.n, cb.radius_, i, t, dst);
            cb.norms2_[static_cast<std::size_t>(w)] =
                norm2({dst, static_cast<std::size_t>(params.n)});
        }
    }
    return cb;
}

Codebook Codebook::from_words(const ChannelParams& params, const CodeParams& code,
                              std::vector<RealVector> words) {
    params.validate();
    if (words.size() != code.total_words())
        throw DimensionError("from_words: word count != M*keysPerRow");
    Codebook cb;
    cb.params_ = params;
    cb.code_ = code;
    cb.storage_ = Storage::materialized;
    cb.radius_ = std::sqrt(params.transmit_energy());
    cb.generated_ = false;
    cb.words_.reserve(words.size() * params.n);
    cb.norms2_.reserve(words.size());
    const double np = params.transmit_energy();
    for (const auto& w : words) {
        if (w.size() != static_cast<std::size_t>(params.n))
            throw DimensionError("from_words: word length != n");
        const double nn = norm2(w);
        if (std::fabs(nn - np) > kPowerTolerance * np)
            throw ConstraintError("codeword norm", "|x|^2 must equal n*P");
        cb.words_.insert(cb.words_.end(), w.begin(), w.end());
        cb.norms2_.push_back(nn);
    }
    return cb;
}

void Codebook::check_indices(std::uint64_t i, std::uint64_t t) const {
    if (i < 1 || i > code_.m) throw IndexError("message index out of range");
    if (t < 1 || t > code_.keys_per_row) throw IndexError("key index out of range");
}

std::size_t Codebook::flat_index(std::uint64_t i, std::uint64_t t) const {
    return static_cast<std::size_t>((i - 1) * code_.keys_per_row + (t - 1));
}

void Codebook::get_word(std::uint64_t i, std::uint64_t t, double* out) const {
    check_indices(i, t);
    if (!words_.empty()) {
        std::memcpy(out, words_.data() + flat_index(i, t) * params_.n,
                    sizeof(double) * params_.n);
    } else {
        generate_codeword(seed_, params_.n, radius_, i, t, out);
    }
}

RealVector Codebook::word(std::uint64_t i, std::uint64_t t) const {
    RealVector v(static_cast<std::size_t>(params_.n));
    get_word(i, t, v.data());
    return v;
}

double Codebook::word_norm2(std::uint64_t i, std::uint64_t t) const {
    check_indices(i, t);
    if (!norms2_.empty()) return norms2_[flat_index(i, t)];
    RealVector w = word(i, t);
    return norm2(w);
}

Transmission Codebook::encode(std::uint64_t i, Rng& rng) const {
    if (i < 1 || i > code_.m) throw IndexError("message index out of range");
    Transmission tx;
    tx.message = i;
    tx.key = 1 + rng.next_below(code_.keys_per_row);
    tx.codeword = word(i, tx.key);
    return tx;
}

namespace {
void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}
void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}
void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}
} // namespace

void Codebook::export_binary(std::ostream& os) const {
    if (!code_.m_exact)
        throw ConfigError("codebook export requires an exactly representable M");
    os.write("AVCB", 4);
    put_u32(os, 1);
    put_u64(os, static_cast<std::uint64_t>(params_.n));
    put_u64(os, code_.m);
    put_u64(os, code_.keys_per_row);
    put_u64(os, seed_);
    RealVector buf(static_cast<std::size_t>(params_.n));
    for (std::uint64_t i = 1; i <= code_.m; ++i)
        for (std::uint64_t t = 1; t <= code_.keys_per_row; ++t) {
            get_word(i, t, buf.data());
            for (double d : buf) put_f64(os, d);
        }
}

} // namespace avc
