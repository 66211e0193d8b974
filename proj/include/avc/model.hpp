#ifndef AVC_MODEL_HPP
#define AVC_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "avc/errors.hpp"
#include "avc/rng.hpp"

namespace avc {

using RealVector = std::vector<double>;

// Relative slack on squared-norm power checks; codewords are placed on the
// sphere exactly, so this only absorbs accumulation error in |.|^2.
inline constexpr double kPowerTolerance = 1e-9;

// One channel instance: block length and per-symbol powers.  The transmit
// energy budget is n*P and the jammer energy budget is n*Lambda, both peak
// (they must hold for every realization).
struct ChannelParams {
    int n = 1;          // block length (channel uses)
    double P = 1.0;     // transmit power per symbol
    double Lambda = 0;  // jammer power per symbol
    double sigma2 = 0;  // AWGN variance per symbol

    void validate() const;
    double transmit_energy() const { return static_cast<double>(n) * P; }
    double jam_energy() const { return static_cast<double>(n) * Lambda; }
};

// Code sizing.  M = ceil(e^{nR}) messages, keysPerRow = ceil(e^{n*delta0})
// codewords per message row; both are recomputed from (n, R, delta0).
// Rates are in nats throughout.  For rates where e^{nR} exceeds what a
// 64-bit count can hold, `m` saturates and `m_exact` turns false; the
// log-domain value `log_m` stays exact and estimation switches to the
// ensemble competitor model (see estimator).
struct CodeParams {
    double R = 0;
    double delta0 = 0;
    std::uint64_t m = 1;
    std::uint64_t keys_per_row = 1;
    bool m_exact = true;
    double log_m = 0;        // n*R
    double log_keys = 0;     // n*delta0

    static CodeParams make(int n, double rate, double delta0);
    // for tests and tiny hand-built instances
    static CodeParams from_counts(int n, std::uint64_t m, std::uint64_t keys);

    std::uint64_t total_words() const { return m * keys_per_row; }
    // natural log of the number of codewords outside a given row
    double log_wrong_words() const;
};

// y = x + s + v
RealVector apply_channel(std::span<const double> x, std::span<const double> s,
                         std::span<const double> v);

// n iid draws from N(0, sigma2); sigma2 = 0 yields the zero vector
RealVector sample_noise(Rng& rng, int n, double sigma2);
void sample_noise(Rng& rng, int n, double sigma2, double* out);

// true iff |v|^2 <= n * perSymbolBudget * (1 + kPowerTolerance)
bool check_power(std::span<const double> v, double per_symbol_budget);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

} // namespace avc

#endif
