#include "avc/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace avc {

void ChannelParams::validate() const {
    if (n < 1) throw ConstraintError("n >= 1");
    if (!(P > 0)) throw ConstraintError("P > 0");
    if (!(Lambda >= 0)) throw ConstraintError("Lambda >= 0");
    if (!(sigma2 >= 0)) throw ConstraintError("sigma2 >= 0");
}

namespace {

// ceil(e^x) with a saturation flag once the count stops being exactly
// representable in 64 bits.
std::pair<std::uint64_t, bool> ceil_exp(double x) {
    // e^36 ~ 4.3e15 < 2^53, so ceil() below is exact in this range
    if (x <= 36.0) {
        return {static_cast<std::uint64_t>(std::ceil(std::exp(x))), true};
    }
    if (x < 43.0) { // still fits a u64 but past exact double integers
        return {static_cast<std::uint64_t>(std::ceil(std::exp(x))), false};
    }
    return {std::uint64_t{1} << 62, false};
}

} // namespace

CodeParams CodeParams::make(int n, double rate, double delta0) {
    if (n < 1) throw ConstraintError("n >= 1");
    if (!(rate >= 0)) throw ConstraintError("R >= 0");
    if (!(delta0 >= 0)) throw ConstraintError("delta0 >= 0");
    CodeParams cp;
    cp.R = rate;
    cp.delta0 = delta0;
    cp.log_m = n * rate;
    cp.log_keys = n * delta0;
    auto [m, m_ok] = ceil_exp(cp.log_m);
    auto [k, k_ok] = ceil_exp(cp.log_keys);
    if (!k_ok) throw ConstraintError("keysPerRow representable", "n*delta0 too large");
    cp.m = m;
    cp.m_exact = m_ok;
    cp.keys_per_row = k;
    return cp;
}

CodeParams CodeParams::from_counts(int n, std::uint64_t m, std::uint64_t keys) {
    if (m < 1 || keys < 1) throw ConstraintError("M >= 1 and keysPerRow >= 1");
    CodeParams cp;
    cp.m = m;
    cp.keys_per_row = keys;
    cp.m_exact = true;
    cp.R = std::log(static_cast<double>(m)) / n;
    cp.delta0 = std::log(static_cast<double>(keys)) / n;
    cp.log_m = std::log(static_cast<double>(m));
    cp.log_keys = std::log(static_cast<double>(keys));
    return cp;
}

double CodeParams::log_wrong_words() const {
    if (m_exact) {
        if (m <= 1) return -std::numeric_limits<double>::infinity();
        return std::log(static_cast<double>(m - 1)) + std::log(static_cast<double>(keys_per_row));
    }
    // log((M-1)*keys); the -1 is immaterial at this scale
    return log_m + log_keys;
}

RealVector apply_channel(std::span<const double> x, std::span<const double> s,
                         std::span<const double> v) {
    if (x.size() != s.size() || x.size() != v.size())
        throw DimensionError("apply_channel: length mismatch");
    RealVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + s[i] + v[i];
    return y;
}

void sample_noise(Rng& rng, int n, double sigma2, double* out) {
    if (sigma2 < 0) throw ConstraintError("sigma2 >= 0");
    if (sigma2 == 0) {
        for (int i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    const double sd = std::sqrt(sigma2);
    for (int i = 0; i < n; ++i) out[i] = sd * rng.next_gaussian();
}

RealVector sample_noise(Rng& rng, int n, double sigma2) {
    RealVector v(static_cast<std::size_t>(n));
    sample_noise(rng, n, sigma2, v.data());
    return v;
}

bool check_power(std::span<const double> v, double per_symbol_budget) {
    const double budget = static_cast<double>(v.size()) * per_symbol_budget;
    return norm2(v) <= budget * (1.0 + kPowerTolerance);
}

double norm2(std::span<const double> v) {
    double s = 0;
    for (double c : v) s += c * c;
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace avc
