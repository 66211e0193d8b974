#include "avc/decoder.hpp"

#include <cmath>
#include <limits>

#include "avc/errors.hpp"

namespace avc {

namespace {

struct ScanState {
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_word = ~std::uint64_t{0}; // flat index, lowest wins ties
};

// squared distance |y - word|^2 via the inner product
inline double dist2(const double* w, const double* y, int n, double ynorm2, double wnorm2) {
    double ip = 0;
    for (int c = 0; c < n; ++c) ip += w[c] * y[c];
    return ynorm2 + wnorm2 - 2.0 * ip;
}

template <bool Parallel>
DecodeResult decode_impl(const Codebook& cb, std::span<const double> y) {
    const auto& code = cb.code();
    const int n = cb.params().n;
    if (y.size() != static_cast<std::size_t>(n))
        throw DimensionError("decode: received vector length != n");
    const double ynorm2 = norm2(y);
    const std::int64_t total = static_cast<std::int64_t>(code.total_words());
    const double* words = cb.data();
    const double* norms = cb.norms2();

    // pass 1: global minimum with deterministic lowest-index tie break
    ScanState st;
    if constexpr (Parallel) {
#pragma omp parallel
        {
            ScanState local;
            RealVector buf(words ? 0 : n);
#pragma omp for schedule(static) nowait
            for (std::int64_t w = 0; w < total; ++w) {
                const double* wp;
                double wn;
                if (words) {
                    wp = words + static_cast<std::size_t>(w) * n;
                    wn = norms[w];
                } else {
                    const std::uint64_t i = static_cast<std::uint64_t>(w) / code.keys_per_row + 1;
                    const std::uint64_t t = static_cast<std::uint64_t>(w) % code.keys_per_row + 1;
                    generate_codeword(cb.seed(), n, cb.radius(), i, t, buf.data());
                    wp = buf.data();
                    wn = norm2(buf);
                }
                const double d = dist2(wp, y.data(), n, ynorm2, wn);
                if (d < local.best ||
                    (d == local.best && static_cast<std::uint64_t>(w) < local.best_word)) {
                    local.best = d;
                    local.best_word = static_cast<std::uint64_t>(w);
                }
            }
#pragma omp critical
            {
                if (local.best < st.best ||
                    (local.best == st.best && local.best_word < st.best_word)) {
                    st = local;
                }
            }
        }
    } else {
        RealVector buf(words ? 0 : n);
        for (std::int64_t w = 0; w < total; ++w) {
            const double* wp;
            double wn;
            if (words) {
                wp = words + static_cast<std::size_t>(w) * n;
                wn = norms[w];
            } else {
                const std::uint64_t i = static_cast<std::uint64_t>(w) / code.keys_per_row + 1;
                const std::uint64_t t = static_cast<std::uint64_t>(w) % code.keys_per_row + 1;
                generate_codeword(cb.seed(), n, cb.radius(), i, t, buf.data());
                wp = buf.data();
                wn = norm2(buf);
            }
            const double d = dist2(wp, y.data(), n, ynorm2, wn);
            if (d < st.best || (d == st.best && static_cast<std::uint64_t>(w) < st.best_word)) {
                st.best = d;
                st.best_word = static_cast<std::uint64_t>(w);
            }
        }
    }

    // pass 2: collect candidates within tolerance of the minimum
    const double tol = tie_tolerance(cb.params());
    const std::uint64_t min_row = st.best_word / code.keys_per_row + 1;
    std::int64_t within = 0;
    std::int64_t off_row = 0;
#pragma omp parallel for schedule(static) reduction(+ : within, off_row) if (Parallel)
    for (std::int64_t w = 0; w < total; ++w) {
        double d;
        if (words) {
            d = dist2(words + static_cast<std::size_t>(w) * n, y.data(), n, ynorm2, norms[w]);
        } else {
            RealVector buf(static_cast<std::size_t>(n));
            const std::uint64_t i = static_cast<std::uint64_t>(w) / code.keys_per_row + 1;
            const std::uint64_t t = static_cast<std::uint64_t>(w) % code.keys_per_row + 1;
            generate_codeword(cb.seed(), n, cb.radius(), i, t, buf.data());
            d = dist2(buf.data(), y.data(), n, ynorm2, norm2(buf));
        }
        if (d <= st.best + tol) {
            ++within;
            if (static_cast<std::uint64_t>(w) / code.keys_per_row + 1 != min_row) ++off_row;
        }
    }

    DecodeResult r;
    r.argmin_row = min_row;
    r.tie = within > 1;
    r.declared = off_row > 0 ? 0 : min_row;
    return r;
}

} // namespace

DecodeResult decode(const Codebook& cb, std::span<const double> y) {
    return decode_impl<true>(cb, y);
}

DecodeResult decode_serial(const Codebook& cb, std::span<const double> y) {
    return decode_impl<false>(cb, y);
}

bool error_event(const Codebook& cb, std::uint64_t i, std::uint64_t t,
                 std::span<const double> s, std::span<const double> v) {
    const int n = cb.params().n;
    if (s.size() != static_cast<std::size_t>(n) || v.size() != static_cast<std::size_t>(n))
        throw DimensionError("error_event: state/noise length != n");
    RealVector x = cb.word(i, t);
    RealVector sv(static_cast<std::size_t>(n));
    RealVector y(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        sv[c] = s[c] + v[c];
        y[c] = x[c] + sv[c];
    }
    const double rhs = cb.params().transmit_energy() + dot(x, sv);
    RealVector buf(static_cast<std::size_t>(n));
    for (std::uint64_t j = 1; j <= cb.code().m; ++j) {
        if (j == i) continue;
        for (std::uint64_t tp = 1; tp <= cb.code().keys_per_row; ++tp) {
            cb.get_word(j, tp, buf.data());
            if (dot(buf, y) >= rhs) return true;
        }
    }
    return false;
}

bool error_event_distance_form(const Codebook& cb, std::uint64_t i, std::uint64_t t,
                               std::span<const double> s, std::span<const double> v) {
    const int n = cb.params().n;
    if (s.size() != static_cast<std::size_t>(n) || v.size() != static_cast<std::size_t>(n))
        throw DimensionError("error_event: state/noise length != n");
    RealVector x = cb.word(i, t);
    RealVector sv(static_cast<std::size_t>(n));
    RealVector y(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        sv[c] = s[c] + v[c];
        y[c] = x[c] + sv[c];
    }
    const double svn = norm2(sv);
    RealVector buf(static_cast<std::size_t>(n));
    for (std::uint64_t j = 1; j <= cb.code().m; ++j) {
        if (j == i) continue;
        for (std::uint64_t tp = 1; tp <= cb.code().keys_per_row; ++tp) {
            cb.get_word(j, tp, buf.data());
            double d = 0;
            for (int c = 0; c < n; ++c) {
                const double diff = y[c] - buf[c];
                d += diff * diff;
            }
            if (d <= svn) return true;
        }
    }
    return false;
}

} // namespace avc
