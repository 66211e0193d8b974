#include "avc/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "avc/decoder.hpp"
#include "avc/errors.hpp"
#include "avc/special.hpp"

namespace avc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// trials per block in the exhaustive kernel; one block's received vectors
// stay cache resident while the codebook streams through once
constexpr std::uint64_t kBlock = 16;
} // namespace

std::string count_mode_name(CountMode m) {
    return m == CountMode::operational ? "operational" : "predicate";
}

CountMode parse_count_mode(const std::string& s) {
    if (s == "operational") return CountMode::operational;
    if (s == "predicate") return CountMode::predicate;
    throw ConfigError("unknown counting mode: " + s);
}

std::pair<double, double> wilson_ci(std::uint64_t errors, std::uint64_t trials,
                                    double confidence) {
    if (trials < 1) throw ConstraintError("trials >= 1");
    if (errors > trials) throw ConstraintError("errors <= trials");
    if (!(confidence > 0 && confidence < 1)) throw DomainError("confidence in (0,1)");
    const double z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

// Everything one trial contributes to the scan.
struct TrialState {
    RealVector y;
    RealVector s;
    double ynorm2 = 0;
    double rhs = 0; // n*P + <x(i,T), s+v>
    std::uint64_t impostor_row = 0;
    double down = kInf;
    double dwrong = kInf;
    double ip_wrong_max = -kInf;
};

void setup_trial(const Codebook& cb, std::uint64_t message, const PreparedJammer& pj,
                 std::uint64_t seed, std::uint64_t trial, TrialState& ts, RealVector& xbuf) {
    const auto& p = cb.params();
    const std::size_t n = static_cast<std::size_t>(p.n);
    Rng rs(derive_seed(seed, seed_tag::trial_strategy, message, trial));
    Emission em = emit_state(pj, cb, message, rs);
    Rng rk(derive_seed(seed, seed_tag::trial_key, message, trial));
    const std::uint64_t key = 1 + rk.next_below(cb.code().keys_per_row);
    Rng rv(derive_seed(seed, seed_tag::trial_noise, message, trial));
    cb.get_word(message, key, xbuf.data());
    ts.y.resize(n);
    ts.s = std::move(em.s);
    ts.impostor_row = em.impostor_row;
    ts.ynorm2 = 0;
    double rhs_ip = 0;
    for (std::size_t c = 0; c < n; ++c) {
        double v = 0;
        if (p.sigma2 > 0) v = std::sqrt(p.sigma2) * rv.next_gaussian();
        const double sv = ts.s[c] + v;
        ts.y[c] = xbuf[c] + sv;
        rhs_ip += xbuf[c] * sv;
        ts.ynorm2 += ts.y[c] * ts.y[c];
    }
    ts.rhs = p.transmit_energy() + rhs_ip;
    ts.down = kInf;
    ts.dwrong = kInf;
    ts.ip_wrong_max = -kInf;
}

// ln Pr[<X,y> >= tau] for X uniform on the sphere of squared radius np
double ln_cap_p(int n, double np, double ynorm2, double tau) {
    if (ynorm2 <= 0) return tau <= 0 ? 0.0 : -kInf;
    const double c = tau / (std::sqrt(np) * std::sqrt(ynorm2));
    return ln_sphere_cap_tail(n, std::clamp(c, -1.0, 1.0));
}

// 1 - (1-p)^N with ln p and ln N given; exact through the deep tail
double thin_prob(double ln_n, double ln_p) {
    if (ln_p == -kInf || ln_n == -kInf) return 0.0;
    if (ln_p >= 0) return 1.0;
    const double p = std::exp(ln_p);
    const double ln_mlog = p > 1e-10 ? std::log(-std::log1p(-p)) : ln_p;
    const double lnq = ln_n + ln_mlog;
    if (lnq > 36.0) return 1.0;
    return -std::expm1(-std::exp(lnq));
}

TrialCounts run_exhaustive(const Codebook& cb, std::uint64_t message, const PreparedJammer& pj,
                           std::uint64_t trials, std::uint64_t seed, bool parallel,
                           std::vector<std::pair<bool, bool>>* trace) {
    const auto& p = cb.params();
    const auto& code = cb.code();
    const int n = p.n;
    const double tol = tie_tolerance(p);
    const std::uint64_t keys = code.keys_per_row;
    const std::uint64_t total_words = code.total_words();
    const double* words = cb.data();
    const double* norms = cb.norms2();

    std::uint64_t op = 0, pred = 0;
    const std::int64_t nblocks =
        static_cast<std::int64_t>((trials + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static) reduction(+ : op, pred) if (parallel)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kBlock);
        const std::size_t bs = static_cast<std::size_t>(end - begin);
        std::array<TrialState, kBlock> ts;
        RealVector xbuf(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < bs; ++k)
            setup_trial(cb, message, pj, seed, begin + k, ts[k], xbuf);
        RealVector wbuf(words ? 0 : static_cast<std::size_t>(n));
        for (std::uint64_t w = 0; w < total_words; ++w) {
            const double* wp;
            double wn;
            if (words) {
                wp = words + static_cast<std::size_t>(w) * n;
                wn = norms[w];
            } else {
                const std::uint64_t i = w / keys + 1;
                const std::uint64_t t = w % keys + 1;
                generate_codeword(cb.seed(), n, cb.radius(), i, t, wbuf.data());
                wp = wbuf.data();
                wn = norm2(wbuf);
            }
            const bool own = (w / keys + 1) == message;
            for (std::size_t k = 0; k < bs; ++k) {
                const double* y = ts[k].y.data();
                double ip = 0;
                for (int c = 0; c < n; ++c) ip += wp[c] * y[c];
                const double d = ts[k].ynorm2 + wn - 2.0 * ip;
                if (own) {
                    if (d < ts[k].down) ts[k].down = d;
                } else {
                    if (d < ts[k].dwrong) ts[k].dwrong = d;
                    if (ip > ts[k].ip_wrong_max) ts[k].ip_wrong_max = ip;
                }
            }
        }
        for (std::size_t k = 0; k < bs; ++k) {
            const bool op_err = ts[k].dwrong <= ts[k].down + tol;
            const bool pred_err = ts[k].ip_wrong_max >= ts[k].rhs;
            op += op_err;
            pred += pred_err;
            if (trace) (*trace)[begin + k] = {op_err, pred_err};
        }
    }
    TrialCounts tc;
    tc.operational = op;
    tc.predicate = pred;
    tc.trials = trials;
    return tc;
}

TrialCounts run_ensemble(const Codebook& cb, std::uint64_t message, const PreparedJammer& pj,
                         std::uint64_t trials, std::uint64_t seed, bool parallel,
                         std::vector<std::pair<bool, bool>>* trace) {
    const auto& p = cb.params();
    const auto& code = cb.code();
    const int n = p.n;
    const double np = p.transmit_energy();
    const double tol = tie_tolerance(p);
    const std::uint64_t keys = code.keys_per_row;
    const double ln_wrong = code.log_wrong_words();

    // only the transmitted row is realized
    std::vector<double> row(static_cast<std::size_t>(keys) * n);
    std::vector<double> row_norm(static_cast<std::size_t>(keys));
    for (std::uint64_t t = 1; t <= keys; ++t) {
        double* dst = row.data() + static_cast<std::size_t>(t - 1) * n;
        cb.get_word(message, t, dst);
        row_norm[t - 1] = norm2({dst, static_cast<std::size_t>(n)});
    }

    std::uint64_t op = 0, pred = 0;
    const std::int64_t nt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : op, pred) if (parallel)
    for (std::int64_t k = 0; k < nt; ++k) {
        const std::uint64_t trial = static_cast<std::uint64_t>(k);
        TrialState ts;
        RealVector xbuf(static_cast<std::size_t>(n));
        setup_trial(cb, message, pj, seed, trial, ts, xbuf);
        for (std::uint64_t t = 0; t < keys; ++t) {
            const double* wp = row.data() + static_cast<std::size_t>(t) * n;
            double ip = 0;
            for (int c = 0; c < n; ++c) ip += wp[c] * ts.y[c];
            const double d = ts.ynorm2 + row_norm[t] - 2.0 * ip;
            if (d < ts.down) ts.down = d;
        }
        // the impersonated word is a realized wrong-row competitor
        bool op_exp = false, pred_exp = false;
        if (ts.impostor_row != 0 && ts.impostor_row != message) {
            double d = 0, ip = 0;
            for (int c = 0; c < n; ++c) {
                const double diff = ts.y[c] - ts.s[c];
                d += diff * diff;
                ip += ts.s[c] * ts.y[c];
            }
            op_exp = d <= ts.down + tol;
            pred_exp = ip >= ts.rhs;
        }
        const double tau_op = (ts.ynorm2 + np - ts.down) / 2.0;
        const double perr_op = thin_prob(ln_wrong, ln_cap_p(n, np, ts.ynorm2, tau_op));
        const double perr_pred = thin_prob(ln_wrong, ln_cap_p(n, np, ts.ynorm2, ts.rhs));
        Rng ru(derive_seed(seed, seed_tag::trial_thin, message, trial));
        const double u = ru.next_unit();
        const bool op_err = op_exp || u < perr_op;
        const bool pred_err = pred_exp || u < perr_pred;
        op += op_err;
        pred += pred_err;
        if (trace) (*trace)[trial] = {op_err, pred_err};
    }
    TrialCounts tc;
    tc.operational = op;
    tc.predicate = pred;
    tc.trials = trials;
    tc.ensemble = true;
    return tc;
}

bool exhaustive_feasible(const CodeParams& code, const EstimatorOptions& opt) {
    if (!code.m_exact) return false;
    const unsigned __int128 total =
        static_cast<unsigned __int128>(code.m) * code.keys_per_row;
    return total <= opt.max_words;
}

ErrorEstimate finish_estimate(const TrialCounts& tc, CountMode mode, std::uint64_t seed) {
    ErrorEstimate e;
    e.errors = mode == CountMode::operational ? tc.operational : tc.predicate;
    e.trials = tc.trials;
    e.p_hat = static_cast<double>(e.errors) / static_cast<double>(tc.trials);
    auto [lo, hi] = wilson_ci(e.errors, e.trials, 0.99);
    e.ci_low = lo;
    e.ci_high = hi;
    e.mode = mode;
    e.seed = seed;
    e.ensemble = tc.ensemble;
    return e;
}

} // namespace

TrialCounts run_trials(const Codebook& cb, std::uint64_t message, const PreparedJammer& pj,
                       std::uint64_t trials, std::uint64_t seed, const EstimatorOptions& opt) {
    if (trials < 1) throw ConstraintError("trials >= 1");
    if (message < 1 || message > cb.code().m) throw IndexError("message index out of range");
    if (opt.trace) opt.trace->assign(trials, {false, false});
    bool ensemble;
    switch (opt.competitors) {
        case CompetitorModel::exhaustive:
            if (!exhaustive_feasible(cb.code(), opt))
                throw ConfigError("codebook too large for exhaustive competitors");
            ensemble = false;
            break;
        case CompetitorModel::ensemble:
            ensemble = true;
            break;
        default:
            ensemble = !exhaustive_feasible(cb.code(), opt);
    }
    return ensemble ? run_ensemble(cb, message, pj, trials, seed, opt.parallel, opt.trace)
                    : run_exhaustive(cb, message, pj, trials, seed, opt.parallel, opt.trace);
}

ErrorEstimate estimate_error(const Codebook& cb, std::uint64_t message, const JammerSpec& spec,
                             std::uint64_t trials, std::uint64_t seed, CountMode mode,
                             const EstimatorOptions& opt) {
    PreparedJammer pj = prepare_jammer(spec, cb, message, seed);
    return finish_estimate(run_trials(cb, message, pj, trials, seed, opt), mode, seed);
}

ErrorEstimate estimate_error_serial(const Codebook& cb, std::uint64_t message,
                                    const JammerSpec& spec, std::uint64_t trials,
                                    std::uint64_t seed, CountMode mode) {
    // plain per-trial loop over the full codebook; the reference the
    // blocked kernel is tested against
    PreparedJammer pj = prepare_jammer(spec, cb, message, seed);
    if (trials < 1) throw ConstraintError("trials >= 1");
    const auto& p = cb.params();
    const auto& code = cb.code();
    EstimatorOptions opt;
    if (!exhaustive_feasible(code, opt)) {
        opt.parallel = false;
        return finish_estimate(run_ensemble(cb, message, pj, trials, seed, false, nullptr),
                               mode, seed);
    }
    const int n = p.n;
    const double tol = tie_tolerance(p);
    const std::uint64_t keys = code.keys_per_row;
    TrialCounts tc;
    tc.trials = trials;
    RealVector xbuf(static_cast<std::size_t>(n));
    RealVector wbuf(static_cast<std::size_t>(n));
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        TrialState ts;
        setup_trial(cb, message, pj, seed, trial, ts, xbuf);
        for (std::uint64_t w = 0; w < code.total_words(); ++w) {
            const std::uint64_t i = w / keys + 1;
            const std::uint64_t t = w % keys + 1;
            cb.get_word(i, t, wbuf.data());
            const double wn = norm2(wbuf);
            double ip = 0;
            for (int c = 0; c < n; ++c) ip += wbuf[c] * ts.y[c];
            const double d = ts.ynorm2 + wn - 2.0 * ip;
            if (i == message) {
                if (d < ts.down) ts.down = d;
            } else {
                if (d < ts.dwrong) ts.dwrong = d;
                if (ip > ts.ip_wrong_max) ts.ip_wrong_max = ip;
            }
        }
        tc.operational += ts.dwrong <= ts.down + tol;
        tc.predicate += ts.ip_wrong_max >= ts.rhs;
    }
    return finish_estimate(tc, mode, seed);
}

std::pair<std::uint64_t, ErrorEstimate> estimate_emax(const Codebook& cb, const JammerSpec& spec,
                                                      std::uint64_t trials,
                                                      const MessageSample& sample,
                                                      std::uint64_t seed, CountMode mode,
                                                      const EstimatorOptions& opt) {
    const std::uint64_t m = cb.code().m;
    std::vector<std::uint64_t> messages;
    const bool full = sample.all || m <= 1024;
    if (full) {
        if (m > (std::uint64_t{1} << 22))
            throw ConfigError("estimate_emax: full enumeration over this many messages "
                              "is not feasible; use a message sample");
        messages.reserve(static_cast<std::size_t>(m));
        for (std::uint64_t i = 1; i <= m; ++i) messages.push_back(i);
    } else {
        const std::uint64_t k = std::min<std::uint64_t>(std::max<std::uint64_t>(sample.count, 1), m);
        Rng rng(derive_seed(seed, seed_tag::message_sample));
        std::set<std::uint64_t> picked;
        while (picked.size() < k) picked.insert(1 + rng.next_below(m));
        messages.assign(picked.begin(), picked.end());
    }

    std::uint64_t worst_msg = messages.front();
    TrialCounts worst_tc;
    bool have = false;
    for (std::uint64_t msg : messages) {
        PreparedJammer pj = prepare_jammer(spec, cb, msg, seed);
        TrialCounts tc = run_trials(cb, msg, pj, trials, seed, opt);
        const std::uint64_t errs = mode == CountMode::operational ? tc.operational : tc.predicate;
        const std::uint64_t best = mode == CountMode::operational ? worst_tc.operational
                                                                  : worst_tc.predicate;
        if (!have || errs > best) {
            have = true;
            worst_msg = msg;
            worst_tc = tc;
        }
    }
    ErrorEstimate est = finish_estimate(worst_tc, mode, seed);
    est.sampled_max = !full;
    return {worst_msg, est};
}

std::vector<SweepRow> rate_sweep(const ChannelParams& params, const std::vector<double>& rates,
                                 double delta0, const JammerSpec& spec, std::uint64_t trials,
                                 const MessageSample& sample, std::uint64_t seed, CountMode mode,
                                 const EstimatorOptions& opt) {
    params.validate();
    std::vector<SweepRow> rows;
    rows.reserve(rates.size());
    for (std::size_t idx = 0; idx < rates.size(); ++idx) {
        SweepRow row;
        row.R = rates[idx];
        try {
            CodeParams code = CodeParams::make(params.n, rates[idx], delta0);
            row.m = code.m;
            const std::uint64_t cb_seed = derive_seed(seed, seed_tag::sweep_codebook, idx);
            Storage st = Storage::on_demand;
            EstimatorOptions o = opt;
            if (exhaustive_feasible(code, o)) st = Storage::materialized;
            Codebook cb = Codebook::build(cb_seed, params, code, st);
            auto [worst, est] = estimate_emax(cb, spec, trials, sample, cb_seed, mode, o);
            row.worst_message = worst;
            row.estimate = est;
        } catch (const std::exception& e) {
            row.skipped = true;
            row.skip_reason = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace avc
