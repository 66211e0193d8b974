#include "avc/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "avc/codebook.hpp"
#include "avc/errors.hpp"
#include "avc/estimator.hpp"
#include "avc/rng.hpp"

namespace avc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = 0.6931471805599453;
} // namespace

double capacity(double P, double Lambda, double sigma2) {
    if (!(P > 0) || !(Lambda >= 0) || !(sigma2 >= 0))
        throw ConstraintError("capacity: P > 0, Lambda >= 0, sigma2 >= 0");
    if (Lambda + sigma2 <= 0)
        throw DomainError("capacity: Lambda + sigma2 = 0; use capacity_noiseless");
    if (P > Lambda) return 0.5 * std::log1p(P / (Lambda + sigma2));
    return 0.0;
}

double capacity_noiseless(double P, double Lambda) {
    if (!(P > 0) || !(Lambda >= 0))
        throw ConstraintError("capacity_noiseless: P > 0, Lambda >= 0");
    if (Lambda == 0) return kInf; // no jammer, no noise
    if (P > Lambda) return 0.5 * std::log1p(P / Lambda);
    return 0.0;
}

double randomized_code_upper(double P, double Lambda, double sigma2) {
    if (!(P > 0) || !(Lambda >= 0) || !(sigma2 >= 0))
        throw ConstraintError("randomized_code_upper: P > 0, Lambda >= 0, sigma2 >= 0");
    if (Lambda + sigma2 <= 0)
        throw DomainError("randomized_code_upper: Lambda + sigma2 = 0");
    return 0.5 * std::log1p(P / (Lambda + sigma2));
}

double q_upper(double y) {
    if (!(y >= 0)) throw DomainError("q_upper: y >= 0");
    return 0.5 * std::exp(-y * y / 2.0);
}

double xi(double x) {
    if (!(x >= 0)) throw DomainError("xi: x >= 0");
    if (std::isinf(x)) return kInf;
    return 0.5 * (1.0 + x - std::sqrt(1.0 + 2.0 * x));
}

double chi2_tail_bound(int n, double x) {
    if (n < 1) throw DomainError("chi2_tail_bound: n >= 1");
    return std::exp(-static_cast<double>(n) * xi(x));
}

double sphere_cap_bound(int n, double alpha) {
    if (n < 2) throw DomainError("sphere_cap_bound: n >= 2");
    const double lo = 1.0 / std::sqrt(2.0 * M_PI * n);
    if (!(alpha > lo && alpha < 1.0))
        throw DomainError("sphere_cap_bound: alpha must lie in (1/sqrt(2 pi n), 1)");
    return 2.0 * std::pow((1.0 - alpha) * (1.0 + alpha), (n - 1) / 2.0);
}

double martingale_bound(std::uint64_t L, double tau, double a) {
    if (L < 1) throw DomainError("martingale_bound: L >= 1");
    if (!(tau > 0 && tau <= 1)) throw DomainError("martingale_bound: tau in (0,1]");
    if (!(a >= 0 && a <= 1)) throw DomainError("martingale_bound: a in [0,1]");
    const double e = static_cast<double>(L) * (tau * kLn2 - a);
    if (e <= 0) return 1.0; // vacuous
    return std::exp(-e);
}

LogValue doubly_exp_bound(double K, std::uint64_t n, double delta0, double delta1) {
    if (!(delta0 > delta1 && delta1 > 0))
        throw ConstraintError("delta0 > delta1 > 0");
    const double kprime = K * kLn2 - 10.0;
    const double growth = static_cast<double>(n) * (delta0 - delta1);
    // growth above ~709 overflows exp(); the bound is exactly 0 there anyway
    const double scale = growth > 709.0 ? kInf : std::exp(growth);
    LogValue r;
    r.ln = -kprime * scale; // -inf once scale overflows and kprime > 0
    if (kprime <= 0) r.ln = 0.0; // vacuous, clamp at 1
    r.value = std::exp(std::min(r.ln, 0.0));
    r.ln = std::min(r.ln, 0.0);
    return r;
}

LogValue net_cardinality_bound(std::uint64_t n, double Lambda, double epsilon) {
    if (!(epsilon > 0)) throw ConstraintError("epsilon > 0");
    if (!(Lambda >= 0)) throw ConstraintError("Lambda >= 0");
    LogValue r;
    r.ln = static_cast<double>(n) *
           std::log(2.0 * std::sqrt(static_cast<double>(n) * Lambda) / epsilon);
    r.value = r.ln < 709.0 ? std::exp(r.ln) : kInf;
    return r;
}

UnionBound union_success_lower(std::uint64_t n, double R, double Lambda, double epsilon,
                               double K, double delta0, double delta1) {
    if (!(delta0 > delta1)) throw ConstraintError("delta0 > delta1");
    const LogValue net = net_cardinality_bound(n, Lambda, epsilon);
    const LogValue dexp = doubly_exp_bound(K, n, delta0, delta1);
    UnionBound u;
    u.ln_failure = net.ln + static_cast<double>(n) * R + dexp.ln;
    if (u.ln_failure <= 0) {
        u.value = -std::expm1(u.ln_failure);
    } else {
        u.value = 1.0 - std::exp(u.ln_failure); // may be -inf; uninformative
    }
    return u;
}

double delta2_prime(double P, double delta2) {
    return 2.0 * std::sqrt(P) * delta2 - delta2 * delta2;
}

double achievable_rate_condition(const ChannelParams& params, const DeltaParams& dp) {
    params.validate();
    if (!(dp.delta2 > 0 && dp.delta2 < 2.0 * std::sqrt(params.P)))
        throw ConstraintError("0 < delta2 < 2*sqrt(P)");
    const double d2p = delta2_prime(params.P, dp.delta2);
    const double denom = params.Lambda + params.sigma2 - dp.delta2 + d2p;
    if (!(denom > 0)) throw ConstraintError("Lambda + sigma2 - delta2 + delta2' > 0");
    const double frac = 1.0 - 1.0 / static_cast<double>(params.n);
    return 0.5 * frac * std::log1p((params.P - d2p) / denom) - dp.delta0 - dp.delta1;
}

std::vector<std::string> feasibility_check(const ChannelParams& params, const DeltaParams& dp) {
    std::vector<std::string> bad;
    if (!(dp.delta0 > dp.delta1)) bad.push_back("delta0 > delta1");
    if (!(dp.delta1 > 0)) bad.push_back("delta1 > 0");
    if (!(dp.K * kLn2 > 10.0)) bad.push_back("K*ln2 > 10");
    if (!(dp.eta > std::sqrt(2.0 * params.Lambda * params.sigma2 * dp.delta1)))
        bad.push_back("eta > sqrt(2*Lambda*sigma2*delta1)");
    if (!(dp.delta2 > 2.0 * dp.eta + 4.0 * params.sigma2 * std::sqrt(dp.delta1)))
        bad.push_back("delta2 > 2*eta + 4*sigma2*sqrt(delta1)");
    {
        const double frac = 1.0 - 1.0 / static_cast<double>(params.n);
        const double rhs = frac > 0 ? std::sqrt(4.0 * params.P * (params.Lambda + params.sigma2) *
                                                dp.delta1 / frac)
                                    : kInf;
        if (!(dp.delta2 > rhs)) bad.push_back("delta2 > sqrt(4*P*(Lambda+sigma2)*delta1/(1-1/n))");
    }
    // the low-norm assumption is checked both at the worst case over states
    // (|s|^2 = 0) and at the full jammer budget (|s|^2 = n*Lambda)
    if (!(dp.delta2 <= params.sigma2)) bad.push_back("delta2 <= sigma2 [conservative]");
    if (!(dp.delta2 <= params.Lambda + params.sigma2))
        bad.push_back("delta2 <= Lambda + sigma2 [at |s|^2 = n*Lambda]");
    return bad;
}

BoundReport make_bound_report(const ChannelParams& params, const DeltaParams& dp, double R) {
    params.validate();
    BoundReport r;
    r.capacity_nats = capacity(params.P, params.Lambda, params.sigma2);
    r.d2_prime = delta2_prime(params.P, dp.delta2);
    try {
        r.rate_condition = achievable_rate_condition(params, dp);
    } catch (const ConstraintError&) {
        r.rate_condition = kNaN;
    }
    if (params.sigma2 > 0) {
        const double x = (dp.delta2 - 2.0 * dp.eta) / params.sigma2;
        r.xi_value = x >= 0 ? xi(x) : kNaN;
    } else {
        r.xi_value = dp.delta2 > 2.0 * dp.eta ? kInf : kNaN;
    }
    r.net_cardinality = net_cardinality_bound(params.n, params.Lambda, dp.epsilon);
    try {
        r.doubly_exp = doubly_exp_bound(dp.K, params.n, dp.delta0, dp.delta1);
        r.union_success =
            union_success_lower(params.n, R, params.Lambda, dp.epsilon, dp.K, dp.delta0, dp.delta1);
    } catch (const ConstraintError&) {
        r.doubly_exp = {kNaN, kNaN};
        r.union_success = {kNaN, kNaN};
    }
    r.feasibility_violations = feasibility_check(params, dp);
    return r;
}

namespace {
std::string num12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
std::string jstr(const std::string& s) { return "\"" + s + "\""; }
} // namespace

std::string bound_report_json(const BoundReport& r) {
    std::string out = "{\n";
    out += "  \"capacityNats\": " + jstr(num12(r.capacity_nats)) + ",\n";
    out += "  \"rateCondition\": " + jstr(num12(r.rate_condition)) + ",\n";
    out += "  \"delta2Prime\": " + jstr(num12(r.d2_prime)) + ",\n";
    out += "  \"xi\": " + jstr(num12(r.xi_value)) + ",\n";
    out += "  \"netCardinalityBound_ln\": " + jstr(num12(r.net_cardinality.ln)) + ",\n";
    out += "  \"doublyExpBound_ln\": " + jstr(num12(r.doubly_exp.ln)) + ",\n";
    out += "  \"unionSuccessLowerBound\": " + jstr(num12(r.union_success.value)) + ",\n";
    out += "  \"unionFailureTerm_ln\": " + jstr(num12(r.union_success.ln_failure)) + ",\n";
    out += "  \"feasibilityViolations\": [";
    for (std::size_t i = 0; i < r.feasibility_violations.size(); ++i) {
        if (i) out += ", ";
        out += jstr(r.feasibility_violations[i]);
    }
    out += "]\n}\n";
    return out;
}

BoundId parse_bound_id(const std::string& s) {
    if (s == "qBound") return BoundId::qBound;
    if (s == "sphereCap") return BoundId::sphereCap;
    if (s == "chi2Tail") return BoundId::chi2Tail;
    if (s == "martingale") return BoundId::martingale;
    throw ConfigError("unknown bound id: " + s);
}

VerifyReport verify_bound_empirical(BoundId which, const VerifyParams& p,
                                    std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1) throw ConfigError("verify: samples >= 1");
    std::uint64_t hits = 0;
    const std::int64_t ns = static_cast<std::int64_t>(samples);
    double analytic = 0;
    switch (which) {
        case BoundId::qBound: {
            analytic = q_upper(p.y);
#pragma omp parallel for schedule(static) reduction(+ : hits)
            for (std::int64_t k = 0; k < ns; ++k) {
                Rng rng(derive_seed(seed, seed_tag::verify, static_cast<std::uint64_t>(k)));
                if (rng.next_gaussian() >= p.y) ++hits;
            }
            break;
        }
        case BoundId::sphereCap: {
            analytic = sphere_cap_bound(p.n, p.alpha);
#pragma omp parallel for schedule(static) reduction(+ : hits)
            for (std::int64_t k = 0; k < ns; ++k) {
                Rng rng(derive_seed(seed, seed_tag::verify, static_cast<std::uint64_t>(k)));
                RealVector u = sample_sphere(rng, p.n, 1.0);
                if (std::fabs(u[0]) >= p.alpha) ++hits; // u fixed to the first axis
            }
            break;
        }
        case BoundId::chi2Tail: {
            analytic = chi2_tail_bound(p.n, p.x);
            const double thr = (1.0 + p.x) * p.n;
#pragma omp parallel for schedule(static) reduction(+ : hits)
            for (std::int64_t k = 0; k < ns; ++k) {
                Rng rng(derive_seed(seed, seed_tag::verify, static_cast<std::uint64_t>(k)));
                double s = 0;
                for (int i = 0; i < p.n; ++i) {
                    const double g = rng.next_gaussian();
                    s += g * g;
                }
                if (s > thr) ++hits;
            }
            break;
        }
        case BoundId::martingale: {
            analytic = martingale_bound(p.L, p.tau, p.a);
            const double thr = p.tau * static_cast<double>(p.L);
#pragma omp parallel for schedule(static) reduction(+ : hits)
            for (std::int64_t k = 0; k < ns; ++k) {
                Rng rng(derive_seed(seed, seed_tag::verify, static_cast<std::uint64_t>(k)));
                std::uint64_t s = 0;
                for (std::uint64_t i = 0; i < p.L; ++i)
                    if (rng.next_unit() < p.a) ++s;
                if (static_cast<double>(s) > thr) ++hits;
            }
            break;
        }
    }
    VerifyReport rep;
    rep.samples = samples;
    rep.empirical = static_cast<double>(hits) / static_cast<double>(samples);
    auto [lo, hi] = wilson_ci(hits, samples, 0.99);
    rep.ci_low = lo;
    rep.ci_high = hi;
    rep.analytic = analytic;
    rep.dominated = rep.ci_high <= analytic;
    return rep;
}

} // namespace avc
