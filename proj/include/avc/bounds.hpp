#ifndef AVC_BOUNDS_HPP
#define AVC_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "avc/model.hpp"

namespace avc {

// Slack parameters of the finite-blocklength analysis.  Infeasible values
// are representable on purpose; feasibility_check diagnoses them.
struct DeltaParams {
    double delta0 = 0;
    double delta1 = 0;
    double delta2 = 0;
    double eta = 0;
    double K = 0;
    double epsilon = 0; // quantization radius for the adversary net
};

// value together with its natural log (several bounds only fit in log space)
struct LogValue {
    double value = 0; // clamped/overflowed linear value where applicable
    double ln = 0;
};

struct UnionBound {
    double value = 0;      // 1 - failure term, may be negative (uninformative)
    double ln_failure = 0; // ln of the union failure term
};

// 1/2 ln(1 + P/(Lambda+sigma2)) if P > Lambda, else 0
double capacity(double P, double Lambda, double sigma2);
// Lambda = 0 returns +inf (noise-free point-to-point channel)
double capacity_noiseless(double P, double Lambda);
// shared-randomness upper bound; no P > Lambda gate
double randomized_code_upper(double P, double Lambda, double sigma2);

// Q(y) <= 1/2 exp(-y^2/2)
double q_upper(double y);

// xi(x) = 1/2 (1 + x - sqrt(1+2x)); chi-squared tail exponent
double xi(double x);
// Pr[chi2_n > (1+x) n] <= exp(-n xi(x))
double chi2_tail_bound(int n, double x);

// Pr[|<U,u>| >= alpha] <= 2 (1-alpha^2)^((n-1)/2) for uniform U on the
// unit sphere; valid for 1/sqrt(2 pi n) < alpha < 1
double sphere_cap_bound(int n, double alpha);

// Pr[(1/L) sum f_i > tau] <= exp(-L (tau ln2 - a)), clamped to 1
double martingale_bound(std::uint64_t L, double tau, double a);

// exp(-(K ln2 - 10) e^{n (delta0-delta1)}), clamped to 1
LogValue doubly_exp_bound(double K, std::uint64_t n, double delta0, double delta1);

// (2 sqrt(n Lambda) / eps)^n, linear value present when representable
LogValue net_cardinality_bound(std::uint64_t n, double Lambda, double epsilon);

// 1 - netCardinality * e^{nR} * doublyExp, evaluated in log space
UnionBound union_success_lower(std::uint64_t n, double R, double Lambda, double epsilon,
                               double K, double delta0, double delta1);

// largest certified rate for the given slacks:
//   (1-1/n)/2 ln(1 + (P-d2')/(Lambda+sigma2-d2+d2')) - delta0 - delta1,
// with d2' = 2 sqrt(P) d2 - d2^2
double achievable_rate_condition(const ChannelParams& params, const DeltaParams& dp);
double delta2_prime(double P, double delta2);

// every named inequality the slack parameters must satisfy; empty = feasible
std::vector<std::string> feasibility_check(const ChannelParams& params, const DeltaParams& dp);

struct BoundReport {
    double capacity_nats = 0;
    double rate_condition = 0; // NaN when preconditions fail
    double d2_prime = 0;
    double xi_value = 0;
    LogValue net_cardinality;
    LogValue doubly_exp;
    UnionBound union_success;
    std::vector<std::string> feasibility_violations;
};

BoundReport make_bound_report(const ChannelParams& params, const DeltaParams& dp, double R);
// fixed field names, numbers as 12-significant-digit decimal strings
std::string bound_report_json(const BoundReport& r);

enum class BoundId { qBound, sphereCap, chi2Tail, martingale };
BoundId parse_bound_id(const std::string& s);

struct VerifyParams {
    double y = 1.0;                // qBound
    int n = 20;                    // sphereCap / chi2Tail dimension
    double alpha = 0.5;            // sphereCap
    double x = 1.0;                // chi2Tail
    std::uint64_t L = 20;          // martingale
    double tau = 0.8;              // martingale
    double a = 0.3;                // martingale
};

struct VerifyReport {
    double empirical = 0;
    double ci_low = 0;
    double ci_high = 0; // 99% Wilson
    double analytic = 0;
    bool dominated = false; // ci_high <= analytic
    std::uint64_t samples = 0;
};

// Monte Carlo check that the named bound dominates the probability it bounds
VerifyReport verify_bound_empirical(BoundId which, const VerifyParams& p,
                                    std::uint64_t samples, std::uint64_t seed);

} // namespace avc

#endif
