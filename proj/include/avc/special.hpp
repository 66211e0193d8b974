#ifndef AVC_SPECIAL_HPP
#define AVC_SPECIAL_HPP

namespace avc {

// Gaussian tail Q(y) = Pr[N(0,1) >= y]
double q_function(double y);

// inverse standard normal CDF
double normal_quantile(double p);

// log of the regularized incomplete beta I_x(a, b), stable for tiny tails
double log_reg_inc_beta(double a, double b, double x);

// ln Pr[Z >= c] where Z is one coordinate of a uniform point on the unit
// sphere in R^n.  Returns 0 for c <= -1 and -inf for c >= 1.
double ln_sphere_cap_tail(int n, double c);

} // namespace avc

#endif
