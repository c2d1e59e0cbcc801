#pragma once
#include <cmath>

namespace hazard {

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double beta_cdf(double x, double a, double b);

// Quantile of Beta(a, b): inverts beta_cdf by bisection refined with Newton
// steps; accurate to ~1e-12 in x.
double beta_quantile(double p, double a, double b);

// log density of Gamma(shape, rate) at x > 0.
double gamma_logpdf(double x, double shape, double rate);

// CDF of Gamma(shape, rate): regularized lower incomplete gamma.
double gamma_cdf(double x, double shape, double rate);

inline double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// ln(1 + e^x) without overflow for large |x|.
inline double log1pexp(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace hazard
