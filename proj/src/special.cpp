#include "hazard/special.hpp"

#include <limits>
#include <stdexcept>

namespace hazard {

namespace {

// Continued fraction for the incomplete beta (Numerical Recipes form,
// modified Lentz). Converges quickly for x < (a+1)/(a+b+2).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16, kFpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpmin) d = kFpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpmin) d = kFpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpmin) d = kFpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double beta_cdf(double x, double a, double b) {
    if (!(a > 0) || !(b > 0)) throw std::domain_error("beta_cdf: shapes must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double beta_quantile(double p, double a, double b) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("beta_quantile: p outside [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0, x = 0.5;
    for (int i = 0; i < 200; ++i) {
        x = 0.5 * (lo + hi);
        (beta_cdf(x, a, b) < p ? lo : hi) = x;
        if (hi - lo < 1e-15 * (x + 1e-300)) break;
    }
    // Newton polish: F'(x) = x^{a-1}(1-x)^{b-1} / B(a,b)
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (int i = 0; i < 4; ++i) {
        const double f = beta_cdf(x, a, b) - p;
        const double dens = std::exp(lbeta + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
        if (dens <= 0.0 || !std::isfinite(dens)) break;
        const double step = f / dens;
        const double xn = x - step;
        if (xn <= 0.0 || xn >= 1.0) break;
        x = xn;
    }
    return x;
}

double gamma_logpdf(double x, double shape, double rate) {
    if (!(x > 0)) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double gamma_cdf(double x, double shape, double rate) {
    if (!(shape > 0) || !(rate > 0)) throw std::domain_error("gamma_cdf: parameters must be positive");
    if (x <= 0.0) return 0.0;
    const double z = rate * x;
    if (z < shape + 1.0) {
        // lower series
        double sum = 1.0 / shape, term = sum;
        for (int n = 1; n < 500; ++n) {
            term *= z / (shape + n);
            sum += term;
            if (term < sum * 1e-16) break;
        }
        return sum * std::exp(-z + shape * std::log(z) - std::lgamma(shape));
    }
    // upper continued fraction (Lentz)
    constexpr double kFpmin = 1e-300;
    double b = z + 1.0 - shape, c = 1.0 / kFpmin, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - shape);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpmin) d = kFpmin;
        c = b + an / c;
        if (std::fabs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-z + shape * std::log(z) - std::lgamma(shape)) * h;
    return 1.0 - q;
}

} // namespace hazard
