#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace es {

// Regularized lower incomplete gamma P(a, x), via the series expansion for
// x < a + 1 and the Lentz continued fraction for the complement otherwise
// (Numerical Recipes style).
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::invalid_argument("regularized_gamma_p: bad arguments");
    if (x == 0.0)
        return 0.0;
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15)
                break;
        }
        return sum * std::exp(log_prefix);
    }
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15)
            break;
    }
    return 1.0 - std::exp(log_prefix) * h;
}

// CDF of the chi-square distribution with df degrees of freedom.
inline double chi_square_cdf(double x, double df) {
    if (x <= 0.0)
        return 0.0;
    return regularized_gamma_p(df / 2.0, x / 2.0);
}

// Quantile (inverse CDF) by bisection; p in (0, 1).
inline double chi_square_quantile(double p, double df) {
    if (p <= 0.0 || p >= 1.0)
        throw std::invalid_argument("chi_square_quantile: p must be in (0,1)");
    double lo = 0.0;
    double hi = df + 1.0;
    while (chi_square_cdf(hi, df) < p)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, df) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace es
