#include "macrotrace/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace macrotrace::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-16;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    double x = dof / (dof + t * t);
    return incomplete_beta(dof / 2.0, 0.5, x);
}

double student_t_quantile(double prob, double dof) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_quantile: dof must be positive");
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("student_t_quantile: prob must be in (0,1)");
    if (prob == 0.5) return 0.0;
    bool upper = prob > 0.5;
    double target = upper ? 2.0 * (1.0 - prob) : 2.0 * prob;  // two-sided tail mass
    // P(|T| >= q) is strictly decreasing in q; bisect on the magnitude.
    double lo = 0.0, hi = 1.0;
    while (student_t_two_sided_p(hi, dof) > target && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_two_sided_p(mid, dof) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, lo)) break;
    }
    double q = 0.5 * (lo + hi);
    return upper ? q : -q;
}

}  // namespace macrotrace::stats
