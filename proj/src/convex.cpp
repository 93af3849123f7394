#include "selfnorm/convex.hpp"

#include "selfnorm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace selfnorm {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr int kMaxDoublings = 64;
constexpr double kBracketCeiling = 1e300;

// NaN compares as the worst possible value.
double sanitized(double v) { return std::isnan(v) ? -kInf : v; }

}  // namespace

Maximum golden_section_max(const RealFn& obj, double a, double b, double tol, int max_iter)
{
    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = sanitized(obj(c));
    double fd = sanitized(obj(d));
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = sanitized(obj(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = sanitized(obj(d));
        }
    }
    const double mid = 0.5 * (a + b);
    Maximum best{mid, sanitized(obj(mid))};
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
    return best;
}

Maximum maximize_concave(const RealFn& obj, double x_lo, double tol)
{
    Maximum best{x_lo, sanitized(obj(x_lo))};
    double before_best = x_lo;
    double step = 1.0;
    for (int k = 0; k < kMaxDoublings; ++k, step *= 2.0) {
        const double x = x_lo + step;
        const double fx = sanitized(obj(x));
        if (!(fx > best.value)) {
            const Maximum inner = golden_section_max(obj, before_best, x, tol);
            return inner.value > best.value ? inner : best;
        }
        before_best = best.x_star;
        best = {x, fx};
    }
    return {best.x_star, kInf};
}

Maximum fenchel_argmax(const ScalarFunction& f, double u)
{
    const auto obj = [&](double x) {
        const double fx = f(x);
        return fx == kInf ? -kInf : x * u - fx;
    };
    Maximum m = maximize_concave(obj, 0.0);
    if (m.value < 0.0) m = {0.0, 0.0};
    return m;
}

double fenchel(const ScalarFunction& f, double u) { return fenchel_argmax(f, u).value; }

ScalarFunction reflected(const ScalarFunction& f)
{
    return {[g = f.eval](double x) { return g(-x); }, -f.domain_hi, -f.domain_lo};
}

double invert_monotone(const ScalarFunction& f, double y, double x_lo, double x_hi_hint)
{
    const double f_lo = f(x_lo);
    if (!(f_lo <= y)) throw NotBracketed("level lies below f(x_lo)");
    if (f_lo == y) return x_lo;

    double lo = x_lo;
    double hi = x_hi_hint > x_lo ? x_hi_hint : x_lo + 1.0;
    double f_hi = f(hi);
    while (!(f_hi >= y)) {
        lo = hi;
        hi = x_lo + 2.0 * (hi - x_lo);
        if (hi > kBracketCeiling) throw NotBracketed("function never reaches the requested level");
        f_hi = f(hi);
    }

    // Bisect down to a relative bracket width; residual tests on f would be
    // absolute and lose all precision for tiny levels.
    double f_lo_cur = f(lo);
    for (int it = 0; it < 2100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi) break;
        const double fm = f(mid);
        if (fm == y) return mid;
        if (fm < y) {
            lo = mid;
            f_lo_cur = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if (!std::isfinite(f_hi)) {
        if (std::abs(f_lo_cur - y) <= 1e-10 * std::max(1.0, std::abs(y))) return lo;
        throw NotBracketed("level is not attained inside the finite domain");
    }
    return std::abs(f_hi - y) < std::abs(f_lo_cur - y) ? hi : lo;
}

}  // namespace selfnorm
