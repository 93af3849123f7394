#include "quadrature.hpp"

#include "selfnorm/convex.hpp"
#include "selfnorm/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace selfnorm::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOverflowLog = 700.0;
// Probes more than this far (in log units) below the peak do not get their own breakpoint.
constexpr double kRelevantDrop = 60.0;
constexpr int kFinitePoints = 257;
constexpr double kSinhStep = 0.05;
constexpr int kSinhSteps = 240;  // sinh(12) ~ 8e4 spreads
constexpr unsigned kMaxDepth = 14;
constexpr std::size_t kBreakStride = 4;

std::vector<double> probe_grid(double lo, double hi, double scale)
{
    std::vector<double> xs;
    if (std::isfinite(lo) && std::isfinite(hi)) {
        xs.reserve(kFinitePoints);
        for (int i = 0; i < kFinitePoints; ++i)
            xs.push_back(lo + (hi - lo) * i / (kFinitePoints - 1));
        xs.back() = hi;
        return xs;
    }
    // Centre the sinh grid at the finite end if there is one, at 0 otherwise.
    const double centre = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    xs.push_back(centre);
    for (int k = 1; k <= kSinhSteps; ++k) {
        const double d = scale * std::sinh(k * kSinhStep);
        if (centre + d <= hi) xs.push_back(centre + d);
        if (centre - d >= lo) xs.push_back(centre - d);
    }
    if (std::isfinite(lo)) xs.push_back(lo);
    if (std::isfinite(hi)) xs.push_back(hi);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

double log_abs_expm1(double h)
{
    if (h > 30.0) return h + std::log1p(-std::exp(-h));
    if (h < -30.0) return std::log1p(-std::exp(h));
    return std::log(std::abs(std::expm1(h)));
}

ShiftedIntegral integrate_log(const LogIntegrand& term, double lo, double hi, double scale, double tol)
{
    if (!(lo < hi)) return {0.0, -kInf};

    const auto xs = probe_grid(lo, hi, scale);
    std::vector<double> lm(xs.size());
    std::size_t best = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        lm[i] = term(xs[i]).log_mag;
        if (std::isnan(lm[i])) throw Divergent("integrand is NaN");
        if (lm[i] == kInf) throw Divergent("integrand is infinite");
        if (lm[i] > -kInf && (best == xs.size() || lm[i] > lm[best])) best = i;
    }
    if (best == xs.size()) return {0.0, -kInf};

    double shift = lm[best];
    const std::size_t last = xs.size() - 1;
    const auto growing_at = [&](std::size_t edge, std::size_t inner) {
        return lm[edge] >= shift - 1e-9 * std::max(1.0, std::abs(shift)) && lm[edge] >= lm[inner];
    };
    if ((!std::isfinite(hi) && growing_at(last, last - 1)) || (!std::isfinite(lo) && growing_at(0, 1)))
        throw Divergent("integrand does not decay on an infinite support");

    // The probe peak can miss a narrow spike; refine between its neighbours.
    std::vector<double> breaks;
    {
        const double a = xs[best == 0 ? 0 : best - 1];
        const double b = xs[std::min(best + 1, last)];
        if (a < b) {
            const auto refined = golden_section_max([&](double x) { return term(x).log_mag; }, a, b,
                                                    1e-12 * std::max(1.0, std::abs(b - a)));
            if (refined.value > shift && std::isfinite(refined.value)) {
                shift = refined.value;
                breaks.push_back(refined.x_star);
            }
        }
    }

    std::size_t first_rel = best, last_rel = best;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (lm[i] >= shift - kRelevantDrop) {
            first_rel = std::min(first_rel, i);
            last_rel = std::max(last_rel, i);
        }
    }
    const std::size_t from = first_rel == 0 ? 0 : first_rel - 1;
    const std::size_t to = std::min(last_rel + 1, last);
    for (std::size_t i = from; i <= to; ++i) {
        const bool near_peak = i + 1 >= best && i <= best + 1;
        if ((i - from) % kBreakStride == 0 || i == to || near_peak) breaks.push_back(xs[i]);
    }
    if (std::isfinite(lo)) breaks.push_back(lo);
    if (std::isfinite(hi)) breaks.push_back(hi);
    // Integrands built from |x|^p or ln|x| have their kink at the origin.
    if (lo < 0.0 && 0.0 < hi) breaks.push_back(0.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const auto shifted = [&](double x) {
        const LogTerm t = term(x);
        if (std::isnan(t.log_mag)) throw Divergent("integrand is NaN");
        const double v = t.log_mag - shift;
        if (v > kOverflowLog) throw Divergent("integrand exceeds the overflow guard");
        if (t.sign == 0.0 || v == -kInf) return 0.0;
        return t.sign * std::exp(v);
    };

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0, total_err = 0.0, total_l1 = 0.0;
    const auto piece = [&](double a, double b) {
        double err = 0.0, l1 = 0.0, v = 0.0;
        if (std::isfinite(a) && std::isfinite(b)) {
            // GK reports its error unscaled by the width; integrate over [0, 1] and rescale.
            const double w = b - a;
            v = w * GK::integrate([&](double t) { return shifted(a + w * t); }, 0.0, 1.0, kMaxDepth, tol, &err, &l1);
            err *= w;
            l1 *= w;
        } else {
            v = GK::integrate(shifted, a, b, kMaxDepth, tol, &err, &l1);
        }
        if (!std::isfinite(v)) throw Divergent("quadrature overflow");
        total += v;
        total_err += err;
        total_l1 += l1;
    };
    if (!std::isfinite(lo)) piece(-kInf, breaks.front());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) piece(breaks[i], breaks[i + 1]);
    if (!std::isfinite(hi)) piece(breaks.back(), kInf);

    if (total_err > std::max(1e-6, 1e3 * tol) * total_l1 + 1e-300)
        throw Divergent("quadrature did not converge");
    return {total, shift};
}

}  // namespace selfnorm::detail
