#include "selfnorm/bounds.hpp"

#include "selfnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace selfnorm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::int64_t kDenseScanLimit = 64;
constexpr double kScanRatio = 1.25;

void check_n(std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
}

template <class Kernel>
SupBound sup_over_n(std::int64_t n_lo, std::int64_t n_hi, Kernel&& kernel)
{
    SupBound out{{kNaN, -kInf, {kNaN, kNaN}, 0}, kNaN};
    for (const auto n : sup_scan_points(n_lo, n_hi)) {
        BoundPoint p = kernel(n);
        if (p.value > out.point.value) {
            out.point = p;
            out.point.n_star = n;
        }
        if (n == n_hi) out.boundary_value = p.value;
    }
    return out;
}

}  // namespace

std::string_view family_name(BoundFamily f)
{
    switch (f) {
    case BoundFamily::ExpLevel: return "exp";
    case BoundFamily::PowerLevel: return "power";
    case BoundFamily::LowerCLT: return "lower-clt";
    case BoundFamily::LowerQ1: return "lower-q1";
    }
    return "?";
}

double beta(const DistributionModel& dist, std::int64_t n, double B, double theta)
{
    check_n(n);
    if (theta == 0.0) return 0.0;
    const double nn = static_cast<double>(n);
    return nn * log_mgf2(dist, theta / std::sqrt(nn), B * theta / nn);
}

BoundPoint exp_tail_bound(const DistributionModel& dist, std::int64_t n, double B)
{
    check_n(n);
    const double level = B * dist.sigma2();
    const auto objective = [&](double theta) {
        const double b = beta(dist, n, B, theta);
        return b == kInf ? -kInf : theta * level - b;
    };
    const Maximum m = maximize_concave(objective, 0.0);
    const double value = m.value == kInf ? 0.0 : std::min(1.0, std::exp(-std::max(m.value, 0.0)));
    return {B, value, {m.value == kInf ? kInf : m.x_star, m.value}, n};
}

std::vector<std::int64_t> sup_scan_points(std::int64_t n_lo, std::int64_t n_hi)
{
    check_n(n_lo);
    if (n_hi < n_lo) throw std::invalid_argument("sup range needs n_lo <= n_hi");
    std::vector<std::int64_t> ns;
    std::int64_t n = n_lo;
    for (; n <= std::min(n_hi, kDenseScanLimit); ++n) ns.push_back(n);
    if (ns.empty()) ns.push_back(n = n_lo);
    else n = ns.back();
    while (n < n_hi) {
        n = std::max(n + 1, static_cast<std::int64_t>(std::llround(static_cast<double>(n) * kScanRatio)));
        ns.push_back(std::min(n, n_hi));
    }
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
}

SupBound exp_tail_bound_sup(const DistributionModel& dist, double B, std::int64_t n_lo, std::int64_t n_hi)
{
    return sup_over_n(n_lo, n_hi, [&](std::int64_t n) { return exp_tail_bound(dist, n, B); });
}

PsiFunction rosenthal_psi(const DistributionModel& dist, std::int64_t n, double B, double kr)
{
    check_n(n);
    if (!(kr > 0.0)) throw std::invalid_argument("Rosenthal constant must be positive");
    bool any_finite = false;
    for (const double p : {2.0, 1.5, 1.1}) {
        try {
            delta_p(dist, n, B, p);
            any_finite = true;
            break;
        } catch (const Divergent&) {
        }
    }
    if (!any_finite) throw Divergent("Delta(p; n) is infinite for every probed p > 1");

    auto eval = [dist, n, B, kr](double p) {
        if (!(p > 1.0)) return kInf;
        try {
            return kr * p / std::log(p) * delta_p(dist, n, B, p);
        } catch (const Divergent&) {
            return kInf;
        }
    };
    return {std::move(eval), 1.0, kInf, false, PsiKind::RosenthalTransformed, kr};
}

BoundPoint power_tail_bound(const DistributionModel& dist, std::int64_t n, double B, double kr,
                            const GridOptions& opts)
{
    check_n(n);
    if (!(B >= std::numbers::e)) throw DomainError("power-level bound requires B >= e");
    const auto psi = rosenthal_psi(dist, n, B, kr);
    const auto t = gls_tail_bound(psi, 1.0, B * dist.sigma2(), opts);
    return {B, t.value, {t.arg_star, t.exponent}, n};
}

SupBound power_tail_bound_sup(const DistributionModel& dist, double B, std::int64_t n_lo, std::int64_t n_hi,
                              double kr, const GridOptions& opts)
{
    if (!(B >= std::numbers::e)) throw DomainError("power-level bound requires B >= e");
    return sup_over_n(n_lo, n_hi, [&](std::int64_t n) { return power_tail_bound(dist, n, B, kr, opts); });
}

double lower_bound_q1(const DistributionModel& dist, double B)
{
    if (!(B > 0.0)) throw std::invalid_argument("lower bound needs B > 0");
    // T(1) = x / x^2 > B, evaluated exactly as the simulation does, so an atom
    // sitting at 1/B is excluded.
    const auto exceeds = [B](double x) { return x > 0.0 && x / (x * x) > B; };
    if (!dist.atoms().empty()) {
        double p = 0.0;
        for (const auto& a : dist.atoms())
            if (exceeds(a.value)) p += a.prob;
        return p;
    }
    if (!dist.samples().empty()) {
        const auto hits = std::count_if(dist.samples().begin(), dist.samples().end(), exceeds);
        return static_cast<double>(hits) / static_cast<double>(dist.samples().size());
    }
    return interval_probability(dist, 0.0, 1.0 / B);
}

CltLower lower_bound_clt(double B)
{
    return {std::exp(-0.5 * B * B), 0.5 * std::erfc(B / std::numbers::sqrt2)};
}

BoundCurve exp_curve(const DistributionModel& dist, std::int64_t n, std::span<const double> B_grid)
{
    BoundCurve c{BoundFamily::ExpLevel, n, {}};
    for (const double B : B_grid) c.points.push_back(exp_tail_bound(dist, n, B));
    return c;
}

BoundCurve power_curve(const DistributionModel& dist, std::int64_t n, std::span<const double> B_grid, double kr)
{
    BoundCurve c{BoundFamily::PowerLevel, n, {}};
    for (const double B : B_grid)
        if (B >= std::numbers::e) c.points.push_back(power_tail_bound(dist, n, B, kr));
    return c;
}

BoundCurve exp_sup_curve(const DistributionModel& dist, NRange range, std::span<const double> B_grid)
{
    BoundCurve c{BoundFamily::ExpLevel, range, {}};
    for (const double B : B_grid) c.points.push_back(exp_tail_bound_sup(dist, B, range.lo, range.hi).point);
    return c;
}

BoundCurve power_sup_curve(const DistributionModel& dist, NRange range, std::span<const double> B_grid, double kr)
{
    BoundCurve c{BoundFamily::PowerLevel, range, {}};
    for (const double B : B_grid)
        if (B >= std::numbers::e) c.points.push_back(power_tail_bound_sup(dist, B, range.lo, range.hi, kr).point);
    return c;
}

BoundCurve q1_curve(const DistributionModel& dist, std::span<const double> B_grid)
{
    BoundCurve c{BoundFamily::LowerQ1, std::int64_t{1}, {}};
    for (const double B : B_grid) c.points.push_back({B, lower_bound_q1(dist, B), {kNaN, kNaN}, 1});
    return c;
}

BoundCurve clt_curve(std::span<const double> B_grid)
{
    BoundCurve c{BoundFamily::LowerCLT, NRange{1, std::numeric_limits<std::int64_t>::max()}, {}};
    for (const double B : B_grid) c.points.push_back({B, lower_bound_clt(B).operative, {kNaN, kNaN}, 0});
    return c;
}

std::vector<double> default_B_grid() { return {0.25, 0.5, 1.0, 1.5, 2.0, std::numbers::e, 3.0, 5.0, 10.0, 20.0, 50.0}; }

}  // namespace selfnorm
