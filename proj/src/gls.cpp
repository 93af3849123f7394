#include "selfnorm/gls.hpp"

#include "selfnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace selfnorm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPCeiling = 1e9;

std::vector<double> log_grid(double lo, double hi, int points)
{
    std::vector<double> xs;
    if (!(lo < hi) || points < 2) return {lo};
    xs.reserve(points);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) xs.push_back(std::exp(a + (b - a) * i / (points - 1)));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

std::vector<double> p_grid(const PsiFunction& psi, const GridOptions& opts)
{
    const double hi = std::isfinite(psi.b) ? psi.b : std::max(opts.p_cap, psi.p_lo * 2.0);
    return log_grid(psi.p_lo, hi, opts.p_points);
}

// Grid argmax of obj, refined by golden-section between the neighbouring grid
// points. The grid value is kept when refinement does not improve on it, so
// endpoint optima stay exact.
Extremum grid_max(const RealFn& obj, const std::vector<double>& xs, std::vector<double>* values = nullptr)
{
    std::vector<double> v(xs.size());
    std::size_t best = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        v[i] = obj(xs[i]);
        if (std::isnan(v[i])) v[i] = -kInf;
        if (best == xs.size() || v[i] > v[best]) best = i;
    }
    if (values) *values = v;
    if (best == xs.size() || v[best] == -kInf) return {-kInf, kNaN};
    Extremum out{v[best], xs[best]};
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[std::min(best + 1, xs.size() - 1)];
    if (a < b && v[best] < kInf) {
        const auto r = golden_section_max(obj, a, b, 1e-10 * std::max(1.0, b));
        if (r.value > out.value) out = {r.value, r.x_star};
    }
    return out;
}

// True if the last decade of the grid is strictly increasing and ends at the maximum.
bool rising_through_last_decade(const std::vector<double>& xs, const std::vector<double>& v)
{
    const double start = xs.back() / 10.0;
    for (std::size_t i = xs.size() - 1; i > 0 && xs[i - 1] >= start; --i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace

double PsiFunction::operator()(double p) const
{
    if (p < p_lo || p > b || (p == b && !b_inclusive)) return kInf;
    return eval(p);
}

PsiFunction PsiFunction::degenerate(double r)
{
    if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("degenerate psi needs finite r >= 1");
    return {[](double) { return 1.0; }, 1.0, r, true, PsiKind::Degenerate, r};
}

PsiFunction PsiFunction::power(double m)
{
    if (!(m > 0.0)) throw std::invalid_argument("power psi needs m > 0");
    return {[m](double p) { return std::pow(p, 1.0 / m); }, 1.0, kInf, false, PsiKind::PowerFamily, m};
}

PsiFunction PsiFunction::natural(RealFn moment_curve, double b)
{
    return {std::move(moment_curve), 1.0, b, std::isfinite(b), PsiKind::Natural, 0.0};
}

double PhiFunction::operator()(double lambda) const
{
    if (std::abs(lambda) >= lambda0) return kInf;
    return eval(lambda);
}

ScalarFunction PhiFunction::on_half_line() const
{
    return {[self = *this](double x) { return self(x); }, 0.0, lambda0};
}

PhiFunction PhiFunction::power(double m)
{
    if (!(m > 0.0)) throw std::invalid_argument("power phi needs m > 0");
    return {[m](double l) { return std::pow(std::abs(l), m) / m; }, kInf, PhiKind::PowerFamily, m};
}

PhiFunction PhiFunction::natural(const DistributionModel& dist)
{
    return {[dist](double l) { return std::max(log_mgf2(dist, l, 0.0), log_mgf2(dist, -l, 0.0)); }, kInf,
            PhiKind::NaturalFromLaw, 0.0};
}

PhiFunction PhiFunction::custom(RealFn f, double lambda0) { return {std::move(f), lambda0, PhiKind::Custom, 0.0}; }

Extremum gls_norm(const RealFn& moment_curve, const PsiFunction& psi, const GridOptions& opts)
{
    const auto ratio = [&](double p) {
        const double s = psi(p);
        if (!std::isfinite(s) || !(s > 0.0)) return -kInf;
        try {
            return moment_curve(p) / s;
        } catch (const Divergent&) {
            return -kInf;
        }
    };
    const auto xs = p_grid(psi, opts);
    std::vector<double> values;
    const auto best = grid_max(ratio, xs, &values);
    if (!std::isfinite(psi.b) && rising_through_last_decade(xs, values))
        throw Unbounded("moment ratio still rising at the end of the p grid");
    return best;
}

TailBound gls_tail_bound(const PsiFunction& psi, double norm, double y, const GridOptions& opts)
{
    if (!(norm > 0.0)) throw std::invalid_argument("GLS tail bound needs a positive norm");
    if (!(y > 0.0)) return {1.0, kNaN, 0.0};
    const double log_ratio = std::log(y / norm);
    const auto exponent = [&](double p) {
        const double s = psi(p);
        if (!std::isfinite(s) || !(s > 0.0)) return -kInf;
        return p * (log_ratio - std::log(s));
    };
    const auto xs = p_grid(psi, opts);
    auto best = grid_max(exponent, xs);
    // An optimum on the upper edge of an unbounded support: keep extending by decades.
    if (!std::isfinite(psi.b)) {
        for (double hi = xs.back(); best.arg >= hi * (1.0 - 1e-9) && hi < kPCeiling; hi *= 10.0) {
            const auto more = grid_max(exponent, log_grid(hi, 10.0 * hi, opts.p_points));
            if (!(more.value > best.value)) break;
            best = {more.value, more.arg};
        }
    }
    double value = best.value == -kInf ? 1.0 : std::min(1.0, std::exp(-best.value));
    if (y <= std::numbers::e * norm) value = 1.0;
    return {value, best.arg, best.value};
}

Extremum bphi_norm(const RealFn& law_mgf, const PhiFunction& phi, const GridOptions& opts)
{
    const int half = opts.lambda_decades * opts.lambda_per_decade / 2;
    std::vector<double> lambdas;
    for (int k = -half; k <= half; ++k) {
        const double l = std::pow(10.0, static_cast<double>(k) / opts.lambda_per_decade);
        if (l < phi.lambda0) lambdas.push_back(l);
    }
    if (lambdas.empty()) throw std::invalid_argument("phi domain does not meet the lambda grid");

    const ScalarFunction half_line = phi.on_half_line();
    Extremum overall{-kInf, kNaN};
    for (const double sign : {1.0, -1.0}) {
        const auto ratio = [&](double l) {
            const double m = law_mgf(sign * l);
            if (m == kInf) throw Unbounded("law MGF is infinite where phi is finite");
            if (m <= 0.0) return 0.0;
            try {
                return invert_monotone(half_line, m, 0.0, l) / l;
            } catch (const NotBracketed&) {
                throw Unbounded("law MGF exceeds the range of phi");
            }
        };
        std::vector<double> values;
        const auto best = grid_max(ratio, lambdas, &values);
        if (!std::isfinite(phi.lambda0) && rising_through_last_decade(lambdas, values))
            throw Unbounded("B(phi) ratio still rising at the end of the lambda grid");
        if (best.value > overall.value) overall = {best.value, sign * best.arg};
    }
    return overall;
}

TailBound bphi_tail_bound(const PhiFunction& phi, double norm, double u)
{
    if (!(u > 0.0)) return {1.0, 0.0, 0.0};
    if (!(norm > 0.0)) return {0.0, kNaN, kInf};
    const auto m = fenchel_argmax(phi.on_half_line(), u / norm);
    return {std::min(1.0, std::exp(-m.value)), m.value == kInf ? kInf : m.x_star, m.value};
}

PsiFunction psi_from_phi(const PhiFunction& phi)
{
    const ScalarFunction half_line = phi.on_half_line();
    double b = kInf;
    if (std::isfinite(phi.lambda0)) b = phi(phi.lambda0 * (1.0 - 1e-12));
    auto eval = [half_line](double p) {
        try {
            return p / invert_monotone(half_line, p, 0.0, 1.0);
        } catch (const NotBracketed&) {
            return kInf;
        }
    };
    return {std::move(eval), 1.0, b, false, PsiKind::FromPhi, phi.parameter};
}

PhiBar phi_bar(const PhiFunction& phi, double lambda, std::int64_t n_max)
{
    if (n_max < 1) throw std::invalid_argument("phi_bar needs n_max >= 1");
    PhiBar best{-kInf, 1};
    for (std::int64_t k = 1; k <= n_max; ++k) {
        const double kk = static_cast<double>(k);
        const double v = kk * phi(lambda / std::sqrt(kk));
        if (v > best.value) best = {v, k};
        if (v == kInf) break;
    }
    return best;
}

PhiFunction phi_bar_function(const PhiFunction& phi, std::int64_t n_max)
{
    return PhiFunction::custom([phi, n_max](double l) { return phi_bar(phi, l, n_max).value; }, phi.lambda0);
}

TailBound normalized_sum_tail(const PhiFunction& phi, double norm, std::int64_t n, double u)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
    return bphi_tail_bound(phi_bar_function(phi, n), norm, u);
}

}  // namespace selfnorm
