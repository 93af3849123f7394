#include "selfnorm/dist.hpp"

#include "quadrature.hpp"
#include "selfnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace selfnorm {

namespace {

constexpr double kOverflowLog = 700.0;
constexpr double kMeanTol = 1e-8;
constexpr double kProbSumTol = 1e-12;
// Below this |ln E e^h| the expm1 route is used so tiny log-MGFs keep their relative accuracy.
constexpr double kSmallLogMgf = 0.1;

double log_sum_exp(std::span<const double> logs)
{
    double m = -kInf;
    for (double v : logs) m = std::max(m, v);
    if (m == -kInf || m == kInf) return m;
    double s = 0.0;
    for (double v : logs) s += std::exp(v - m);
    return m + std::log(s);
}

}  // namespace

struct DistributionModel::Impl {
    LawKind kind{};
    std::string name;
    double sigma2 = std::numeric_limits<double>::quiet_NaN();
    std::vector<Atom> atoms;
    std::vector<double> cumulative;
    std::vector<double> samples;
    RealFn log_density;
    double lo = -kInf;
    double hi = kInf;
    double scale = 1.0;
    double half_width = 0.0;
    Sampler sampler;
};

DistributionModel::DistributionModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

DistributionModel DistributionModel::finish(std::shared_ptr<Impl> impl, bool check_mean)
{
    DistributionModel model{impl};
    const double second = expect(model, [](double x) { return x * x; });
    if (std::isnan(impl->sigma2)) {
        impl->sigma2 = second;
    } else if (std::abs(second - impl->sigma2) > 1e-9 * impl->sigma2) {
        throw std::logic_error("variance of " + impl->name + " disagrees with its closed form");
    }
    if (!(impl->sigma2 > 0.0) || !std::isfinite(impl->sigma2))
        throw std::invalid_argument(impl->name + ": variance must be finite and positive");
    if (check_mean) {
        const double mean = expect(model, [](double x) { return x; });
        if (std::abs(mean) > kMeanTol * std::sqrt(impl->sigma2))
            throw std::invalid_argument(impl->name + ": law is not centered (mean " + std::to_string(mean) + ")");
    }
    return model;
}

DistributionModel DistributionModel::rademacher()
{
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::Rademacher;
    impl->name = "rademacher";
    impl->atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    impl->cumulative = {0.5, 1.0};
    return finish(std::move(impl), true);
}

DistributionModel DistributionModel::standard_gaussian()
{
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::StandardGaussian;
    impl->name = "gaussian";
    impl->sigma2 = 1.0;
    const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
    impl->log_density = [log_norm](double x) { return -0.5 * x * x - log_norm; };
    impl->sampler = [](Rng& rng) { return std::normal_distribution<double>{}(rng); };
    return finish(std::move(impl), true);
}

DistributionModel DistributionModel::uniform_symmetric(double half_width)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("uniform half-width must be finite and positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::UniformSymmetric;
    impl->name = "uniform:a=" + std::to_string(half_width);
    impl->sigma2 = half_width * half_width / 3.0;
    impl->half_width = half_width;
    impl->lo = -half_width;
    impl->hi = half_width;
    impl->scale = half_width;
    const double log_f = -std::log(2.0 * half_width);
    impl->log_density = [log_f](double) { return log_f; };
    impl->sampler = [half_width](Rng& rng) {
        return std::uniform_real_distribution<double>{-half_width, half_width}(rng);
    };
    return finish(std::move(impl), true);
}

DistributionModel DistributionModel::discrete(std::vector<Atom> atoms)
{
    if (atoms.empty()) throw std::invalid_argument("discrete law needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!std::isfinite(a.value)) throw std::invalid_argument("discrete atom values must be finite");
        if (!(a.prob >= 0.0)) throw std::invalid_argument("discrete probabilities must be nonnegative");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > kProbSumTol)
        throw std::invalid_argument("discrete probabilities must sum to 1");

    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::Discrete;
    impl->name = "discrete";
    impl->cumulative.reserve(atoms.size());
    double c = 0.0;
    for (const auto& a : atoms) impl->cumulative.push_back(c += a.prob);
    impl->atoms = std::move(atoms);
    return finish(std::move(impl), true);
}

DistributionModel DistributionModel::density(RealFn log_density, double lo, double hi, Sampler sampler,
                                             double scale, std::string name)
{
    if (!(lo < hi)) throw std::invalid_argument("density support must be a nonempty interval");
    if (!(scale > 0.0)) throw std::invalid_argument("density scale must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::Density;
    impl->name = std::move(name);
    impl->log_density = std::move(log_density);
    impl->lo = lo;
    impl->hi = hi;
    impl->scale = scale;
    impl->sampler = std::move(sampler);
    return finish(std::move(impl), true);
}

DistributionModel DistributionModel::empirical(std::vector<double> samples, std::string name)
{
    if (samples.size() < 2) throw std::invalid_argument("empirical law needs at least two samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("empirical samples must be finite");
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
    for (double& v : samples) v -= mean;

    auto impl = std::make_shared<Impl>();
    impl->kind = LawKind::Empirical;
    impl->name = std::move(name);
    impl->samples = std::move(samples);
    return finish(std::move(impl), false);
}

LawKind DistributionModel::kind() const { return impl_->kind; }
double DistributionModel::sigma2() const { return impl_->sigma2; }
const std::string& DistributionModel::name() const { return impl_->name; }

DistributionModel DistributionModel::with_name(std::string name) const
{
    auto copy = std::make_shared<Impl>(*impl_);
    copy->name = std::move(name);
    return DistributionModel{std::move(copy)};
}

std::span<const Atom> DistributionModel::atoms() const { return impl_->atoms; }
std::span<const double> DistributionModel::samples() const { return impl_->samples; }
bool DistributionModel::has_density() const { return static_cast<bool>(impl_->log_density); }

double DistributionModel::log_density(double x) const
{
    if (!has_density() || x < impl_->lo || x > impl_->hi) return -kInf;
    return impl_->log_density(x);
}

double DistributionModel::support_lo() const { return impl_->lo; }
double DistributionModel::support_hi() const { return impl_->hi; }
double DistributionModel::scale() const { return impl_->scale; }
double DistributionModel::half_width() const { return impl_->half_width; }

bool DistributionModel::can_sample() const
{
    return !impl_->atoms.empty() || !impl_->samples.empty() || static_cast<bool>(impl_->sampler);
}

double DistributionModel::sample(Rng& rng) const
{
    if (!impl_->atoms.empty()) {
        const double u = std::uniform_real_distribution<double>{0.0, impl_->cumulative.back()}(rng);
        const auto it = std::upper_bound(impl_->cumulative.begin(), impl_->cumulative.end(), u);
        const auto idx = std::min<std::size_t>(it - impl_->cumulative.begin(), impl_->atoms.size() - 1);
        return impl_->atoms[idx].value;
    }
    if (!impl_->samples.empty()) {
        std::uniform_int_distribution<std::size_t> pick{0, impl_->samples.size() - 1};
        return impl_->samples[pick(rng)];
    }
    if (impl_->sampler) return impl_->sampler(rng);
    throw std::logic_error(impl_->name + " has no sampler");
}

double expect(const DistributionModel& dist, const RealFn& g, double tol)
{
    if (!dist.atoms().empty() || !dist.samples().empty()) {
        const bool discrete = !dist.atoms().empty();
        const std::size_t count = discrete ? dist.atoms().size() : dist.samples().size();
        const double overflow = std::exp(kOverflowLog);
        double sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double x = discrete ? dist.atoms()[i].value : dist.samples()[i];
            const double w = discrete ? dist.atoms()[i].prob : 1.0 / count;
            if (w == 0.0) continue;
            const double gx = g(x);
            if (!std::isfinite(gx) || std::abs(sum += w * gx) > overflow)
                throw Divergent("expectation exceeds the overflow guard");
        }
        return sum;
    }

    const auto term = [&](double x) -> detail::LogTerm {
        const double lf = dist.log_density(x);
        const double gx = g(x);
        if (std::isnan(gx) || std::isinf(gx)) throw Divergent("integrand is not finite");
        if (gx == 0.0 || lf == -kInf) return {-kInf, 0.0};
        return {std::log(std::abs(gx)) + lf, gx > 0.0 ? 1.0 : -1.0};
    };
    const auto r = detail::integrate_log(term, dist.support_lo(), dist.support_hi(), dist.scale(), tol);
    if (r.scaled == 0.0) return 0.0;
    if (r.shift + std::log(std::abs(r.scaled)) > kOverflowLog)
        throw Divergent("expectation exceeds the overflow guard");
    return r.scaled * std::exp(r.shift);
}

double log_expect_exp(const DistributionModel& dist, const RealFn& h, double tol)
{
    if (!dist.atoms().empty() || !dist.samples().empty()) {
        std::vector<double> logs;
        if (!dist.atoms().empty()) {
            for (const auto& a : dist.atoms())
                if (a.prob > 0.0) logs.push_back(h(a.value) + std::log(a.prob));
        } else {
            const double lw = -std::log(static_cast<double>(dist.samples().size()));
            for (double x : dist.samples()) logs.push_back(h(x) + lw);
        }
        return log_sum_exp(logs);
    }

    double result;
    try {
        const auto term = [&](double x) -> detail::LogTerm { return {h(x) + dist.log_density(x), 1.0}; };
        const auto r = detail::integrate_log(term, dist.support_lo(), dist.support_hi(), dist.scale(), tol);
        if (r.scaled <= 0.0) return -kInf;
        result = std::log(r.scaled) + r.shift;
    } catch (const Divergent&) {
        return kInf;
    }

    if (std::abs(result) < kSmallLogMgf) {
        // ln(1 + E expm1(h)) keeps relative accuracy when E e^h is close to 1.
        try {
            const auto term = [&](double x) -> detail::LogTerm {
                const double hx = h(x);
                if (hx == 0.0) return {-kInf, 0.0};
                return {detail::log_abs_expm1(hx) + dist.log_density(x), hx > 0.0 ? 1.0 : -1.0};
            };
            const auto r = detail::integrate_log(term, dist.support_lo(), dist.support_hi(), dist.scale(), tol);
            if (r.scaled != 0.0) {
                const double e1 = r.scaled * std::exp(r.shift);
                if (e1 > -1.0) result = std::log1p(e1);
            } else {
                result = 0.0;
            }
        } catch (const Divergent&) {
        }
    }
    return result;
}

double interval_probability(const DistributionModel& dist, double a, double b)
{
    if (!(a < b)) return 0.0;
    if (!dist.atoms().empty()) {
        double p = 0.0;
        for (const auto& atom : dist.atoms())
            if (atom.value > a && atom.value <= b) p += atom.prob;
        return p;
    }
    if (!dist.samples().empty()) {
        const auto hits = std::count_if(dist.samples().begin(), dist.samples().end(),
                                        [&](double x) { return x > a && x <= b; });
        return static_cast<double>(hits) / dist.samples().size();
    }
    const double lo = std::max(a, dist.support_lo());
    const double hi = std::min(b, dist.support_hi());
    if (!(lo < hi)) return 0.0;
    const auto term = [&](double x) -> detail::LogTerm { return {dist.log_density(x), 1.0}; };
    const auto r = detail::integrate_log(term, lo, hi, dist.scale(), kDefaultTol);
    return std::clamp(r.scaled * std::exp(r.shift), 0.0, 1.0);
}

double lp_norm(const DistributionModel& dist, double p)
{
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    const double log_moment = log_expect_exp(dist, [p](double x) { return p * std::log(std::abs(x)); });
    if (log_moment == kInf) throw Divergent("absolute moment of order " + std::to_string(p) + " is infinite");
    return std::exp(log_moment / p);
}

double log_mgf2(const DistributionModel& dist, double l1, double l2)
{
    if (l1 == 0.0 && l2 == 0.0) return 0.0;
    const double s2 = dist.sigma2();
    if (dist.kind() == LawKind::Rademacher) {
        // xi^2 = 1 identically; dropping the l2 term avoids exp(0 * inf) artefacts.
        return log_expect_exp(dist, [l1](double x) { return l1 * x; });
    }
    return log_expect_exp(dist, [=](double x) { return l1 * x + l2 * (s2 - x * x); });
}

QuadraticMoments quadratic_moments(const DistributionModel& dist, ZConvention conv)
{
    const double s2 = dist.sigma2();
    const double odd_coeff = conv == ZConvention::AsPrinted ? std::sqrt(s2) : s2;
    const double w = expect(dist, [s2](double x) {
        const double d = s2 - x * x;
        return d * d;
    });
    const double z = expect(dist, [odd_coeff](double x) { return odd_coeff * x - x * x * x; });
    return {s2, std::max(w, 0.0), z};
}

double eta_variance(const DistributionModel& dist, std::int64_t n, double B, ZConvention conv)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
    const auto m = quadratic_moments(dist, conv);
    const double nn = static_cast<double>(n);
    return nn * m.sigma2 + 2.0 * B * std::sqrt(nn) * m.z + B * B * m.w;
}

double delta_p(const DistributionModel& dist, std::int64_t n, double B, double p)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("delta_p requires p >= 1");
    const double s2 = dist.sigma2();
    const double c = B / std::sqrt(static_cast<double>(n));
    const double log_moment =
        log_expect_exp(dist, [=](double x) { return p * std::log(std::abs(x + c * (s2 - x * x))); });
    if (log_moment == kInf) throw Divergent("moment of gamma of order " + std::to_string(p) + " is infinite");
    return std::exp(log_moment / p);
}

}  // namespace selfnorm
