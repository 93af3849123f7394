#pragma once

#include "selfnorm/convex.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace selfnorm {

using Rng = std::mt19937_64;

enum class LawKind { Rademacher, StandardGaussian, UniformSymmetric, Discrete, Density, Empirical };

struct Atom {
    double value;
    double prob;
};

/// Which odd cross moment quadratic_moments reports as z.
enum class ZConvention {
    AsPrinted,  // E(sigma xi - xi^3)
    Scaled,     // E(sigma^2 xi - xi^3)
};

struct QuadraticMoments {
    double sigma2;
    double w;  // E(sigma^2 - xi^2)^2
    double z;
};

inline constexpr double kDefaultTol = 1e-10;

/// Law of a centered random variable with finite positive variance.
///
/// Immutable and cheap to copy; every query is safe to call concurrently.
/// Construction checks |E xi| <= 1e-8 sigma (empirical laws are recentered
/// instead) and caches sigma^2.
class DistributionModel {
public:
    using Sampler = std::function<double(Rng&)>;

    static DistributionModel rademacher();
    static DistributionModel standard_gaussian();
    static DistributionModel uniform_symmetric(double half_width);
    /// Probabilities must be nonnegative and sum to 1 within 1e-12.
    static DistributionModel discrete(std::vector<Atom> atoms);
    /// A law with log-density on [lo, hi]; either end may be infinite. `scale`
    /// is the rough spread used to place quadrature probes. Without a sampler
    /// the law supports every analytic operation but not Monte Carlo.
    static DistributionModel density(RealFn log_density, double lo, double hi, Sampler sampler = {},
                                     double scale = 1.0, std::string name = "density");
    /// Recentered at the sample mean. Its MGF is the empirical MGF, which
    /// is finite everywhere, so Chernoff bounds built on it are optimistic in the
    /// far tail.
    static DistributionModel empirical(std::vector<double> samples, std::string name = "empirical");

    LawKind kind() const;
    double sigma2() const;
    const std::string& name() const;
    DistributionModel with_name(std::string name) const;

    /// Atoms of Rademacher and Discrete laws; empty otherwise.
    std::span<const Atom> atoms() const;
    /// Recentered samples of an Empirical law; empty otherwise.
    std::span<const double> samples() const;

    bool has_density() const;
    double log_density(double x) const;
    double support_lo() const;
    double support_hi() const;
    double scale() const;
    /// Half-width a of UniformSymmetric(a); 0 for other laws.
    double half_width() const;

    bool can_sample() const;
    double sample(Rng& rng) const;

private:
    struct Impl;
    explicit DistributionModel(std::shared_ptr<const Impl> impl);
    static DistributionModel finish(std::shared_ptr<Impl> impl, bool check_mean);

    std::shared_ptr<const Impl> impl_;
};

/// E g(xi). Exact sums for discrete and empirical laws, adaptive quadrature for
/// densities. Throws Divergent if the expectation is infinite or exceeds e^700.
double expect(const DistributionModel& dist, const RealFn& g, double tol = kDefaultTol);

/// ln E exp(h(xi)) computed without forming exp(h); +inf when divergent.
/// h may return -inf (zero weight).
double log_expect_exp(const DistributionModel& dist, const RealFn& h, double tol = kDefaultTol);

/// P(a < xi <= b).
double interval_probability(const DistributionModel& dist, double a, double b);

/// (E|xi|^p)^(1/p), p >= 1. Throws Divergent when the moment is infinite.
double lp_norm(const DistributionModel& dist, double p);

/// ln E exp(l1 xi + l2 (sigma^2 - xi^2)); +inf outside the MGF domain.
double log_mgf2(const DistributionModel& dist, double l1, double l2);

QuadraticMoments quadratic_moments(const DistributionModel& dist, ZConvention conv = ZConvention::AsPrinted);

/// n sigma^2 + 2 B sqrt(n) z + B^2 w.
double eta_variance(const DistributionModel& dist, std::int64_t n, double B,
                    ZConvention conv = ZConvention::AsPrinted);

/// || xi + B (sigma^2 - xi^2) / sqrt(n) ||_p.
double delta_p(const DistributionModel& dist, std::int64_t n, double B, double p);

}  // namespace selfnorm
