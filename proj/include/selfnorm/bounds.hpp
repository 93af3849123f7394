#pragma once

#include "selfnorm/dist.hpp"
#include "selfnorm/gls.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace selfnorm {

/// Rosenthal constant for normalized sums of i.i.d. centered summands.
inline constexpr double kRosenthalConstant = 0.6379;
inline constexpr std::int64_t kDefaultSupNHi = 4096;

enum class BoundFamily { ExpLevel, PowerLevel, LowerCLT, LowerQ1 };

std::string_view family_name(BoundFamily f);

struct Optimizer {
    double arg_star;   // theta* for ExpLevel, p* for PowerLevel, NaN otherwise
    double objective;  // the exponent: value = min(1, exp(-objective))
};

struct BoundPoint {
    double B;
    double value;
    Optimizer optimizer;
    std::int64_t n_star = 0;  // attaining n on SupOverRange curves
};

struct NRange {
    std::int64_t lo;
    std::int64_t hi;
};

struct BoundCurve {
    BoundFamily family;
    std::variant<std::int64_t, NRange> n;
    std::vector<BoundPoint> points;
};

/// n * log_mgf2(theta / sqrt(n), B theta / n) = ln E exp(theta * mean of eta).
double beta(const DistributionModel& dist, std::int64_t n, double B, double theta);

/// Chernoff bound on Q_n(B) = P(T(n) > B):
/// min(1, exp(-sup_{theta >= 0} [theta B sigma^2 - beta(theta)])), 0 when the
/// supremum is infinite.
BoundPoint exp_tail_bound(const DistributionModel& dist, std::int64_t n, double B);

struct SupBound {
    BoundPoint point;       // value is the max over the scanned n, n_star its argmax
    double boundary_value;  // value at n_hi, to judge whether the max is interior
};

/// Sample sizes scanned for a supremum over [n_lo, n_hi]: every integer up to 64,
/// then a geometric ladder with ratio 1.25, always ending at n_hi.
std::vector<std::int64_t> sup_scan_points(std::int64_t n_lo, std::int64_t n_hi);

SupBound exp_tail_bound_sup(const DistributionModel& dist, double B, std::int64_t n_lo, std::int64_t n_hi);

/// p -> K_R (p / ln p) Delta(p; n), supported on (1, inf); +inf where Delta diverges.
PsiFunction rosenthal_psi(const DistributionModel& dist, std::int64_t n, double B,
                          double kr = kRosenthalConstant);

/// Moment-level bound on Q_n(B) for B >= e: the GLS tail bound for the Rosenthal
/// generator with norm 1, at threshold B sigma^2. Throws DomainError for B < e.
BoundPoint power_tail_bound(const DistributionModel& dist, std::int64_t n, double B,
                            double kr = kRosenthalConstant, const GridOptions& opts = {});

SupBound power_tail_bound_sup(const DistributionModel& dist, double B, std::int64_t n_lo, std::int64_t n_hi,
                              double kr = kRosenthalConstant, const GridOptions& opts = {});

/// Q_1(B) = P(T(1) > B) = P(0 < xi < 1/B), a lower bound for sup_n Q_n(B).
/// Equals P(0 < xi <= 1/B) unless the law has an atom at 1/B.
double lower_bound_q1(const DistributionModel& dist, double B);

struct CltLower {
    double printed;    // exp(-B^2 / 2)
    double operative;  // 1 - Phi(B), the actual CLT limit of Q_n(B) when sigma = 1
};

CltLower lower_bound_clt(double B);

BoundCurve exp_curve(const DistributionModel& dist, std::int64_t n, std::span<const double> B_grid);
/// Entries with B < e are omitted.
BoundCurve power_curve(const DistributionModel& dist, std::int64_t n, std::span<const double> B_grid,
                       double kr = kRosenthalConstant);
BoundCurve exp_sup_curve(const DistributionModel& dist, NRange range, std::span<const double> B_grid);
BoundCurve power_sup_curve(const DistributionModel& dist, NRange range, std::span<const double> B_grid,
                           double kr = kRosenthalConstant);
BoundCurve q1_curve(const DistributionModel& dist, std::span<const double> B_grid);
BoundCurve clt_curve(std::span<const double> B_grid);

/// Default B grid {0.25, 0.5, 1, 1.5, 2, e, 3, 5, 10, 20, 50}.
std::vector<double> default_B_grid();

}  // namespace selfnorm
