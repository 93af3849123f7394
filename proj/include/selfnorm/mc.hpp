#pragma once

#include "selfnorm/bounds.hpp"
#include "selfnorm/dist.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace selfnorm {

struct MCConfig {
    std::int64_t n = 1;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t chunk_size = 1u << 16;
    double confidence = 0.999;
    /// Worker threads; 0 means one per hardware thread. SELFNORM_THREADS caps either.
    unsigned threads = 0;
};

/// Monte Carlo estimate of Q_n(B) with a two-sided Clopper-Pearson interval.
struct TailEstimate {
    double B;
    std::int64_t n;
    std::uint64_t hits;
    std::uint64_t trials;
    double point;
    double ci_lo;
    double ci_hi;
    double confidence;
};

struct Interval {
    double lo;
    double hi;
};

/// Exact binomial interval from Beta quantiles; lo = 0 when hits = 0, hi = 1 when hits = trials.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence);

/// sqrt(n) * sum(x) / sum(x^2); 0 when every x is 0.
double self_normalized_t(std::span<const double> xs);

double simulate_t(const DistributionModel& dist, std::int64_t n, Rng& rng);

/// Independent generator for chunk `chunk_index` of a run seeded with `seed`.
Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk_index);

/// Threads actually used for a request, after the SELFNORM_THREADS cap.
unsigned worker_count(unsigned requested);

/// Exceedance counts of T(n) over every B in the grid from one simulation pass.
/// Bit-identical for a given (seed, chunk_size, trials) at any thread count.
std::vector<TailEstimate> empirical_tail(const DistributionModel& dist, const MCConfig& cfg,
                                         std::span<const double> B_grid);

/// Exact Q_n(B) for Rademacher summands by summing binomial weights (n <= 60).
double rademacher_exact_tail(std::int64_t n, double B);

enum class CellStatus { Pass, Fail, Skip, Report };

std::string_view status_name(CellStatus s);

/// Reference value a bound is checked against: an exact tail or an MC interval.
struct Referee {
    double point;
    double lo;
    double hi;
    bool exact;
    std::uint64_t hits;
    std::uint64_t trials;
};

struct VerificationCell {
    std::int64_t n;
    double B;
    BoundFamily family;
    bool sup_curve;
    BoundPoint bound;
    Referee referee;
    CellStatus status;
    double margin;     // distance from the bound to the violated side of the referee
    double tightness;  // bound / referee point
};

struct VerificationReport {
    std::string dist;
    std::vector<VerificationCell> cells;

    std::size_t fail_count() const;
    bool has_fail() const { return fail_count() > 0; }
};

/// Largest n for which verification uses exact enumeration instead of MC (Rademacher only).
inline constexpr std::int64_t kExactRademacherMaxN = 16;

/// Checks every curve point against the referee for its (n, B) cell.
///
/// Upper bounds pass when value >= referee lower limit; Q_1 passes when value <=
/// referee upper limit and is only checked at n = 1; CLT rows are report-only.
/// Curves over an n range are checked against every n of the grid inside the
/// range. Throws GridMismatch when a curve names an n or B outside the grids.
VerificationReport verify_bounds(const DistributionModel& dist, std::span<const std::int64_t> n_grid,
                                 std::span<const double> B_grid, const MCConfig& cfg,
                                 std::span<const BoundCurve> curves);

}  // namespace selfnorm
