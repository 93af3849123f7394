#pragma once

#include <functional>
#include <limits>

namespace selfnorm {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A real function of one variable in the extended reals (+inf outside its domain).
struct ScalarFunction {
    RealFn eval;
    /// Interval where eval is known to be finite; a hint, not a constraint.
    double domain_lo = 0.0;
    double domain_hi = kInf;

    double operator()(double x) const { return eval(x); }
};

struct Maximum {
    double x_star;
    double value;  // +inf when the objective is unbounded above
};

/// Absolute x-tolerance used for every one-dimensional search.
inline constexpr double kArgTol = 1e-9;

/// Golden-section search for the maximum of a unimodal objective on [a, b].
/// Points where the objective is -inf or NaN lose every comparison, so a
/// barrier on the right pushes the search into the finite part of the bracket.
Maximum golden_section_max(const RealFn& obj, double a, double b, double tol, int max_iter = 200);

/// Maximizes a concave objective on [x_lo, inf).
///
/// Steps x_lo + 2^k (k = 0, 1, ...) until the objective stops increasing, then
/// runs golden-section on the last two steps. Sixty-four increases in a row are
/// reported as value = +inf.
Maximum maximize_concave(const RealFn& obj, double x_lo, double tol = kArgTol);

/// One-sided Young-Fenchel transform sup_{x >= 0} (x u - f(x)) together with its
/// maximizer. f(0) must be 0, so the value is never negative.
Maximum fenchel_argmax(const ScalarFunction& f, double u);

double fenchel(const ScalarFunction& f, double u);

/// x -> f(-x); fenchel of the reflection gives the left-tail transform.
ScalarFunction reflected(const ScalarFunction& f);

/// Solves f(x) = y for f continuous and strictly increasing on [x_lo, inf).
/// Expands [x_lo, x_hi_hint] by doubling, then bisects.
/// Throws NotBracketed if f(x_lo) > y or f never reaches y before 1e300.
double invert_monotone(const ScalarFunction& f, double y, double x_lo, double x_hi_hint = 1.0);

}  // namespace selfnorm
