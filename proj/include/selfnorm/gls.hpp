#pragma once

#include "selfnorm/convex.hpp"
#include "selfnorm/dist.hpp"

#include <cstdint>
#include <string>

namespace selfnorm {

enum class PsiKind { Degenerate, Natural, PowerFamily, RosenthalTransformed, FromPhi };

/// Generator p -> psi(p) of a Grand Lebesgue Space, supported on [p_lo, b).
/// operator() returns +inf outside the support.
struct PsiFunction {
    RealFn eval;
    double p_lo = 1.0;
    double b = kInf;
    /// The degenerate generator psi_(r) includes its right end p = r.
    bool b_inclusive = false;
    PsiKind kind = PsiKind::Natural;
    double parameter = 0.0;

    double operator()(double p) const;

    /// 1 on [1, r].
    static PsiFunction degenerate(double r);
    /// p^(1/m).
    static PsiFunction power(double m);
    /// A moment curve used as its own generator.
    static PsiFunction natural(RealFn moment_curve, double b = kInf);
};

enum class PhiKind { PowerFamily, NaturalFromLaw, Custom };

/// Even convex MGF majorant with phi(0) = 0, finite on |lambda| < lambda0.
struct PhiFunction {
    RealFn eval;
    double lambda0 = kInf;
    PhiKind kind = PhiKind::Custom;
    double parameter = 0.0;

    /// +inf for |lambda| >= lambda0.
    double operator()(double lambda) const;
    /// The restriction to [0, lambda0) as a ScalarFunction.
    ScalarFunction on_half_line() const;

    /// |lambda|^m / m.
    static PhiFunction power(double m);
    /// max over both signs of ln E exp(+-lambda xi).
    static PhiFunction natural(const DistributionModel& dist);
    static PhiFunction custom(RealFn f, double lambda0 = kInf);
};

/// Grid resolutions for the GLS and B(phi) suprema. Every supremum is taken
/// on the grid first and then refined by golden-section around the grid optimum.
struct GridOptions {
    int p_points = 128;
    /// Upper end of the p grid when the support is unbounded.
    double p_cap = 1000.0;
    int lambda_per_decade = 64;
    int lambda_decades = 6;
};

struct Extremum {
    double value;
    double arg;  // where the extremum is attained (p or lambda)
};

struct TailBound {
    double value;     // in [0, 1]
    double arg_star;  // attaining p (GLS) or lambda (B(phi)); NaN if not applicable
    double exponent;  // the Fenchel exponent before clamping; value = min(1, exp(-exponent))
};

/// sup_p moment_curve(p) / psi(p) over the support of psi.
/// Throws Unbounded if the ratio is still rising through the last decade of an unbounded grid.
Extremum gls_norm(const RealFn& moment_curve, const PsiFunction& psi, const GridOptions& opts = {});

/// min(1, inf_p (psi(p) norm / y)^p); identically 1 for y <= e * norm. The attaining
/// p is reported even when the value is clamped.
TailBound gls_tail_bound(const PsiFunction& psi, double norm, double y, const GridOptions& opts = {});

/// B(phi) norm of a variable with log-MGF law_mgf: the largest ratio
/// phi^{-1}(law_mgf(+-lambda)) / lambda over a log-spaced lambda grid.
Extremum bphi_norm(const RealFn& law_mgf, const PhiFunction& phi, const GridOptions& opts = {});

/// min(1, exp(-phi*(u / norm))).
TailBound bphi_tail_bound(const PhiFunction& phi, double norm, double u);

/// psi(p) = p / phi^{-1}(p).
PsiFunction psi_from_phi(const PhiFunction& phi);

struct PhiBar {
    double value;
    std::int64_t n_star;
};

/// max_{1 <= k <= n_max} k phi(lambda / sqrt(k)).
PhiBar phi_bar(const PhiFunction& phi, double lambda, std::int64_t n_max);

/// lambda -> phi_bar(phi, lambda, n_max).value as a PhiFunction.
PhiFunction phi_bar_function(const PhiFunction& phi, std::int64_t n_max);

/// Bound on P(S(n)/sqrt(n) > u) uniform over sample sizes up to n, from the
/// summand-level bound E exp(lambda xi) <= exp(phi(lambda norm)).
TailBound normalized_sum_tail(const PhiFunction& phi, double norm, std::int64_t n, double u);

}  // namespace selfnorm
