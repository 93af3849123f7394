#pragma once

#include <functional>

namespace selfnorm::detail {

// One integrand sample in log-magnitude form: value = sign * exp(log_mag).
struct LogTerm {
    double log_mag;
    double sign;
};

using LogIntegrand = std::function<LogTerm(double)>;

// Result of integrating sign*exp(log_mag) after a shift: integral = scaled * exp(shift).
struct ShiftedIntegral {
    double scaled;
    double shift;
};

// Integrates sign(x)*exp(log_mag(x)) over [lo, hi] (either end may be infinite).
//
// The integrand is shifted by its maximum located on a probe grid (uniform on a
// finite support, sinh-spaced with spread `scale` otherwise), breakpoints are
// placed at every probe within e^60 of the peak, and each piece goes through
// adaptive Gauss-Kronrod. Throws Divergent when the shifted integrand exceeds
// e^700, when the peak sits on the outermost probe of an infinite side, or when
// the quadrature error does not settle.
ShiftedIntegral integrate_log(const LogIntegrand& term, double lo, double hi, double scale, double tol);

// ln|expm1(h)| without overflow for large |h|.
double log_abs_expm1(double h);

}  // namespace selfnorm::detail
