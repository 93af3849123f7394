#pragma once

#include <doctest.h>

#include <cmath>
#include <iomanip>

// Relative closeness with an absolute floor for values near zero.
inline bool close_rel(double got, double want, double rel, double abs_floor = 0.0)
{
    return std::abs(got - want) <= rel * std::abs(want) + abs_floor;
}

#define CHECK_REL(got, want, rel)                                          \
    do {                                                                   \
        const double g_ = (got), w_ = (want);                              \
        INFO(std::setprecision(17) << "got " << g_ << " want " << w_);                              \
        CHECK(close_rel(g_, w_, rel));                                     \
    } while (0)
