#include "selfnorm/bounds.hpp"
#include "selfnorm/errors.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace selfnorm;

namespace {

const auto kGauss = DistributionModel::standard_gaussian();
const auto kRad = DistributionModel::rademacher();
const auto kUnif = DistributionModel::uniform_symmetric(std::sqrt(3.0));
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("beta is n times the two-parameter log-MGF")
{
    CHECK_REL(beta(kGauss, 1, 1.0, 1.0), 0.6173605223326118, 1e-9);
    CHECK_REL(beta(kRad, 9, 2.0, 3.0), 9.0 * std::log(std::cosh(1.0)), 1e-13);
    CHECK(beta(kGauss, 4, 1.0, 0.0) == 0.0);
}

TEST_CASE("exponential bound, Gaussian summands")
{
    struct Case {
        std::int64_t n;
        double B, value, theta;
    };
    for (const auto& c : {Case{1, 0.25, 0.9692724898846394, 0.26556}, Case{1, 1.0, 0.6617941366633887, 1.618034},
                          Case{1, 5.0, 0.16323978337263555, 9.901}, Case{1, 10.0, 0.08223048774339396, 19.95},
                          Case{1, 20.0, 0.04119228659173456, 39.975}, Case{1, 50.0, 0.016485564150591717, 99.99},
                          Case{4, 5.0, 0.010106725311626, kNaN}, Case{16, 5.0, 1.2116131300328572e-4, kNaN},
                          Case{64, 5.0, 6.416550734476779e-6, kNaN}, Case{256, 5.0, 3.875985013737425e-6, kNaN}}) {
        const auto p = exp_tail_bound(kGauss, c.n, c.B);
        INFO("n = " << c.n << ", B = " << c.B);
        CHECK_REL(p.value, c.value, 1e-8);
        if (!std::isnan(c.theta)) CHECK(std::abs(p.optimizer.arg_star - c.theta) < 2e-3 * c.theta);
    }
}

TEST_CASE("exponential bound, Rademacher summands")
{
    const auto p = exp_tail_bound(kRad, 4, 1.0);
    CHECK_REL(p.value, 16.0 / 27.0, 1e-10);
    CHECK_REL(p.optimizer.objective, 0.5232481437645478, 1e-9);
    // B / sqrt(n) > 1 is beyond the slope range of ln cosh: T(4) <= 2 < 3.
    const auto q = exp_tail_bound(kRad, 4, 3.0);
    CHECK(q.value == 0.0);
    CHECK(q.optimizer.arg_star == kInf);
}

TEST_CASE("threshold scales with the variance")
{
    // T is homogeneous of degree -1 in the summands, so the bound for c xi at B
    // must equal the bound for xi at c B.
    for (const double a : {0.5, 1.0, 4.0}) {
        const auto u = DistributionModel::uniform_symmetric(a);
        const double c = a / std::sqrt(3.0);
        for (const std::int64_t n : {1, 9})
            for (const double B : {0.5, 2.0}) {
                INFO("a = " << a << ", n = " << n << ", B = " << B);
                CHECK_REL(exp_tail_bound(u, n, B).value, exp_tail_bound(kUnif, n, c * B).value, 1e-7);
            }
    }
    const auto r3 = DistributionModel::discrete({{-3.0, 0.5}, {3.0, 0.5}});
    CHECK_REL(exp_tail_bound(r3, 4, 0.2).value, exp_tail_bound(kRad, 4, 0.6).value, 1e-10);
}

TEST_CASE("sup over n scan points")
{
    const auto ns = sup_scan_points(1, 4096);
    REQUIRE(ns.size() > 64);
    for (std::int64_t i = 0; i < 64; ++i) CHECK(ns[i] == i + 1);
    CHECK(ns.back() == 4096);
    CHECK(std::adjacent_find(ns.begin(), ns.end(), std::greater_equal<>()) == ns.end());
    CHECK(sup_scan_points(7, 7) == std::vector<std::int64_t>{7});
    CHECK(sup_scan_points(100, 200).front() == 100);
    CHECK_THROWS(sup_scan_points(5, 4));
}

TEST_CASE("sup over n is the largest scanned value")
{
    const auto s = exp_tail_bound_sup(kGauss, 20.0, 1, 4096);
    CHECK(s.point.n_star == 1);
    CHECK(std::abs(s.point.value * 20.0 - std::exp(0.5) / 2) < 0.05 * std::exp(0.5) / 2);
    CHECK(s.boundary_value < s.point.value);

    const auto r = exp_tail_bound_sup(kRad, 1.0, 1, 100);
    for (const auto n : sup_scan_points(1, 100)) CHECK(exp_tail_bound(kRad, n, 1.0).value <= r.point.value);
    CHECK(r.point.value == exp_tail_bound(kRad, r.point.n_star, 1.0).value);
}

TEST_CASE("Khinchine regime")
{
    for (const double B : {0.5, 1.0, 1.5}) {
        const auto s = exp_tail_bound_sup(kRad, B, 1, 10000);
        const double ratio = -std::log(s.point.value) * 2 / (B * B);
        INFO("B = " << B << " ratio " << ratio);
        // -ln bound = B^2/2 + B^4/(12 n) + ..., attained at the top of the range.
        CHECK(s.point.n_star == 10000);
        CHECK(ratio >= 1.0);
        CHECK_REL(ratio - 1.0, B * B / (6.0 * 10000), 0.01);
    }
}

TEST_CASE("Rosenthal generator")
{
    const auto psi = rosenthal_psi(kGauss, 1, 1.0);
    CHECK_REL(psi(2.0), 3.187995972963881, 1e-9);
    CHECK(psi(1.0) == kInf);
    const auto psi2 = rosenthal_psi(kGauss, 1, 1.0, 2 * kRosenthalConstant);
    CHECK_REL(psi2(3.0), 2 * psi(3.0), 1e-13);
}

TEST_CASE("power bound")
{
    struct Case {
        double B, value, p;
    };
    for (const auto& c : {Case{3.0, 0.12524668215233984, 5.2415}, Case{5.0, 0.0027157288100376186, 10.333},
                          Case{10.0, 2.363410737495037e-8, 25.416}, Case{20.0, 1.5170438729396497e-20, kNaN},
                          Case{50.0, 1.6289430204164835e-64, kNaN}}) {
        const auto p = power_tail_bound(kRad, 1, c.B);
        INFO("B = " << c.B);
        CHECK_REL(p.value, c.value, 1e-7);
        if (!std::isnan(c.p)) CHECK(std::abs(p.optimizer.arg_star - c.p) < 1e-3 * c.p);
    }
    const auto at_e = power_tail_bound(kRad, 1, std::numbers::e);
    CHECK(at_e.value == 1.0);
    CHECK(std::abs(at_e.optimizer.arg_star - 4.6089) < 1e-3);
    CHECK_REL(std::exp(-at_e.optimizer.objective), 0.2034070290877979, 1e-7);

    const auto g = power_tail_bound(kGauss, 16, 5.0);
    CHECK_REL(g.value, 0.5587173894323873, 1e-7);
    CHECK(std::abs(g.optimizer.arg_star - 1.9757) < 1e-3);
    CHECK_THROWS_AS(power_tail_bound(kGauss, 16, 1.0), DomainError);
}

TEST_CASE("power bound is monotone in the Rosenthal constant")
{
    for (const double B : {5.0, 10.0})
        CHECK(power_tail_bound(kUnif, 4, B, 0.5).value <= power_tail_bound(kUnif, 4, B, 0.7).value);
}

TEST_CASE("first-term lower bound")
{
    CHECK_REL(lower_bound_q1(kGauss, 100.0), 0.003989356314631604, 1e-9);
    CHECK_REL(lower_bound_q1(kGauss, 10.0), 0.03982783727702898, 1e-9);
    for (const double B : {1.0, 2.0, 7.5, 50.0}) CHECK_REL(lower_bound_q1(kUnif, B), 1.0 / (2 * std::sqrt(3.0) * B), 1e-10);
    CHECK(lower_bound_q1(kRad, 0.5) == 0.5);
    CHECK(lower_bound_q1(kRad, 2.0) == 0.0);
    // T(1) = 1 exactly, so the strict event T(1) > 1 has probability zero.
    CHECK(lower_bound_q1(kRad, 1.0) == 0.0);
}

TEST_CASE("CLT lower bound reports both forms")
{
    const auto c = lower_bound_clt(1.0);
    CHECK_REL(c.printed, 0.6065306597126334, 1e-15);
    CHECK_REL(c.operative, 0.15865525393145705, 1e-14);
    CHECK_REL(lower_bound_clt(3.0).operative, 0.0013498980316300946, 1e-13);
}

TEST_CASE("curves")
{
    const auto grid = default_B_grid();
    REQUIRE(grid.size() == 11);
    CHECK(grid[5] == std::numbers::e);
    const auto pc = power_curve(kGauss, 4, grid);
    CHECK(pc.points.size() == 6);
    for (const auto& p : pc.points) {
        CHECK(p.B >= std::numbers::e);
        CHECK(std::isfinite(p.optimizer.arg_star));
    }
    const auto ec = exp_curve(kGauss, 4, grid);
    CHECK(ec.points.size() == grid.size());
    for (std::size_t i = 1; i < ec.points.size(); ++i) CHECK(ec.points[i].value <= ec.points[i - 1].value);
    const auto q = q1_curve(kGauss, grid);
    CHECK(std::get<std::int64_t>(q.n) == 1);
    const auto clt = clt_curve(grid);
    CHECK(std::holds_alternative<NRange>(clt.n));
}
