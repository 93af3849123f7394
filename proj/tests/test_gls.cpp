#include "selfnorm/dist.hpp"
#include "selfnorm/errors.hpp"
#include "selfnorm/gls.hpp"

#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace selfnorm;

TEST_CASE("degenerate generator gives the L_r norm")
{
    const auto psi = PsiFunction::degenerate(4.0);
    CHECK(psi(4.0) == 1.0);
    CHECK(psi(4.0001) == kInf);
    const auto g = DistributionModel::standard_gaussian();
    const auto n = gls_norm([&](double p) { return lp_norm(g, p); }, psi);
    CHECK_REL(n.value, std::pow(3.0, 0.25), 1e-9);
    CHECK(n.arg == 4.0);
}

TEST_CASE("Markov recovery")
{
    for (const double r : {2.0, 4.0, 7.5})
        for (const double K : {0.3, 1.0, 5.0})
            for (const double ratio : {3.0, 10.0, 100.0}) {
                const auto t = gls_tail_bound(PsiFunction::degenerate(r), K, ratio * K);
                INFO("r = " << r << ", y/K = " << ratio);
                CHECK_REL(t.value, std::pow(1.0 / ratio, r), 1e-12);
                CHECK(t.arg_star == r);
            }
}

TEST_CASE("no information below e times the norm")
{
    const auto psi = PsiFunction::power(2.0);
    CHECK(gls_tail_bound(psi, 1.0, 2.7).value == 1.0);
    CHECK(gls_tail_bound(psi, 2.0, 5.4).value == 1.0);
    CHECK(gls_tail_bound(psi, 1.0, 0.0).value == 1.0);
    const auto t = gls_tail_bound(PsiFunction::degenerate(3.0), 1.0, 2.0);
    CHECK(t.value == 1.0);
    CHECK(t.arg_star == 3.0);
}

TEST_CASE("sub-Gaussian generator")
{
    const auto psi = PsiFunction::power(2.0);
    const auto g = DistributionModel::standard_gaussian();
    const auto n = gls_norm([&](double p) { return lp_norm(g, p); }, psi);
    CHECK_REL(n.value, 0.7978845608028654, 1e-9);
    CHECK(std::abs(n.arg - 1.0) < 1e-6);

    // inf_p (sqrt(p) / 10)^p = exp(-100 / (2e)) at p = 100 / e.
    const auto t = gls_tail_bound(psi, 1.0, 10.0);
    CHECK_REL(t.value, 1.0270685590918278e-8, 1e-9);
    CHECK(std::abs(t.arg_star - 100.0 / std::numbers::e) < 1e-4);
}

TEST_CASE("unbounded moment ratio is reported")
{
    CHECK_THROWS_AS(gls_norm([](double p) { return p; }, PsiFunction::power(2.0)), Unbounded);
}

TEST_CASE("tail bounds are clamped and nonincreasing")
{
    const auto psi = PsiFunction::power(1.0);
    const auto phi = PhiFunction::power(1.7);
    double prev_gls = 1.0, prev_phi = 1.0;
    for (double y = 0.0; y <= 200.0; y += 1.3) {
        const double a = gls_tail_bound(psi, 1.5, y).value;
        const double b = bphi_tail_bound(phi, 1.5, y).value;
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(a <= prev_gls * (1 + 1e-12));
        CHECK(b <= prev_phi * (1 + 1e-12));
        prev_gls = a;
        prev_phi = b;
    }
}

TEST_CASE("B(phi) tail for phi_2 and phi_m")
{
    const auto phi2 = PhiFunction::power(2.0);
    for (double u = 0.0; u <= 8.0; u += 0.2) CHECK(std::abs(bphi_tail_bound(phi2, 1.0, u).value - std::exp(-u * u / 2)) < 1e-9);
    // The conjugate of |x|^m/m is |u|^m'/m', not |u|^m/m.
    const double m = 3.0, mc = 1.5;
    const auto phi3 = PhiFunction::power(m);
    for (const double u : {0.5, 1.0, 2.0, 4.0})
        CHECK(std::abs(bphi_tail_bound(phi3, 1.0, u).value - std::exp(-std::pow(u, mc) / mc)) < 1e-9);
    CHECK(bphi_tail_bound(phi2, 1.0, -1.0).value == 1.0);
}

TEST_CASE("B(phi) norms of built-in laws")
{
    const auto g = DistributionModel::standard_gaussian();
    const auto r = DistributionModel::rademacher();
    const auto phi2 = PhiFunction::power(2.0);
    const auto ng = bphi_norm([&](double l) { return log_mgf2(g, l, 0.0); }, phi2);
    CHECK_REL(ng.value, 1.0, 1e-8);
    const auto nr = bphi_norm([&](double l) { return log_mgf2(r, l, 0.0); }, phi2);
    CHECK_REL(nr.value, 1.0, 1e-6);
    CHECK(nr.value <= 1.0 + 1e-12);

    const auto lap = DistributionModel::density([](double x) { return -std::abs(x) * std::numbers::sqrt2 - std::log(std::numbers::sqrt2); },
                                                -kInf, kInf, {}, 0.7);
    CHECK_THROWS_AS(bphi_norm([&](double l) { return log_mgf2(lap, l, 0.0); }, phi2), Unbounded);
    const auto natural = PhiFunction::natural(g);
    CHECK_REL(natural(1.3), 1.3 * 1.3 / 2, 1e-9);
}

TEST_CASE("B(phi) bound dominates the true tail")
{
    // P(xi > u) for the Gaussian against exp(-u^2 / 2) from the norm-1 bound.
    const auto g = DistributionModel::standard_gaussian();
    const auto phi = PhiFunction::natural(g);
    const auto norm = bphi_norm([&](double l) { return log_mgf2(g, l, 0.0); }, phi);
    for (const double u : {0.5, 1.0, 2.0, 4.0}) CHECK(bphi_tail_bound(phi, norm.value, u).value >= 0.5 * std::erfc(u / std::numbers::sqrt2));
    const auto r = DistributionModel::rademacher();
    const auto phir = PhiFunction::natural(r);
    const auto nr = bphi_norm([&](double l) { return log_mgf2(r, l, 0.0); }, phir);
    CHECK(bphi_tail_bound(phir, nr.value, 0.5).value >= 0.5);
}

TEST_CASE("psi induced by phi")
{
    const auto psi = psi_from_phi(PhiFunction::power(2.0));
    for (const double p : {1.0, 2.0, 9.0, 50.0}) CHECK_REL(psi(p), std::sqrt(p / 2), 1e-10);
}

TEST_CASE("exponential and moment tails agree up to the exponent constant")
{
    // ln of the two bounds stays within a factor 3 of each other.
    const auto phi = PhiFunction::power(2.0);
    for (const auto& psi : {PsiFunction::power(2.0), psi_from_phi(phi)})
        for (const double y : {3.0, 5.0, 10.0, 30.0, 100.0}) {
            const double a = bphi_tail_bound(phi, 1.0, y).exponent;
            const double b = gls_tail_bound(psi, 1.0, y).exponent;
            INFO("y = " << y << " exp-level " << a << " moment-level " << b);
            CHECK(a / b <= 3.0);
            CHECK(b / a <= 3.0);
        }
}

TEST_CASE("phi bar")
{
    const auto lncosh = PhiFunction::custom([](double l) { return std::log(std::cosh(l)); });
    const auto pb = phi_bar(lncosh, 1.0, 10000);
    CHECK_REL(pb.value, 0.49999166688888214, 1e-10);
    CHECK(pb.n_star == 10000);
    const auto phi2 = PhiFunction::power(2.0);
    const auto flat = phi_bar(phi2, 1.7, 50);
    CHECK_REL(flat.value, 1.7 * 1.7 / 2, 1e-14);
}

TEST_CASE("normalized sum tail")
{
    CHECK_REL(normalized_sum_tail(PhiFunction::power(2.0), 1.0, 30, 3.0).value, std::exp(-4.5), 1e-9);
    const auto r = DistributionModel::rademacher();
    CHECK_REL(normalized_sum_tail(PhiFunction::natural(r), 1.0, 1, 0.5).value, std::exp(-0.13081203594113696), 1e-9);
    CHECK(normalized_sum_tail(PhiFunction::power(2.0), 1.0, 5, 0.0).value == 1.0);
}
