#include "doctest.h"
#include "oracles.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/filters.hpp"

#include <cmath>
#include <vector>

using namespace ncqp;

TEST_CASE("constructors reject invalid parameters")
{
    CHECK_THROWS_AS(FilterSpec::autocorr(2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(FilterSpec::autocorr(1.5, 1.0), ValidationError);
    CHECK_THROWS_AS(FilterSpec::autocorr_inf(0.0), ValidationError);
    CHECK_THROWS_AS(FilterSpec::autocorr_inf(-1.0), ValidationError);
    CHECK_THROWS_AS(FilterSpec::analytic(4.0, 0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(FilterSpec::analytic(2.0, 1.3, 1.0), ValidationError);
    CHECK_THROWS_AS(eval_filter(FilterSpec::autocorr_inf(1.0), -0.1), ValidationError);
    CHECK_THROWS_AS(cmin(2.0), ValidationError);
    CHECK_NOTHROW(FilterSpec::analytic_unchecked(4.0, 0.5, 1.0));
    CHECK_FALSE(FilterSpec::gaussian(1.0).is_nonclassicality_filter());
    CHECK_FALSE(FilterSpec::analytic_unchecked(4.0, 0.5, 1.0).is_nonclassicality_filter());
    CHECK(FilterSpec::autocorr(3.0, 1.0).is_nonclassicality_filter());
}

TEST_CASE("closed-form values")
{
    const double w = 1.0;
    const auto inf = FilterSpec::autocorr_inf(w);
    CHECK(eval_filter(inf, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_filter(inf, 1.0) == doctest::Approx(0.3910022190).epsilon(1e-9));
    CHECK(eval_filter(inf, 2.0) == 0.0);
    CHECK(eval_filter(inf, 2.5) == 0.0);
    for (double b = 0.0; b < 2.0; b += 0.0731) {
        CHECK(eval_filter(inf, b) == doctest::Approx(oracle::disk_autocorr(b)).epsilon(1e-12).scale(1.0));
    }
    CHECK(filter_cutoff(inf) == 2.0 * w);
    CHECK(filter_cutoff(FilterSpec::autocorr_inf(1.7)) == doctest::Approx(3.4).epsilon(1e-15));

    const auto an = FilterSpec::analytic(4.0, 1.3, 1.0);
    CHECK(eval_filter(an, 1.0) == doctest::Approx(std::exp(-std::pow(2.3, 4) + std::pow(1.3, 4))).epsilon(1e-13));
    CHECK(eval_filter(an, 0.0) == 1.0);
    CHECK(eval_filter(FilterSpec::gaussian(1.5), 1.0) == doctest::Approx(std::exp(-1.0 / (2 * 2.25))));
}

TEST_CASE("q = 2 autocorrelation reproduces the gaussian")
{
    const auto q2 = FilterSpec::autocorr_reference(2.0, 1.0);
    double worst = 0.0;
    for (double b = 0.0; b <= 6.0; b += 0.05) {
        worst = std::max(worst, std::fabs(eval_filter(q2, b) - std::exp(-b * b / 2.0)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("table against direct autocorrelation integrals")
{
    for (double q : {3.0, 4.0, 6.0}) {
        const auto f = FilterSpec::autocorr(q, 1.0);
        for (double u : {0.3, 1.1, 1.9, 2.6, 3.4}) {
            CHECK(log_filter(f, u) == doctest::Approx(autocorr_log_direct(q, u, 256)).epsilon(1e-6));
        }
    }
}

TEST_CASE("normalization, monotonicity and width scaling")
{
    const std::vector<FilterSpec> families = {FilterSpec::autocorr(3.0, 1.0), FilterSpec::autocorr(4.0, 1.0),
                                              FilterSpec::autocorr(6.0, 1.0), FilterSpec::autocorr_inf(1.0),
                                              FilterSpec::analytic(4.0, 1.3, 1.0)};
    for (const auto& base : families) {
        CAPTURE(base.label());
        for (double w = 0.5; w <= 20.0; w *= 1.37) {
            const auto f = base.with_width(w);
            CHECK(eval_filter(f, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
            double prev = 1.0;
            for (double b = 0.0; b < 5.0 * w; b += 0.013 * w) {
                const double v = eval_filter(f, b);
                CHECK(v <= prev + 1e-12);
                CHECK(v >= 0.0);
                CHECK(v == doctest::Approx(eval_filter(base, b / w)).epsilon(1e-12).scale(1.0));
                prev = v;
            }
        }
    }
}

TEST_CASE("family ordering beyond the disk")
{
    for (double u : {2.2, 2.6, 3.0}) {
        const double q3 = eval_filter(FilterSpec::autocorr(3.0, 1.0), u);
        const double q4 = eval_filter(FilterSpec::autocorr(4.0, 1.0), u);
        const double q6 = eval_filter(FilterSpec::autocorr(6.0, 1.0), u);
        CHECK(q3 > q4);
        CHECK(q4 > q6);
        CHECK(q6 > 0.0);
        CHECK(eval_filter(FilterSpec::autocorr_inf(1.0), u) == 0.0);
    }
}

TEST_CASE("finite q approaches the disk filter like 1/q")
{
    auto sup_diff = [](double q) {
        const auto f = FilterSpec::autocorr(q, 1.0);
        double d = 0.0;
        for (double b = 0.0; b <= 3.0; b += 0.002) {
            d = std::max(d, std::fabs(eval_filter(f, b) - oracle::disk_autocorr(b)));
        }
        return d;
    };
    const double d25 = sup_diff(25.0);
    const double d50 = sup_diff(50.0);
    const double d100 = sup_diff(100.0);
    CHECK(d50 < d25);
    CHECK(d100 < d50);
    CHECK(d25 / d50 == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d50 / d100 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("cmin")
{
    CHECK(cmin(4.0) == doctest::Approx(1.1992947060496044183).epsilon(1e-9));
    for (double s = 2.05; s < 40.0; s *= 1.11) {
        CHECK(cmin(s) <= 1.3);
        CHECK(cmin(s) > 0.0);
    }
    const auto peak = cmin_peak();
    CHECK(peak.value == doctest::Approx(1.24541065577533).epsilon(1e-9));
    CHECK(peak.s == doctest::Approx(2.46270856746).epsilon(1e-5));
    CHECK(peak.value == doctest::Approx(1.2454).epsilon(1e-4));
}

TEST_CASE("fourier transform of the disk filter matches the autocorrelation theorem")
{
    for (double w : {0.8, 1.7}) {
        const auto f = FilterSpec::autocorr_inf(w);
        std::vector<double> r;
        for (double x = 0.0; x <= 8.0; x += 0.173) {
            r.push_back(x);
        }
        const auto got = fourier_of_filter(f, r);
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(got[i] == doctest::Approx(oracle::disk_filter_transform(w, r[i])).epsilon(1e-8).scale(1.0));
            CHECK(got[i] >= -1e-12);
        }
    }
}

TEST_CASE("fourier transform against a direct Hankel sum, and total weight")
{
    const auto f = FilterSpec::analytic(4.0, 1.3, 1.2);
    const auto g = [&](double b) { return eval_filter(f, b); };
    for (double r : {0.0, 0.4, 1.3, 2.9}) {
        CHECK(fourier_of_filter(f, r) == doctest::Approx(oracle::hankel(g, r, 4.0, 20000)).epsilon(1e-9).scale(1.0));
    }
    // The analytic filter has a cusp at the origin, so its transform decays
    // too slowly for a truncated total-weight check.
    const auto q3 = FilterSpec::autocorr(3.0, 1.0);
    const auto q4 = FilterSpec::autocorr(4.0, 1.3);
    for (const auto* spec : {&q3, &q4}) {
        const double mass = 2.0 * oracle::pi * oracle::simpson([&](double r) { return r * fourier_of_filter(*spec, r); }, 0.0, 12.0, 2400);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK_THROWS_AS(fourier_of_filter(FilterSpec::gaussian(1.0), 0.5), ValidationError);
}
