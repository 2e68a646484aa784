#include "doctest.h"
#include "oracles.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/quasiprob.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace ncqp;

namespace {

// int d^2 gamma P(gamma) F(|alpha - gamma|) for radial P, polar grid around the origin.
template <typename P, typename F>
double convolve(const P& p, const F& f, double alpha, double r_max)
{
    const int nt = 256;
    return oracle::simpson(
        [&](double r) {
            double ring = 0.0;
            for (int k = 0; k < nt; ++k) {
                const double t = 2.0 * oracle::pi * k / nt;
                ring += f(std::abs(std::polar(r, t) - alpha));
            }
            return r * p(r) * ring * 2.0 * oracle::pi / nt;
        },
        0.0, r_max, 1600);
}

} // namespace

TEST_CASE("single photon at 80% efficiency, disk filter, against a direct Hankel sum")
{
    const auto s = StateModel::noisy_fock(1, 0.8);
    const auto f = FilterSpec::autocorr_inf(1.5);
    const double got = filtered_p_radial(s, f, 0.0);
    const double ref = oracle::hankel([](double b) { return (1.0 - 0.8 * b * b) * oracle::disk_autocorr(b / 1.5); },
                                      0.0, 3.0, 20000);
    CHECK(got < 0.0);
    CHECK(got == doctest::Approx(ref).epsilon(1e-9));
    for (double r : {0.4, 1.1, 2.5}) {
        const double ref_r = oracle::hankel(
            [](double b) { return (1.0 - 0.8 * b * b) * oracle::disk_autocorr(b / 1.5); }, r, 3.0, 20000);
        CHECK(filtered_p_radial(s, f, r) == doctest::Approx(ref_r).epsilon(1e-8).scale(1e-3));
    }
}

TEST_CASE("convolution of the closed-form P function with the filter transform")
{
    const auto s = StateModel::npats(1, 0.8, 0.6);
    const double w = 1.3;
    const auto p = [&](double r) { return pats_p(s, r); };
    const auto fd = [&](double r) { return oracle::disk_filter_transform(w, r); };
    for (double a : {0.0, 0.7, 1.6}) {
        CAPTURE(a);
        const double ref = convolve(p, fd, a, 6.0);
        CHECK(std::fabs(filtered_p_radial(s, FilterSpec::autocorr_inf(w), a) - ref) < 1e-5);
    }
    // Analytic filter, transform taken from the library at r on a fine table.
    const auto an = FilterSpec::analytic(4.0, 1.3, 2.0);
    std::vector<double> rr;
    for (int i = 0; i <= 4000; ++i) {
        rr.push_back(10.0 * i / 4000.0);
    }
    const auto ft = fourier_of_filter(an, rr);
    const auto fa = [&](double r) {
        const double t = r / 10.0 * 4000.0;
        const auto i = std::min<std::size_t>(3999, static_cast<std::size_t>(t));
        const double u = t - static_cast<double>(i);
        return ft[i] * (1.0 - u) + ft[i + 1] * u;
    };
    for (double a : {0.0, 0.9}) {
        const double ref = convolve(p, fa, a, 6.0);
        CHECK(std::fabs(filtered_p_radial(s, an, a) - ref) < 1e-5);
    }
}

TEST_CASE("classical states stay nonnegative on a width grid")
{
    const std::vector<FilterSpec> fam = {FilterSpec::autocorr(3.0, 1.0), FilterSpec::autocorr(4.0, 1.0),
                                         FilterSpec::autocorr_inf(1.0), FilterSpec::analytic(4.0, 1.3, 1.0)};
    std::vector<double> radii;
    for (double r = 0.0; r <= 6.0; r += 0.1) {
        radii.push_back(r);
    }
    for (const auto& s : {StateModel::thermal(1.2, 0.9), StateModel::heralded({1.0, 0.0}, 8, 0, 0.2),
                          StateModel::noisy_fock(0, 1.0)}) {
        for (const auto& base : fam) {
            for (double w : {0.5, 1.0, 2.0, 4.0}) {
                CAPTURE(s.label());
                CAPTURE(base.label());
                CAPTURE(w);
                const auto g = filtered_p_radial(s, base.with_width(w), radii);
                for (double v : g.values) {
                    CHECK(v >= -1e-9);
                }
            }
        }
    }
}

TEST_CASE("heralded k = 0 against direct convolution")
{
    const auto s = StateModel::heralded({1.0, 0.0}, 8, 0, 0.2);
    const auto p = [&](double r) { return heralded_p(s, r); };
    const auto fd = [&](double r) { return oracle::disk_filter_transform(1.0, r); };
    for (double a : {0.0, 1.0}) {
        CHECK(std::fabs(filtered_p_radial(s, FilterSpec::autocorr_inf(1.0), a) - convolve(p, fd, a, 8.0)) < 1e-5);
    }
}

TEST_CASE("width limit approaches the P function")
{
    const auto s = StateModel::npats(1, 0.8, 0.6);
    for (double a : {0.0, 0.5, 1.0, 1.8}) {
        const double exact = pats_p(s, a);
        const double narrow = filtered_p_radial(s, FilterSpec::autocorr(4.0, 2.0), a);
        const double wide = filtered_p_radial(s, FilterSpec::autocorr(4.0, 8.0), a);
        CHECK(std::fabs(wide - exact) < std::fabs(narrow - exact));
    }
}

TEST_CASE("radial and two-dimensional routes agree")
{
    const auto s = StateModel::npats(1, 0.8, 0.6);
    const auto f = FilterSpec::autocorr_inf(1.3);
    std::vector<double> ax;
    for (int i = 0; i <= 8; ++i) {
        ax.push_back(-2.0 + 0.5 * i);
    }
    const auto g = filtered_p_2d(s, f, ax, ax);
    REQUIRE(g.values.size() == ax.size() * ax.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < g.alpha.size(); ++i) {
        worst = std::max(worst, std::fabs(g.values[i] - filtered_p_radial(s, f, std::abs(g.alpha[i]))));
    }
    CHECK(worst < 1e-6);
    // Parity: the grid is symmetric, so alpha and -alpha sit at mirrored indices.
    const std::size_t n = g.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(g.values[i] == doctest::Approx(g.values[n - 1 - i]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("vacuum through the anisotropic route is nonnegative")
{
    const auto vac = StateModel::squeezed_vacuum(1.0, 1.0, 1.0);
    std::vector<double> ax;
    for (int i = 0; i <= 10; ++i) {
        ax.push_back(-2.5 + 0.5 * i);
    }
    for (const auto& f : {FilterSpec::autocorr_inf(1.5), FilterSpec::analytic(4.0, 1.3, 2.0)}) {
        const auto g = filtered_p_2d(vac, f, ax, ax);
        for (double v : g.values) {
            CHECK(v >= -1e-9);
        }
    }
}

TEST_CASE("errors")
{
    const auto sq = StateModel::squeezed_vacuum(0.5, 2.0, 1.0);
    const std::vector<double> ax = {0.0};
    Grid2dOptions small;
    small.box_limit = 5.0;
    CHECK_THROWS_AS(filtered_p_2d(sq, FilterSpec::analytic(4.0, 1.3, 9.9), ax, ax, small), NumericalError);
    CHECK_THROWS_AS(filtered_p_radial(sq, FilterSpec::autocorr_inf(1.0), 0.0), ValidationError);
    CHECK_THROWS_AS(TwoModeConfig::make(StateModel::noisy_fock(1, 0.5), 0.5), ValidationError);
    CHECK_THROWS_AS(TwoModeConfig::make(StateModel::heralded({1.0, 0.0}, 8, 1, 0.2), 1.0), ValidationError);
}

TEST_CASE("truncation error is reported")
{
    std::vector<double> radii = {0.0, 0.5, 1.0};
    const auto g = filtered_p_radial(StateModel::noisy_fock(1, 0.8), FilterSpec::autocorr(3.0, 1.5), radii);
    CHECK(g.truncation_error >= 0.0);
    CHECK(g.truncation_error < 1e-8);
    CHECK(g.errors.size() == 3);
}

TEST_CASE("two-mode heralded state")
{
    const auto f = FilterSpec::autocorr_inf(1.7);
    const std::vector<TwoModePoint> origin = {{0.0, 0.0}};
    const auto k1 = TwoModeConfig::make(StateModel::heralded({1.0, 0.0}, 8, 1, 0.2), 0.5);
    const auto k0 = TwoModeConfig::make(StateModel::heralded({1.0, 0.0}, 8, 0, 0.2), 0.5);
    const auto g1 = two_mode_filtered_p(k1, f, origin);
    CHECK(g1.values[0] < -10.0 * g1.truncation_error);
    CHECK(two_mode_filtered_p(k0, f, origin).values[0] > 0.0);
    // Disk filter transforms carry slow 1/r^3 tails, so the mass converges like 1/R.
    CHECK(two_mode_total_mass(k1, f, 1000.0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(two_mode_total_mass(k1, FilterSpec::autocorr(4.0, 1.7), 30.0) == doctest::Approx(1.0).epsilon(1e-3));
    const auto slice = two_mode_re_slice(3.0, 5);
    REQUIRE(slice.size() == 25);
    CHECK(slice.front().a1 == std::complex<double>(-3.0, 0.0));
    CHECK(slice.back().a2 == std::complex<double>(3.0, 0.0));
}
