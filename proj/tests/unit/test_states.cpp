#include "doctest.h"
#include "oracles.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/special.hpp"
#include "ncqp/states.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace ncqp;
using cd = std::complex<double>;

namespace {

std::vector<StateModel> all_states()
{
    return {StateModel::noisy_fock(1, 0.7),         StateModel::noisy_fock(3, 1.0),
            StateModel::npats(1, 0.8, 0.6),         StateModel::npats(2, 0.5, 1.0),
            StateModel::thermal(1.2, 0.9),          StateModel::squeezed_vacuum(0.4, 2.5, 0.8),
            StateModel::dephased_squeezed_vacuum(0.4, 5.0, 0.7),
            StateModel::heralded({1.0, 0.0}, 8, 2, 0.6)};
}

} // namespace

TEST_CASE("invalid parameters are rejected")
{
    CHECK_THROWS_AS(StateModel::noisy_fock(-1, 0.5), ValidationError);
    CHECK_THROWS_AS(StateModel::noisy_fock(1, 0.0), ValidationError);
    CHECK_THROWS_AS(StateModel::noisy_fock(1, 1.2), ValidationError);
    CHECK_THROWS_AS(StateModel::npats(1, -0.1, 0.5), ValidationError);
    CHECK_THROWS_AS(StateModel::squeezed_vacuum(0.0, 1.5, 0.5), ValidationError);
    CHECK_THROWS_AS(StateModel::thermal(0.0, 0.5), ValidationError);
    CHECK_THROWS_AS(StateModel::heralded({1.0, 0.0}, 4, 5, 0.5), ValidationError);
    CHECK_THROWS_AS(StateModel::heralded({0.0, 0.0}, 4, 1, 0.5), ValidationError);
}

TEST_CASE("characteristic function is normalized and hermitian")
{
    for (const auto& s : all_states()) {
        CAPTURE(s.label());
        CHECK(std::abs(cf_p(s, 0.0) - cd(1.0, 0.0)) < 1e-12);
        for (cd b : {cd(0.3, 0.1), cd(-1.1, 0.7), cd(0.0, 2.0)}) {
            CHECK(std::abs(cf_p(s, -b) - std::conj(cf_p(s, b))) < 1e-12);
        }
    }
    // Single photon, no loss: Phi(beta) = 1 - |beta|^2.
    CHECK(std::abs(cf_p(StateModel::noisy_fock(1, 1.0), cd(0.6, 0.8))) < 1e-14);
    CHECK(cf_p(StateModel::noisy_fock(1, 1.0), cd(1.5, 0.0)).real() == doctest::Approx(1.0 - 2.25));
}

TEST_CASE("PATS threshold thermal occupations")
{
    const double table[] = {0.386, 0.549, 0.640, 0.698, 0.739, 0.770};
    double prev = 0.0;
    for (int n = 1; n <= 6; ++n) {
        const double t = threshold_nbar(n);
        CHECK(t == doctest::Approx(table[n - 1]).epsilon(0.001 / table[n - 1]));
        CHECK(t > prev);
        prev = t;
        CHECK(npats_sup_abs_cf(n, t) <= 1.0 + 1e-9);
        CHECK(npats_sup_abs_cf(n, t - 0.05) > 1.0);
    }
    CHECK(npats_sup_abs_cf(1, 0.386) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("dephased squeezed vacuum characteristic function grows without bound")
{
    const auto s = StateModel::dephased_squeezed_vacuum(0.4, 5.0, 1.0);
    CHECK(std::abs(cf_p(s, 0.2)) <= 1.0);
    CHECK(std::abs(cf_p(s, 3.0)) > 1.0);
    CHECK(std::abs(cf_p(s, 6.0)) > std::abs(cf_p(s, 3.0)));
    // Direct phase average of the squeezed characteristic function.
    const auto sv = StateModel::squeezed_vacuum(0.4, 5.0, 1.0);
    for (double b : {0.5, 1.4, 2.2}) {
        const double avg =
            oracle::simpson([&](double t) { return cf_p(sv, std::polar(b, t)).real(); }, 0.0, 2 * oracle::pi, 2000) /
            (2 * oracle::pi);
        CHECK(cf_p(s, b).real() == doctest::Approx(avg).epsilon(1e-10));
    }
}

TEST_CASE("PATS P function and Wigner function")
{
    const auto s = StateModel::npats(1, 0.8, 0.6);
    const double mass =
        2 * oracle::pi * oracle::simpson([&](double r) { return r * pats_p(s, r); }, 0.0, 12.0, 20000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pats_p(s, 0.0) < 0.0);
    CHECK(pats_p(StateModel::npats(2, 0.8, 0.6), 0.0) > 0.0);

    double low_04 = 1.0;
    double low_06 = 1.0;
    for (double r = 0.0; r < 4.0; r += 0.01) {
        low_04 = std::min(low_04, pats_wigner(StateModel::npats(1, 0.8, 0.4), r));
        low_06 = std::min(low_06, pats_wigner(StateModel::npats(1, 0.8, 0.6), r));
    }
    CHECK(low_04 >= 0.0);
    CHECK(low_06 < 0.0);
    CHECK(std::isfinite(pats_wigner(StateModel::npats(3, 0.8, 0.5), 0.0)));
    const double wmass = 2 * oracle::pi *
        oracle::simpson([&](double r) { return r * pats_wigner(StateModel::npats(2, 0.7, 0.5), r); }, 0.0, 10.0, 20000);
    CHECK(wmass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("photon statistics")
{
    for (const auto& s : {StateModel::npats(1, 0.8, 1.0), StateModel::npats(3, 0.6, 0.45), StateModel::noisy_fock(4, 0.3)}) {
        const auto p = photon_distribution(s);
        double sum = 0.0;
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            CHECK(p[k] >= 0.0);
            sum += p[k];
            mean += k * p[k];
            m2 += double(k) * k * p[k];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        if (s.kind() == StateKind::NPats) {
            CHECK(mean == doctest::Approx(s.eta() * (s.n() + (s.n() + 1) * s.nbar())).epsilon(1e-9));
            CHECK(mandel_q(s) == doctest::Approx((m2 - mean * mean - mean) / mean).epsilon(1e-8));
        } else {
            CHECK(mean == doctest::Approx(s.eta() * s.n()).epsilon(1e-12));
        }
    }
    CHECK(mandel_q(StateModel::npats(1, 0.8, 1.0)) == doctest::Approx(0.28 / 2.6).epsilon(1e-12));
    CHECK(std::fabs(mandel_q(StateModel::npats(2, std::sqrt(2.0 / 3.0), 0.7))) < 1e-12);
    CHECK(mandel_q(StateModel::npats(1, 0.5, 0.3)) == doctest::Approx(0.3 * mandel_q(StateModel::npats(1, 0.5, 1.0))));
}

TEST_CASE("heralded array state")
{
    const auto s = StateModel::heralded({1.0, 0.0}, 8, 1, 0.2);
    const auto g = heralded_terms(s);
    double mass = 0.0;
    for (std::size_t j = 0; j < g.amplitude.size(); ++j) {
        mass += g.amplitude[j] * oracle::pi / g.decay[j];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(heralded_p(s, 0.0) < 0.0);
    const auto k0 = StateModel::heralded({1.0, 0.0}, 8, 0, 0.2);
    for (double r = 0.0; r < 5.0; r += 0.1) {
        CHECK(heralded_p(k0, r) > 0.0);
    }
    CHECK_THROWS_AS(heralded_terms(StateModel::noisy_fock(1, 0.5)), ValidationError);
}

TEST_CASE("quadrature densities: two routes, normalization, variance")
{
    for (const auto& s : all_states()) {
        CAPTURE(s.label());
        for (double phi : {0.0, 0.6, 1.9}) {
            const double v = quadrature_variance(s, phi);
            const double lim = 12.0 * std::sqrt(v);
            double worst = 0.0;
            for (double x = -lim; x <= lim; x += lim / 97) {
                worst = std::max(worst, std::fabs(quadrature_pdf(s, x, phi) - quadrature_pdf_mixture(s, x, phi)));
            }
            CHECK(worst < 1e-8);
            const auto pdf = [&](double x) { return quadrature_pdf_mixture(s, x, phi); };
            CHECK(oracle::simpson(pdf, -lim, lim, 8000) == doctest::Approx(1.0).epsilon(1e-8));
            const double var = oracle::simpson([&](double x) { return x * x * pdf(x); }, -lim, lim, 8000);
            CHECK(var == doctest::Approx(v).epsilon(1e-8));
        }
    }
    const auto vac = StateModel::noisy_fock(0, 1.0);
    CHECK(quadrature_pdf(vac, 0.7, 0.3) == doctest::Approx(std::exp(-0.245) / std::sqrt(2 * oracle::pi)).epsilon(1e-10));
    CHECK(quadrature_variance(StateModel::noisy_fock(2, 0.5), 0.0) == doctest::Approx(3.0));
    CHECK(quadrature_variance(StateModel::squeezed_vacuum(0.4, 2.5, 0.8), 0.0) == doctest::Approx(0.8 * 0.4 + 0.2));
    CHECK(quadrature_variance(StateModel::dephased_squeezed_vacuum(0.4, 5.0, 0.7), 1.0) ==
          doctest::Approx(0.7 * 2.7 + 0.3));
}
