#include "doctest.h"
#include "oracles.hpp"

#include "ncqp/errors.hpp"
#include "ncqp/homodyne.hpp"
#include "ncqp/quasiprob.hpp"
#include "ncqp/sampling.hpp"
#include "ncqp/significance.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

using namespace ncqp;
namespace fs = std::filesystem;

namespace {

double pattern_oracle(const FilterSpec& f, double lambda, double b_end)
{
    return 2.0 / oracle::pi *
        oracle::simpson([&](double b) { return b * std::exp(0.5 * b * b) * eval_filter(f, b) * std::cos(lambda * b); },
                        0.0, b_end, 200000);
}

fs::path scratch_file(const std::string& name, const std::string& body)
{
    const fs::path dir = fs::temp_directory_path() / "ncqp_homodyne_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p;
}

} // namespace

TEST_CASE("pattern table against an independent Simpson integral")
{
    const auto f = FilterSpec::autocorr_inf(1.5);
    const PatternTable t(f, 30.0);
    const double peak = std::fabs(t(0.0));
    CHECK(t(0.0) == doctest::Approx(pattern_oracle(f, 0.0, 3.0)).epsilon(1e-8));
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 100; ++i) {
        const double l = u(g);
        CHECK(std::fabs(t(l) - pattern_oracle(f, l, 3.0)) < 1e-6 * peak);
        CHECK(t(l) == t(-l));
        CHECK(std::fabs(t(l) - t.direct(l)) < 1e-8 * peak);
    }
    CHECK(t(31.0 + t.lambda_max()) == 0.0);
    CHECK_FALSE(t.covers(t.lambda_max() + 1.0));

    const auto q4 = FilterSpec::autocorr(4.0, 1.2);
    const PatternTable t4(q4, 20.0);
    for (double l : {0.0, 1.7, 6.3, 14.0}) {
        CHECK(std::fabs(t4(l) - pattern_oracle(q4, l, filter_cutoff(q4, 1e-20))) < 1e-6 * std::fabs(t4(0.0)));
    }
}

TEST_CASE("table refinement changes estimates only at round-off")
{
    const auto f = FilterSpec::autocorr(3.0, 1.3);
    const PatternTable a(f, 20.0, 8);
    const PatternTable b(f, 20.0, 16);
    const auto d = sample_quadrature(StateModel::noisy_fock(1, 0.8), 20000, 3);
    for (double al : {0.0, 0.4, 1.1}) {
        const auto ea = estimate_qp(d, a, al);
        const auto eb = estimate_qp(d, b, al);
        CHECK(ea.value == doctest::Approx(eb.value).epsilon(1e-8));
    }
}

TEST_CASE("gaussian filter with w >= 1 has no pattern function")
{
    CHECK_THROWS_WITH_AS(PatternTable(FilterSpec::gaussian(1.0), 10.0), doctest::Contains("singular"), ValidationError);
    CHECK_NOTHROW(PatternTable(FilterSpec::gaussian(0.8), 10.0));
}

TEST_CASE("pattern argument and phase covariance")
{
    const QuadratureRecord r{0.7, 0.4};
    CHECK(pattern_argument(r, 0.0) == 0.7);
    const std::complex<double> a = std::polar(0.9, 0.3);
    CHECK(pattern_argument(r, a) == doctest::Approx(0.7 + 1.8 * std::sin(0.3 + 0.4 - oracle::pi / 2)));
    const PatternTable t(FilterSpec::autocorr_inf(1.4), 30.0);
    const auto d = sample_quadrature(StateModel::npats(1, 0.8, 0.7), 2000, 9);
    const double delta = 0.37;
    QuadratureDataset shifted = d;
    for (auto& rec : shifted.records) {
        rec.phi += delta;
    }
    const auto e1 = estimate_qp(d, t, a);
    const auto e2 = estimate_qp(shifted, t, a * std::polar(1.0, -delta));
    CHECK(e1.value == doctest::Approx(e2.value).epsilon(1e-12));
    CHECK(e1.sigma == doctest::Approx(e2.sigma).epsilon(1e-10));
}

TEST_CASE("single record and standard error")
{
    const PatternTable t(FilterSpec::autocorr_inf(1.2), 20.0);
    QuadratureDataset one;
    one.records = {{0.9, 1.0}};
    const auto e = estimate_qp(one, t, 0.0);
    CHECK(e.value == t(0.9));
    CHECK(std::isnan(e.sigma));
    CHECK_THROWS_AS(estimate_qp(QuadratureDataset{}, t, 0.0), ValidationError);

    const auto d = sample_quadrature(StateModel::noisy_fock(1, 0.8), 5000, 4);
    std::vector<double> f;
    for (const auto& r : d.records) {
        f.push_back(t(r.x));
    }
    const auto ms = oracle::mean_se(f);
    const auto est = estimate_qp(d, t, 0.0);
    CHECK(est.value == doctest::Approx(ms.mean).epsilon(1e-12));
    CHECK(est.sigma == doctest::Approx(ms.se).epsilon(1e-10));
    CHECK(est.n_used == 5000);
    CHECK(est.n_outside == 0);

    QuadratureDataset far = one;
    far.records.push_back({100.0, 0.0});
    CHECK(estimate_qp(far, t, 0.0).n_outside == 1);
}

TEST_CASE("estimate agrees with the deterministic filtered P function")
{
    const auto s = StateModel::noisy_fock(1, 0.8);
    const auto f = FilterSpec::autocorr_inf(1.5);
    const auto d = sample_quadrature(s, 100000, 17);
    const PatternTable t(f, required_lambda_max(d, 1.0));
    for (double a : {0.0, 0.3, 0.8}) {
        const auto e = estimate_qp(d, t, a);
        CHECK(std::fabs(e.value - filtered_p_radial(s, f, a)) < 3.5 * e.sigma);
    }
}

TEST_CASE("characteristic function estimate")
{
    const auto vac = sample_quadrature(StateModel::noisy_fock(0, 1.0), 20000, 5);
    const auto z = estimate_cf(vac, 0.0);
    CHECK(z.value == 1.0);
    CHECK(z.sigma == 0.0);
    const auto e = estimate_cf(vac, 1.0);
    CHECK(std::fabs(e.value - 1.0) < 4.0 * e.sigma);
    QuadratureDataset one;
    one.records = {{0.1, 0.0}};
    CHECK_THROWS_AS(estimate_cf(one, 1.0), ValidationError);

    const auto s = StateModel::dephased_squeezed_vacuum(0.4, 5.0, 1.0);
    const double eta[] = {1.0};
    const auto opt = required_n_cf(s, eta)[0];
    REQUIRE(opt.certified);
    const double b = opt.alpha_star;
    CHECK(cf_p(s, b).real() > 1.0);
    double prev = 0.0;
    for (double scale : {0.25, 4.0}) {
        const auto d = sample_quadrature(s, static_cast<std::size_t>(scale * opt.n_required), 6);
        const auto c = estimate_cf(d, b);
        CHECK(std::fabs(c.value - cf_p(s, b).real()) < 4.0 * c.sigma);
        const double sig = (c.value - 1.0) / c.sigma;
        CHECK(sig > prev);
        prev = sig;
    }
    CHECK(prev > 5.0);
}

TEST_CASE("dataset ingestion")
{
    const auto ok = ingest_dataset(scratch_file("ok.csv", "x,phi\n0.5,0.25\n-1.5,3.5\n2.0,-0.5\n"));
    REQUIRE(ok.size() == 3);
    CHECK(ok.records[0].x == 0.5);
    CHECK(ok.records[1].phi == doctest::Approx(3.5 - oracle::pi));
    CHECK(ok.records[1].x == 1.5);
    CHECK(ok.records[2].phi == doctest::Approx(oracle::pi - 0.5));
    CHECK(ok.records[2].x == -2.0);
    CHECK(reduce_phase(oracle::pi) == 0.0);

    CHECK_THROWS_WITH_AS(ingest_dataset(scratch_file("bad.csv", "x,phi\n0.5,0.2\nabc,0.1\n")),
                         doctest::Contains("line 3"), ValidationError);
    CHECK_THROWS_AS(ingest_dataset(scratch_file("empty.csv", "")), ValidationError);
    CHECK_THROWS_AS(ingest_dataset(scratch_file("header.csv", "x,theta\n0.1,0.2\n")), ValidationError);
    CHECK_THROWS_AS(ingest_dataset(scratch_file("noval.csv", "x,phi\n")), ValidationError);
    CHECK_THROWS_AS(ingest_dataset(scratch_file("nan.csv", "x,phi\nnan,0.1\n")), ValidationError);
    CHECK_THROWS_AS(ingest_dataset("/nonexistent/file.csv"), ValidationError);

    const auto d = sample_quadrature(StateModel::noisy_fock(2, 0.5), 50, 1);
    const fs::path p = fs::temp_directory_path() / "ncqp_homodyne_test" / "round.csv";
    write_dataset(p, d);
    const auto back = ingest_dataset(p);
    REQUIRE(back.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(back.records[i].x == d.records[i].x);
        CHECK(back.records[i].phi == d.records[i].phi);
    }
}
