#include "doctest.h"

#include "ncqp/admissibility.hpp"

#include <cmath>

using namespace ncqp;

TEST_CASE("nonclassicality filters pass conditions 1-6")
{
    for (const auto& f : {FilterSpec::autocorr(3.0, 1.0), FilterSpec::autocorr(4.0, 1.4), FilterSpec::autocorr(6.0, 0.8),
                          FilterSpec::analytic(4.0, 1.3, 1.0)}) {
        CAPTURE(f.label());
        const auto rep = certify_filter(f);
        REQUIRE(rep.conditions.size() == 6);
        for (int i = 1; i <= 6; ++i) {
            CAPTURE(i);
            CHECK(rep.condition(i).pass);
        }
        CHECK(std::isfinite(rep.condition(1).margin));
    }
}

TEST_CASE("disk filter vanishes beyond 2w and fails only the nonvanishing condition")
{
    const auto rep = certify_filter(FilterSpec::autocorr_inf(1.0));
    CHECK(rep.condition(1).pass);
    CHECK(rep.condition(2).pass);
    CHECK(rep.condition(3).pass);
    CHECK(rep.condition(4).pass);
    CHECK_FALSE(rep.condition(5).pass);
}

TEST_CASE("gaussian with w >= 1 fails square integrability")
{
    const auto rep = certify_filter(FilterSpec::gaussian(1.5));
    CHECK_FALSE(rep.condition(1).pass);
    CHECK(std::isinf(rep.condition(1).margin));
    CHECK(std::isfinite(log_condition1_norm(FilterSpec::gaussian(0.7))));
}

TEST_CASE("askey inequality on the analytic family")
{
    const auto good = certify_filter(FilterSpec::analytic(4.0, 1.3, 1.0));
    REQUIRE(good.askey.has_value());
    CHECK(good.askey->pass);
    const auto edge = certify_filter(FilterSpec::analytic(4.0, cmin(4.0), 1.0));
    CHECK(edge.askey->pass);
    const auto bad = certify_filter(FilterSpec::analytic_unchecked(4.0, 0.5, 1.0));
    CHECK_FALSE(bad.askey->pass);
    CHECK(bad.askey->margin < 0.0);
    CHECK_FALSE(certify_filter(FilterSpec::autocorr(3.0, 1.0)).askey.has_value());
}

TEST_CASE("report json lists every condition")
{
    const auto j = certify_filter(FilterSpec::autocorr_inf(2.0)).to_json();
    for (const char* c : {"C1", "C2", "C3", "C4", "C5", "C6"}) {
        CHECK(j["conditions"].contains(c));
    }
    CHECK(j["conditions"]["C5"]["pass"] == false);
    CHECK(j["conditions"]["C5"]["margin"] == "-inf");
}
