#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ucx/bench.hpp"
#include "ucx/errors.hpp"

using namespace ucx;

TEST_CASE("polynomial fits") {
    std::vector<double> x{1, 2, 3, 4, 5, 6}, y;
    for (double v : x) y.push_back(2 - v + 0.5 * v * v * v);
    auto cubic = fit_polynomial(x, y, 3);
    REQUIRE(cubic.coefficients.size() == 4);
    CHECK(cubic.coefficients[0] == doctest::Approx(2));
    CHECK(cubic.coefficients[1] == doctest::Approx(-1));
    CHECK(cubic.coefficients[2] == doctest::Approx(0).epsilon(1e-6));
    CHECK(cubic.coefficients[3] == doctest::Approx(0.5));
    CHECK(cubic.r2 == doctest::Approx(1.0));
    CHECK(cubic(10) == doctest::Approx(2 - 10 + 500));

    // R^2 against a hand computation: y = x fitted by a constant.
    auto flat = fit_polynomial({1, 2, 3}, {1, 2, 3}, 0);
    CHECK(flat.coefficients[0] == doctest::Approx(2));
    CHECK(flat.r2 == doctest::Approx(0.0));

    CHECK_THROWS_AS(fit_polynomial({1, 2}, {1, 2}, 3), DataError);
    CHECK_THROWS_AS(fit_polynomial({1, 2}, {1}, 1), DataError);
}

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK_THROWS_AS(median({}), DataError);
}

TEST_CASE("bench report") {
    auto parts = synthetic_bench_partitions({3}, 100, 1);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].activity_set.size() == 3);
    CHECK(parts[0].traces.size() == 100);

    auto single = bench_partitions(parts, {}, 2);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].samples.size() == 2);
    CHECK_FALSE(single.cubic);
    CHECK(single.notice.find("fit skipped") != std::string::npos);

    auto several = bench_partitions(synthetic_bench_partitions({3, 4, 5, 6}, 100, 1), {}, 1);
    CHECK(several.cubic);
    CHECK(several.linear);
    auto csv = bench_csv(several);
    CHECK(csv.rfind("partition,activities,traces,median_seconds,repetitions\n", 0) == 0);
    CHECK(csv.find("# cubic fit r2=") != std::string::npos);

    CHECK_THROWS_AS(bench_partitions(parts, {}, 0), DataError);
}
