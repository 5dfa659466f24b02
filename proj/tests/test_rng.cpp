#include <catch2/catch_amalgamated.hpp>

#include "adenet/rng.hpp"

using namespace adenet;

TEST_CASE("streams are reproducible and distinct") {
    Rng a = Rng::from_stream(42, 3, 1);
    Rng b = Rng::from_stream(42, 3, 1);
    Rng c = Rng::from_stream(42, 3, 2);
    Rng d = Rng::from_stream(42, 4, 1);
    bool all_equal_ab = true, any_diff_ac = false, any_diff_ad = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal_ab = all_equal_ab && va == b.next_u64();
        any_diff_ac = any_diff_ac || va != c.next_u64();
        any_diff_ad = any_diff_ad || va != d.next_u64();
    }
    REQUIRE(all_equal_ab);
    REQUIRE(any_diff_ac);
    REQUIRE(any_diff_ad);
}

TEST_CASE("uniform01 stays inside the open unit interval") {
    Rng rng(123);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal moments") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.01);
    REQUIRE(std::abs(var - 1.0) < 0.02);
}
