#include <catch2/catch_amalgamated.hpp>

#include "adenet/types.hpp"
#include "test_util.hpp"

using namespace adenet;

TEST_CASE("center subtracts column and response means") {
    Dataset data;
    data.X.resize(3, 1);
    data.X << 1, 2, 3;
    data.y.resize(3);
    data.y << 2, 2, 2;
    const Dataset centered = center(data);
    REQUIRE(centered.centered);
    REQUIRE(centered.X(0, 0) == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(centered.X(1, 0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(centered.X(2, 0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(centered.y.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("center is idempotent") {
    Rng rng(7);
    Dataset data;
    data.X.resize(20, 4);
    data.y.resize(20);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 4; ++j) data.X(i, j) = 5.0 + 3.0 * rng.normal();
        data.y[i] = -2.0 + rng.normal();
    }
    const Dataset once = center(data);
    const Dataset twice = center(once);
    REQUIRE(testutil::max_abs_diff(once.y, twice.y) <= 1e-12);
    REQUIRE((once.X - twice.X).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("center rejects non-finite input") {
    Dataset data;
    data.X.resize(3, 2);
    data.X.setOnes();
    data.X(1, 1) = std::numeric_limits<double>::quiet_NaN();
    data.y = Eigen::VectorXd::Zero(3);
    REQUIRE_THROWS_AS(center(data), ValidationError);
}

TEST_CASE("dataset validation enforces shape and the centered flag") {
    Dataset tiny;
    tiny.X.resize(1, 1);
    tiny.X.setOnes();
    tiny.y = Eigen::VectorXd::Zero(1);
    REQUIRE_THROWS_AS(validate(tiny), ValidationError);

    Dataset uncentered;
    uncentered.X.resize(4, 1);
    uncentered.X << 1, 2, 3, 4;
    uncentered.y = Eigen::VectorXd::Zero(4);
    uncentered.centered = true;
    REQUIRE_THROWS_AS(validate(uncentered), ValidationError);
}

TEST_CASE("penalty validation") {
    REQUIRE_THROWS_AS(validate(Penalty::unit(-1.0, 0.0), 3), ValidationError);
    Penalty bad{1.0, 0.0, Eigen::VectorXd::Constant(3, -0.5)};
    REQUIRE_THROWS_AS(validate(bad, 3), ValidationError);
    Penalty inf_ok{1.0, 0.0, Eigen::VectorXd::Constant(3, kInf)};
    REQUIRE_NOTHROW(validate(inf_ok, 3));
    REQUIRE_THROWS_AS(validate(inf_ok, 4), ValidationError);
}

TEST_CASE("standardize rescales columns to unit norm") {
    Rng rng(11);
    Dataset data = testutil::random_dataset(12, 3, rng);
    data.X.col(1) *= 17.0;
    const StandardizedDataset s = standardize(data);
    for (int j = 0; j < 3; ++j)
        REQUIRE(s.data.X.col(j).norm() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(s.column_norms[1] == Catch::Approx(data.X.col(1).norm()));
}
