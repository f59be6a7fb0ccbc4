#include <doctest.h>

#include "slelab/rng.hpp"

#include <cmath>

using namespace slelab;

TEST_CASE("philox blocks are deterministic and distinct across streams") {
    auto b1 = philox::block(42, 7, 3);
    auto b2 = philox::block(42, 7, 3);
    CHECK(b1 == b2);
    CHECK(philox::block(42, 7, 4) != b1);
    CHECK(philox::block(42, 8, 3) != b1);
    CHECK(philox::block(43, 7, 3) != b1);
}

TEST_CASE("stream reuse reproduces the exact sequence") {
    RngStream r1(123, 5), r2(123, 5);
    for (int i = 0; i < 100; ++i) CHECK(r1.normal() == r2.normal());
}

TEST_CASE("u01 lands in (0,1] and has the right mean") {
    RngStream r(99, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = r.u01();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("normal moments") {
    RngStream r(7, 1);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        s1 += z;
        s2 += z * z;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(double(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma sampler matches mean and variance") {
    for (double shape : {0.5, 2.5}) {
        RngStream r(11, static_cast<std::uint64_t>(shape * 10));
        const int n = 100000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double g = r.gamma(shape);
            s1 += g;
            s2 += g * g;
        }
        double mean = s1 / n, var = s2 / n - mean * mean;
        CHECK(mean == doctest::Approx(shape).epsilon(0.03));
        CHECK(var == doctest::Approx(shape).epsilon(0.06));
    }
}
