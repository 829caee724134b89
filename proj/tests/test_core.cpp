#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qwalk/core.hpp"

using namespace qwalk;

TEST_CASE("coin matrix at reference angles") {
    const CoinOperator had = make_coin(pi / 4);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(had.matrix[0][0] == Catch::Approx(r).margin(1e-15));
    CHECK(had.matrix[0][1] == Catch::Approx(r).margin(1e-15));
    CHECK(had.matrix[1][0] == Catch::Approx(r).margin(1e-15));
    CHECK(had.matrix[1][1] == Catch::Approx(-r).margin(1e-15));

    const CoinOperator zero = make_coin(0.0);
    CHECK(zero.matrix[0][0] == 1.0);
    CHECK(zero.matrix[0][1] == 0.0);
    CHECK(zero.matrix[1][1] == -1.0);

    const CoinOperator right = make_coin(pi / 2);
    CHECK(std::abs(right.matrix[0][0]) < 1e-15);
    CHECK(right.matrix[0][1] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("coin is unitary and involutory across random angles") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const CoinOperator c = make_coin(angle(rng));
        const auto& m = c.matrix;
        // C * C should be the identity
        const double d00 = m[0][0] * m[0][0] + m[0][1] * m[1][0];
        const double d01 = m[0][0] * m[0][1] + m[0][1] * m[1][1];
        const double d10 = m[1][0] * m[0][0] + m[1][1] * m[1][0];
        const double d11 = m[1][0] * m[0][1] + m[1][1] * m[1][1];
        REQUIRE(std::abs(d00 - 1.0) < 1e-15);
        REQUIRE(std::abs(d01) < 1e-15);
        REQUIRE(std::abs(d10) < 1e-15);
        REQUIRE(std::abs(d11 - 1.0) < 1e-15);
    }
}

TEST_CASE("coin angle must be finite") {
    CHECK_THROWS_AS(make_coin(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_coin(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}

TEST_CASE("defect phase") {
    SECTION("phi = 0 gives omega = 1 exactly") {
        const DefectConfig d = make_defect(3, 0.0);
        CHECK(d.omega.real() == 1.0);
        CHECK(d.omega.imag() == 0.0);
        CHECK(d.m == 3);
    }
    SECTION("phi = 1/2 gives omega = -1") {
        const DefectConfig d = make_defect(0, 0.5);
        CHECK(d.omega.real() == Catch::Approx(-1.0).margin(1e-15));
        CHECK(std::abs(d.omega.imag()) < 1e-15);
    }
    SECTION("omega stays on the unit circle") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> phase(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            double phi = phase(rng);
            if (phi >= 1.0) phi = 0.0;
            CHECK(std::abs(std::abs(make_defect(0, phi).omega) - 1.0) < 1e-15);
        }
    }
    SECTION("strength outside [0, 1) is rejected") {
        CHECK_THROWS_AS(make_defect(0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_defect(0, -0.25), std::invalid_argument);
        CHECK_THROWS_AS(make_defect(0, std::numeric_limits<double>::quiet_NaN()),
                        std::invalid_argument);
    }
}

TEST_CASE("initial state placement and coin components") {
    const InitialState ini{pi / 4, pi / 2, 5};
    const WalkerState s = make_initial_state(ini, 10);

    CHECK(s.lo == 5 - 12);
    CHECK(s.hi() == 5 + 12);
    CHECK(s.t == 0);

    const Complex a = s.alpha_at(5);
    const Complex b = s.beta_at(5);
    // cos(pi/4) e^{i pi/2} is (almost) purely imaginary
    CHECK(std::abs(a.real()) < 1e-15);
    CHECK(a.imag() == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(b.imag() == 0.0);
    CHECK(b.real() == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(norm_squared(s) == Catch::Approx(1.0).margin(1e-15));

    // every other site is empty
    for (int p = s.lo; p <= s.hi(); ++p) {
        if (p == 5) continue;
        REQUIRE(s.alpha_at(p) == Complex{});
        REQUIRE(s.beta_at(p) == Complex{});
    }
}

TEST_CASE("initial state edge cases") {
    SECTION("varphi = 0 puts everything in component 0") {
        const WalkerState s = make_initial_state({0.0, 0.0, 0}, 1);
        CHECK(s.alpha_at(0) == Complex{1.0, 0.0});
        CHECK(s.beta_at(0) == Complex{});
    }
    SECTION("varphi = pi/2 puts everything in component 1") {
        const WalkerState s = make_initial_state({pi / 2, 0.0, 0}, 1);
        CHECK(std::abs(s.alpha_at(0)) < 1e-15);
        CHECK(s.beta_at(0).real() == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("negative planned steps rejected") {
        CHECK_THROWS_AS(make_initial_state({}, -1), std::invalid_argument);
    }
}

TEST_CASE("window accessors") {
    WalkerState s = make_blank_state(-3, 7);
    CHECK(s.size() == 7);
    CHECK(s.hi() == 3);
    CHECK(s.contains(-3));
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(4));
    CHECK(s.index_of(0) == 3);
    CHECK(s.alpha_at(100) == Complex{});  // out of window reads as zero
    CHECK(probability_at(s, 0) == 0.0);
    CHECK_THROWS_AS(make_blank_state(0, 0), std::invalid_argument);
}

TEST_CASE("inner product") {
    const WalkerState s = make_initial_state({pi / 4, pi / 2, 0}, 2);
    const Complex self = inner_product(s, s);
    CHECK(self.real() == Catch::Approx(1.0).margin(1e-15));
    CHECK(std::abs(self.imag()) < 1e-15);

    WalkerState other = make_blank_state(-1, 3);
    CHECK_THROWS_AS(inner_product(s, other), std::invalid_argument);
}
