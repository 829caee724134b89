#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qwalk/localization.hpp"

using namespace qwalk;

namespace {

// brute-force overlap: embed the profile in the evolved state's window and
// take the inner product directly
Complex overlap_by_inner_product(const BoundState& bs, const WalkerState& evolved) {
    WalkerState embedded = make_blank_state(evolved.lo, evolved.size());
    for (int k = -bs.window; k <= bs.window; ++k) {
        const int n = bs.m + k;
        if (!embedded.contains(n)) continue;
        embedded.alpha[static_cast<std::size_t>(embedded.index_of(n))] = bs.alpha_at(k);
        embedded.beta[static_cast<std::size_t>(embedded.index_of(n))] = bs.beta_at(k);
    }
    return inner_product(embedded, evolved);
}

// asymptotic probability with the global phase factor lambda^N kept
// explicitly, to show it never mattered
double prediction_with_phase(const InitialState& ini, const CoinOperator& coin,
                             const DefectConfig& defect,
                             const std::vector<BoundState>& states, int l, int n) {
    const int parity = ((ini.start - defect.m) % 2 + 2) % 2;
    double total = 0.0;
    for (const BoundState& bs : states) {
        Complex phase{1.0, 0.0};
        for (int i = 0; i < n; ++i) phase *= bs.lambda;
        const Complex c = (parity == 0) ? overlap_even(ini, bs)
                                        : overlap_odd(ini, coin, defect, bs);
        const int k = l - bs.m;
        total += (std::norm(phase * bs.alpha_or_zero(k)) +
                  std::norm(phase * bs.beta_or_zero(k))) *
                 std::norm(phase * c);
    }
    return total;
}

}  // namespace

TEST_CASE("even-distance overlap reduces to profile amplitudes") {
    const auto states = solve_bound_states(pi / 6, 0.5, 0);
    REQUIRE(states.size() == 2);
    const BoundState& bs = states[0];

    SECTION("component-0 release picks conj(alpha_bar)") {
        const InitialState ini{0.0, 0.7, 0};
        const Complex expect =
            std::conj(bs.alpha_at(0)) * std::polar(1.0, 0.7);
        CHECK(std::abs(overlap_even(ini, bs) - expect) < 1e-15);
    }
    SECTION("component-1 release picks conj(beta_bar)") {
        const InitialState ini{pi / 2, 0.0, 0};
        const Complex expect = std::conj(bs.beta_at(0)) *
                               Complex{std::sin(pi / 2), 0.0};
        CHECK(std::abs(overlap_even(ini, bs) - expect) < 1e-14);
    }
    SECTION("release far outside the window overlaps nothing") {
        const InitialState ini{pi / 4, pi / 2, bs.window + 2};
        CHECK(overlap_even(ini, bs) == Complex{});
    }
    SECTION("the canonical release couples to exactly one localized state") {
        // the defect-site amplitudes of one state are orthogonal to the
        // (i, 1)/sqrt(2) coin state; the other carries all the weight
        const InitialState ini{pi / 4, pi / 2, 0};
        const double w0 = std::norm(overlap_even(ini, states[0]));
        const double w1 = std::norm(overlap_even(ini, states[1]));
        CHECK(std::min(w0, w1) < 1e-24);
        CHECK(std::max(w0, w1) > 0.1);
    }
}

TEST_CASE("one-step dressing") {
    SECTION("matches a literal evolution step away from the defect") {
        const InitialState ini{pi / 4, pi / 2, 0};
        const CoinOperator coin = make_coin(pi / 6);
        const DefectConfig defect = make_defect(3, 0.5);
        const DressedPair d = dress_one_step(ini, coin, defect);
        const WalkerState one = step(make_initial_state(ini, 2), coin, defect);
        CHECK(std::abs(d.at_left - one.alpha_at(-1)) < 1e-15);
        CHECK(std::abs(d.at_right - one.beta_at(1)) < 1e-15);
    }
    SECTION("matches a literal evolution step on the defect") {
        const InitialState ini{pi / 4, pi / 2, 0};
        const CoinOperator coin = make_coin(pi / 6);
        const DefectConfig defect = make_defect(0, 0.5);  // release on the defect
        const DressedPair d = dress_one_step(ini, coin, defect);
        const WalkerState one = step(make_initial_state(ini, 2), coin, defect);
        CHECK(std::abs(d.at_left - one.alpha_at(-1)) < 1e-15);
        CHECK(std::abs(d.at_right - one.beta_at(1)) < 1e-15);
    }
    SECTION("frozen values at theta = pi/6, canonical coin state") {
        const DressedPair d = dress_one_step({pi / 4, pi / 2, 0}, make_coin(pi / 6),
                                             make_defect(5, 0.5));
        CHECK(d.at_left.real() == Catch::Approx(0.35355339059327373).margin(1e-14));
        CHECK(d.at_left.imag() == Catch::Approx(0.6123724356957946).margin(1e-14));
        CHECK(d.at_right.real() == Catch::Approx(-0.6123724356957945).margin(1e-14));
        CHECK(d.at_right.imag() == Catch::Approx(0.35355339059327373).margin(1e-14));
    }
}

TEST_CASE("odd-distance overlap equals the brute-force inner product") {
    const CoinOperator coin = make_coin(pi / 8);
    const DefectConfig defect = make_defect(3, 0.5);
    const InitialState ini{pi / 4, pi / 2, 0};  // distance 3: odd
    const auto states = solve_bound_states(pi / 8, 0.5, 3);
    REQUIRE(states.size() == 2);

    const WalkerState one = step(make_initial_state(ini, 2 + states[0].window * 2),
                                 coin, defect);
    for (const BoundState& bs : states) {
        const Complex direct = overlap_odd(ini, coin, defect, bs);
        const Complex brute = overlap_by_inner_product(bs, one);
        REQUIRE(std::abs(direct - brute) < 1e-12);
    }
}

TEST_CASE("asymptotic probability basics") {
    const CoinOperator coin = make_coin(pi / 6);
    const DefectConfig defect = make_defect(2, 0.5);
    const InitialState ini{pi / 4, pi / 2, 0};

    SECTION("no states, no probability") {
        CHECK(asymptotic_probability(ini, coin, defect, {}, 2) == 0.0);
    }
    SECTION("frozen reference values") {
        CHECK(asymptotic_probability(ini, pi / 6, 0.5, 2, 2) ==
              Catch::Approx(0.099958350687).margin(1e-9));
        CHECK(asymptotic_probability(ini, pi / 8, 0.5, 2, 2) ==
              Catch::Approx(0.078236565847).margin(1e-9));
        CHECK(asymptotic_probability(ini, pi / 4, 0.5, 2, 2) ==
              Catch::Approx(0.0768).margin(1e-9));
        // odd start-to-defect distances
        CHECK(asymptotic_probability(ini, pi / 10, 0.5, 3, 3) ==
              Catch::Approx(0.037108878484).margin(1e-9));
        CHECK(asymptotic_probability(ini, pi / 8, 0.5, 3, 3) ==
              Catch::Approx(0.046395635511).margin(1e-9));
        CHECK(asymptotic_probability(ini, pi / 6, 0.5, 3, 3) ==
              Catch::Approx(0.042839293152).margin(1e-9));
        // release on the defect itself
        CHECK(asymptotic_probability(ini, pi / 6, 0.5, 0, 0) ==
              Catch::Approx(16.0 / 49.0).margin(1e-9));
    }
    SECTION("global phase factor drops out") {
        const auto states = solve_bound_states(pi / 6, 0.5, 2);
        const double base = asymptotic_probability(ini, coin, defect, states, 2);
        const double with_1 = prediction_with_phase(ini, coin, defect, states, 2, 1);
        const double with_1000 =
            prediction_with_phase(ini, coin, defect, states, 2, 1000);
        CHECK(std::abs(with_1 - base) < 1e-12);
        CHECK(std::abs(with_1000 - base) < 1e-12);
    }
    SECTION("translation covariance") {
        const int d = 7;
        const InitialState shifted{pi / 4, pi / 2, d};
        const double a = asymptotic_probability(ini, pi / 6, 0.5, 2, 4);
        const double b = asymptotic_probability(shifted, pi / 6, 0.5, 2 + d, 4 + d);
        CHECK(a == Catch::Approx(b).margin(1e-15));
    }
}

TEST_CASE("late-time simulation confirms the predictions") {
    const InitialState ini{pi / 4, pi / 2, 0};

    SECTION("even distance: defect at 2, theta = pi/6") {
        const CoinOperator coin = make_coin(pi / 6);
        const DefectConfig defect = make_defect(2, 0.5);
        const auto states = solve_bound_states(pi / 6, 0.5, 2);
        const WalkerState initial = make_initial_state(ini, 1000);

        for (const int l : {2, 0, 4}) {
            const double pred = asymptotic_probability(ini, coin, defect, states, l);
            const double sim =
                average_site_probability(initial, coin, defect, l, 900, 1000, 0);
            REQUIRE(sim > 0.0);
            // the defect site must match within 10%, neighbors within 15%
            REQUIRE(std::abs(pred - sim) / sim < (l == 2 ? 0.10 : 0.15));
        }
    }
    SECTION("odd distance: defect at 3, theta = pi/8") {
        const CoinOperator coin = make_coin(pi / 8);
        const DefectConfig defect = make_defect(3, 0.5);
        const auto states = solve_bound_states(pi / 8, 0.5, 3);
        const WalkerState initial = make_initial_state(ini, 1001);
        const double pred = asymptotic_probability(ini, coin, defect, states, 3);
        const double sim =
            average_site_probability(initial, coin, defect, 3, 901, 1001, 1);
        REQUIRE(sim > 0.0);
        REQUIRE(std::abs(pred - sim) / sim < 0.10);
    }
}

TEST_CASE("coin-angle scan") {
    const InitialState ini{pi / 4, pi / 2, 0};
    const std::vector<double> thetas{pi / 8, pi / 6, pi / 4};
    const auto scan = theta_scan(thetas, 0.5, 2, ini, 2);
    REQUIRE(scan.size() == 3);
    CHECK(scan.at(pi / 6) > scan.at(pi / 8));
    CHECK(scan.at(pi / 6) > scan.at(pi / 4));

    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(theta_scan(bad, 0.5, 2, ini, 2), std::invalid_argument);
}

TEST_CASE("defect-position scan decays with distance") {
    const InitialState ini{pi / 4, pi / 2, 0};
    std::vector<int> positions;
    for (int m = 0; m <= 10; ++m) positions.push_back(m);
    const auto scan = defect_position_scan(positions, pi / 6, 0.5, ini);
    REQUIRE(scan.size() == 11);
    for (int m = 0; m <= 10; ++m) REQUIRE(scan.at(m) > 0.0);
    for (int m = 1; m <= 10; ++m) REQUIRE(scan.at(m) < scan.at(m - 1));
    CHECK(scan.at(0) == Catch::Approx(16.0 / 49.0).margin(1e-9));
    CHECK(scan.at(1) == Catch::Approx(0.233236151604).margin(1e-9));
    CHECK(scan.at(2) == Catch::Approx(0.099958350687).margin(1e-9));
    CHECK(scan.at(10) == Catch::Approx(0.00011376).margin(1e-7));
}

TEST_CASE("localization report") {
    const InitialState ini{pi / 4, pi / 2, 0};
    const std::vector<int> sites{0, 2, 3, 4};
    const LocalizationReport rep =
        build_localization_report(pi / 6, 0.5, 2, ini, sites, 400, 500);

    CHECK(rep.theta == pi / 6);
    CHECK(rep.m == 2);
    CHECK(rep.t_lo == 400);
    CHECK(rep.t_hi == 500);
    REQUIRE(rep.predicted.size() == 4);
    REQUIRE(rep.simulated.size() == 4);

    // wrong-parity site carries nothing in either column
    CHECK(rep.predicted.at(3) == 0.0);
    CHECK(rep.simulated.at(3) == 0.0);
    // defect site agrees across columns
    const double pred = rep.predicted.at(2);
    const double sim = rep.simulated.at(2);
    CHECK(sim > 0.0);
    CHECK(std::abs(pred - sim) / sim < 0.10);
    CHECK(rep.truncated.empty());
}

TEST_CASE("localization report flags sites beyond the stored profiles") {
    const InitialState ini{pi / 4, pi / 2, 0};
    const std::vector<int> sites{2, 2 + 500};
    const LocalizationReport rep =
        build_localization_report(pi / 6, 0.5, 2, ini, sites, 10, 20);
    REQUIRE(rep.truncated.size() == 1);
    CHECK(rep.truncated[0] == 502);
    CHECK(rep.predicted.at(502) == 0.0);
}

TEST_CASE("report input validation") {
    const InitialState ini{pi / 4, pi / 2, 0};
    const std::vector<int> sites{2};
    CHECK_THROWS_AS(build_localization_report(pi / 6, 0.5, 2, ini, sites, 20, 10),
                    std::invalid_argument);
}
