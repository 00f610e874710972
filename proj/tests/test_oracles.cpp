#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tdgl/oracles.hpp"

using namespace tdgl;

namespace {

PhysParams disc_params(double alpha) {
    PhysParams p;
    p.alpha = alpha;
    p.beta = 1.0;
    p.charge = -1.0;
    return p;
}

} // namespace

TEST_CASE("disc oracle: worked values at n=1, B0=2, alpha=0") {
    DiscOracle o(1, 2.0, disc_params(0.0));

    CHECK(o.r_balance() == doctest::Approx(1.0).epsilon(1e-14));

    // velocity changes sign at r_B, potential peaks there
    CHECK(o.velocity(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(o.force_sum(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(o.neg_q_stat(1.0) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(o.velocity(2.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(o.force_sum(2.0) == doctest::Approx(-1.875).epsilon(1e-14));
    CHECK(o.neg_q_stat(2.0) == doctest::Approx(1.125).epsilon(1e-14));

    // inside r_B the force points away from the axis; value frozen from the
    // formula (1/mr)(n^2 hbar^2/r^2 - q^2 B0^2 r^2 / 4c^2) = 2 (4 - 1/4)
    CHECK(o.velocity(0.5) == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(o.force_sum(0.5) == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(o.force_sum(0.5) > 0.0);
    CHECK(o.force_sum(2.0) < 0.0);

    CHECK_THROWS_AS(o.velocity(0.0), std::invalid_argument);
    CHECK_THROWS_AS(o.force_sum(-1.0), std::invalid_argument);
}

TEST_CASE("disc oracle: force balance identity -grad Q_stat = -(F_L + F_c)") {
    DiscOracle o(1, 2.0, disc_params(0.0));
    // Richardson-extrapolated numerical derivative of -Q_stat vs the force sum
    auto d4 = [&](double r, double h) {
        return (o.neg_q_stat(r - 2 * h) - 8 * o.neg_q_stat(r - h) + 8 * o.neg_q_stat(r + h) -
                o.neg_q_stat(r + 2 * h)) /
               (12 * h);
    };
    const double h = 1e-3;
    for (int i = 0; i <= 400; ++i) {
        const double r = 0.25 + i * (4.0 - 0.25) / 400.0;
        const double d_negq = (16.0 * d4(r, 0.5 * h) - d4(r, h)) / 15.0;
        // -grad Q_stat = d(-Q_stat)/dr; identity: -grad Q_stat = -(F_L + F_c)
        const double scale = std::max(1.0, std::abs(o.force_sum(r)));
        CHECK(std::abs(d_negq - (-o.force_sum(r))) / scale < 1e-10);
    }
}

TEST_CASE("disc oracle: alpha shifts the potential only") {
    DiscOracle o0(1, 2.0, disc_params(0.0));
    DiscOracle o5(1, 2.0, disc_params(-5.0));
    CHECK(o5.neg_q_stat(2.0) == doctest::Approx(o0.neg_q_stat(2.0) - 5.0).epsilon(1e-14));
    CHECK(o5.force_sum(2.0) == doctest::Approx(o0.force_sum(2.0)).epsilon(1e-14));
    CHECK(o5.velocity(2.0) == doctest::Approx(o0.velocity(2.0)).epsilon(1e-14));
}

TEST_CASE("ring oracle: growth-rate spectrum") {
    PhysParams p = disc_params(-0.1);
    RingOracle o(1.0, 0.3, p);

    CHECK(o.lambda(0) == doctest::Approx(0.055).epsilon(1e-14));
    CHECK(o.lambda(1) == doctest::Approx(-0.145).epsilon(1e-14));
    CHECK(o.lambda(-1) == doctest::Approx(-0.745).epsilon(1e-14));
    CHECK(o.dominant_index() == 0);
    CHECK(o.single_mode());

    // dominant index maximizes lambda over the scanned window
    for (int n = -10; n <= 10; ++n) CHECK(o.lambda(0) >= o.lambda(n));
}

TEST_CASE("ring oracle: zero flux is symmetric") {
    RingOracle o(1.0, 0.0, disc_params(-0.1));
    CHECK(o.lambda(0) == doctest::Approx(0.1).epsilon(1e-14));
    for (int n = 1; n <= 5; ++n)
        CHECK(o.lambda(n) == doctest::Approx(o.lambda(-n)).epsilon(1e-14));
}

TEST_CASE("ring oracle: single-mode expected fields") {
    RingOracle o(1.0, 0.3, disc_params(-0.1));
    const auto f = o.expected_fields(1e-8);
    CHECK(f.q_dyn == doctest::Approx(0.055).epsilon(1e-14));
    CHECK(f.q_dep == doctest::Approx(-0.11).epsilon(1e-14));
    CHECK(f.pair_speed == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(f.q_stat_bound == doctest::Approx(1e-8).epsilon(1e-14));

    // alpha = -3 grows several harmonics: flagged, not guessed
    RingOracle multi(1.0, 0.3, disc_params(-3.0));
    CHECK_FALSE(multi.single_mode());
    CHECK_THROWS_AS(multi.expected_fields(1e-8), std::invalid_argument);
}
