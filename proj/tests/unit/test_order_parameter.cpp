#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "panicsim/cross_section.hpp"
#include "panicsim/errors.hpp"
#include "panicsim/order_parameter.hpp"

using namespace panicsim;

namespace {

OrderParamCoeffs plain(double a, double b = 0.01, double noise = 0.0) {
    return {a, b, noise, DriftForm::Plain};
}

}  // namespace

TEST_CASE("control coefficient") {
    CHECK(control_coefficient(0.2, 0.4) == doctest::Approx(0.2));
    CHECK(control_coefficient(0.8, 0.4) == doctest::Approx(-0.4));
    CHECK(control_coefficient(0.4, 0.4) == 0.0);
}

TEST_CASE("drift forms") {
    SUBCASE("zero is a fixed point of both forms") {
        for (auto form : {DriftForm::Plain, DriftForm::Halved}) {
            CHECK(drift(0.0, {-0.4, 0.01, 0.1, form}) == 0.0);
            CHECK(drift(0.0, {3.0, 2.0, 0.1, form}) == 0.0);
        }
    }
    SUBCASE("plain form at s = 1") {
        CHECK(drift(1.0, plain(-0.4)) == doctest::Approx(0.39).epsilon(1e-14));
    }
    SUBCASE("halved form at s = 2") {
        // -(a/2) s - (b/4) s^3 with a = -0.4, b = 0.01
        CHECK(drift(2.0, {-0.4, 0.01, 0.0, DriftForm::Halved}) == doctest::Approx(0.4 - 0.02).epsilon(1e-14));
    }
    SUBCASE("ordered stationary points at +-sqrt(-a/b)") {
        const double root = std::sqrt(40.0);
        CHECK(root == doctest::Approx(6.3245553).epsilon(1e-7));
        CHECK(std::abs(drift(root, plain(-0.4))) < 1e-12);
        CHECK(std::abs(drift(-root, plain(-0.4))) < 1e-12);
        // Sign change across the root confirms a genuine zero crossing.
        CHECK(drift(root - 0.01, plain(-0.4)) > 0.0);
        CHECK(drift(root + 0.01, plain(-0.4)) < 0.0);
    }
    SUBCASE("drift is odd") {
        for (double s = -12.0; s <= 12.0; s += 0.37) {
            for (auto form : {DriftForm::Plain, DriftForm::Halved}) {
                const OrderParamCoeffs c{-0.3, 0.02, 0.1, form};
                CHECK(drift(-s, c) == -drift(s, c));
            }
        }
    }
}

TEST_CASE("potential") {
    for (auto form : {DriftForm::Plain, DriftForm::Halved}) {
        const OrderParamCoeffs c{-0.4, 0.01, 0.1, form};
        CHECK(potential(0.0, c) == 0.0);
        for (double m = 0.0; m <= 10.0; m += 0.25) CHECK(potential(m, c) == potential(-m, c));
        const double slope = oracle::central_difference([&](double m) { return potential(m, c); }, 1.0);
        CHECK(std::abs(-slope - drift(1.0, c)) < 1e-6);
    }
}

TEST_CASE("state maps latent value to |tanh|") {
    for (double s : {-60.0, -3.0, -0.5, 0.0, 0.2, 1.1, 7.0}) {
        const auto st = OrderParamState::from_latent(s);
        CHECK(st.rho == std::abs(std::tanh(s)));
        CHECK(st.rho >= 0.0);
        CHECK(st.rho <= 1.0);
        CHECK(OrderParamState::from_latent(-s).rho == st.rho);
    }
    CHECK(OrderParamState::from_latent(0.5).rho < 1.0);
}

TEST_CASE("noise-free step at the disordered fixed point stays put") {
    OrderParamState s;
    for (int i = 0; i < 1000; ++i) s = step_order_parameter(s, plain(-0.4), 0.7);
    CHECK(s.s_hat == 0.0);
    CHECK(s.rho == 0.0);
}

TEST_CASE("Euler-Maruyama increment") {
    const auto s = step_order_parameter(OrderParamState::from_latent(1.0), {0.2, 0.01, 0.1, DriftForm::Plain}, 0.5);
    CHECK(s.s_hat == doctest::Approx(1.0 - 0.2 - 0.01 + 0.05).epsilon(1e-14));
    CHECK(s.rho == std::abs(std::tanh(s.s_hat)));
    CHECK_FALSE(s.clamped);
}

TEST_CASE("deterministic iteration converges to the ordered root, matching a fine-step oracle") {
    const auto c = plain(-0.4);
    OrderParamState s = OrderParamState::from_latent(0.1);
    for (int i = 0; i < 200; ++i) s = step_order_parameter(s, c, 0.0);
    const double root = std::sqrt(40.0);
    CHECK(s.s_hat == doctest::Approx(root).epsilon(1e-10));
    const double ode = oracle::rk4([&](double x) { return drift(x, c); }, 0.1, 200.0, 1e-3);
    CHECK(ode == doctest::Approx(root).epsilon(1e-8));
    CHECK(s.s_hat == doctest::Approx(ode).epsilon(1e-8));
}

TEST_CASE("overflow guard clamps at 50 and flags") {
    const auto s = step_order_parameter(OrderParamState::from_latent(49.0), plain(-5.0, 0.0001), 0.0);
    CHECK(s.clamped);
    CHECK(s.s_hat == 50.0);
    CHECK(s.rho == std::abs(std::tanh(50.0)));
    const auto t = step_order_parameter(OrderParamState::from_latent(-49.0), plain(-5.0, 0.0001), 0.0);
    CHECK(t.s_hat == -50.0);
}

TEST_CASE("coefficient validation") {
    CHECK_THROWS_AS((OrderParamCoeffs{0.1, 0.0, 0.1, DriftForm::Plain}.validate()), DomainError);
    CHECK_THROWS_AS((OrderParamCoeffs{0.1, 0.01, -0.1, DriftForm::Plain}.validate()), DomainError);
    CHECK_NOTHROW(plain(-0.4, 0.01, 0.1).validate());
}

TEST_CASE("symmetry breaking: bimodal latent histogram when a < 0, unimodal when a > 0") {
    auto long_run = [](double a, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        OrderParamState s;
        std::vector<double> xs;
        // Noise large enough for the walker to cross the barrier a^2/4b many times.
        const OrderParamCoeffs c{a, 0.01, 0.5, DriftForm::Plain};
        for (int i = 0; i < 60000; ++i) {
            s = step_order_parameter(s, c, n(rng));
            if (i > 1000) xs.push_back(s.s_hat);
        }
        return xs;
    };
    const auto ordered = long_run(-0.1, 1);
    const auto disordered = long_run(0.3, 2);
    CHECK(*bimodality_coefficient(ordered) > 5.0 / 9.0);
    CHECK(*bimodality_coefficient(disordered) < 5.0 / 9.0);

    // Modes near +-sqrt(-a/b) = +-3.16.
    const auto h = histogram(ordered, 40, HistRange{-8.0, 8.0});
    std::size_t left = 0, right = 0;
    for (std::size_t k = 0; k < 20; ++k) {
        if (h.counts[k] > h.counts[left]) left = k;
        if (h.counts[20 + k] > h.counts[right]) right = 20 + k;
    }
    const double left_mode = 0.5 * (h.edges[left] + h.edges[left + 1]);
    const double right_mode = 0.5 * (h.edges[right] + h.edges[right + 1]);
    CHECK(left_mode == doctest::Approx(-std::sqrt(10.0)).epsilon(0.3));
    CHECK(right_mode == doctest::Approx(std::sqrt(10.0)).epsilon(0.3));
}

TEST_CASE("sign symmetry over an ensemble started at zero") {
    const auto c = OrderParamCoeffs{-0.4, 0.01, 0.1, DriftForm::Plain};
    std::vector<double> finals;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        OrderParamState s;
        for (int i = 0; i < 60; ++i) s = step_order_parameter(s, c, n(rng));
        finals.push_back(s.s_hat);
    }
    const auto m = oracle::brute_moments(finals);
    CHECK(std::abs(m.mean) < 3.0 * std::sqrt(m.variance / static_cast<double>(finals.size())));
}
