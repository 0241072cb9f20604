#include <doctest.h>

#include <cmath>

#include "mtlab/dimension.hpp"

using namespace mtlab;

TEST_CASE("dimension constants for N = 2, 3, 4") {
    const Dimension d2 = make_dimension(2);
    CHECK(d2.omega == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
    CHECK(d2.beta_n == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
    CHECK(d2.c_n == doctest::Approx(M_PI).epsilon(1e-15));

    const Dimension d3 = make_dimension(3);
    CHECK(d3.omega == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
    CHECK(d3.beta_n == doctest::Approx(6.0 * std::sqrt(M_PI)).epsilon(1e-14));

    const Dimension d4 = make_dimension(4);
    CHECK(d4.omega == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));

    CHECK_THROWS_AS(make_dimension(1), std::invalid_argument);
}

TEST_CASE("constants satisfy both defining formulas to 1e-14") {
    for (int n = 2; n <= 6; ++n) {
        const Dimension d = make_dimension(n);
        const double c_from_omega = std::pow(d.omega / n, 1.0 / (n - 1));
        const double c_from_beta = d.beta_n / std::pow(double(n), double(n) / (n - 1));
        CHECK(std::abs(c_from_omega - c_from_beta) / c_from_omega < 1e-14);
        CHECK(std::abs(d.beta_n - n * std::pow(d.omega, 1.0 / (n - 1))) / d.beta_n < 1e-14);
    }
}

TEST_CASE("phi_n values") {
    const Dimension d2 = make_dimension(2);
    const Dimension d3 = make_dimension(3);
    const Dimension d4 = make_dimension(4);

    CHECK(phi_n(0.0, d2) == 0.0);
    CHECK(phi_n(1.0, d3) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));

    // small-argument tail series; frozen from t^3/6 (1 + t/4 + t^2/20 + ...)
    const double t = 1e-8;
    const double expected = t * t * t / 6.0 * (1.0 + t / 4.0);
    CHECK(phi_n(t, d4) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("psi_n values") {
    const Dimension d2 = make_dimension(2);
    const Dimension d3 = make_dimension(3);
    CHECK(psi_n(0.0, d2) == 0.0);
    CHECK(psi_n(1.0, d2) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
    CHECK(psi_n(2.0, d3) == doctest::Approx(std::exp(2.0) - 5.0).epsilon(1e-14));
    CHECK(psi_n(1e-10, d2) >= 0.0);
}

TEST_CASE("phi_n_prime values") {
    const Dimension d2 = make_dimension(2);
    const Dimension d3 = make_dimension(3);
    CHECK(phi_n_prime(0.0, d2) == doctest::Approx(1.0));
    CHECK(phi_n_prime(1.0, d2) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(phi_n_prime(3.0, d3) == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("harmonic sums") {
    CHECK(harmonic_sum(make_dimension(2)) == doctest::Approx(1.0));
    CHECK(harmonic_sum(make_dimension(3)) == doctest::Approx(1.5));
    CHECK(harmonic_sum(make_dimension(4)) == doctest::Approx(11.0 / 6.0));
}

TEST_CASE("truncated exponential inequalities on a log sweep") {
    for (int n : {2, 3, 4, 5}) {
        const Dimension d = make_dimension(n);
        double lead_fact = factorial(n - 1);
        for (int i = 0; i < 1000; ++i) {
            const double t = std::pow(10.0, -8.0 + 10.7 * i / 999.0);  // up to ~5e2
            const double phi = phi_n(t, d);
            CHECK(phi >= std::pow(t, n - 1) / lead_fact * (1.0 - 1e-14));
            CHECK(t * phi_n_prime(t, d) >= phi * (1.0 - 1e-14));
        }
    }
}

TEST_CASE("phi_n_prime matches finite differences of phi_n") {
    for (int n : {2, 3, 4, 5}) {
        const Dimension d = make_dimension(n);
        for (int i = 0; i < 60; ++i) {
            const double t = std::pow(10.0, -4.0 + 5.7 * i / 59.0);
            const double h = 1e-6 * t;
            const double fd = (phi_n(t + h, d) - phi_n(t - h, d)) / (2.0 * h);
            CHECK(std::abs(phi_n_prime(t, d) - fd) <= 1e-6 * std::abs(fd));
        }
    }
}

TEST_CASE("psi equals phi minus the leading term at moderate t") {
    for (int n : {2, 3, 4}) {
        const Dimension d = make_dimension(n);
        for (double t : {0.7, 1.0, 2.5, 7.0, 20.0}) {
            double lead = 1.0;
            for (int k = 1; k <= n - 1; ++k) lead *= t / k;
            CHECK(psi_n(t, d) ==
                  doctest::Approx(phi_n(t, d) - lead).epsilon(1e-13));
        }
    }
}

TEST_CASE("overflow guard saturates with a flag instead of inf") {
    const Dimension d2 = make_dimension(2);
    bool sat = false;
    const double v = phi_n(900.0, d2, &sat);
    CHECK(sat);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(phi_n(kExpCap, d2)));
}
