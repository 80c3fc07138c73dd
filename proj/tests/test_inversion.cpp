#include "oracle.hpp"

#include "wiener/error.hpp"
#include "wiener/inversion.hpp"

#include <doctest.h>

#include <cstdlib>
#include <numbers>
#include <random>

using namespace wiener;
using oracle::Real;

namespace {

// f = 1 + small random perturbation, so that |f| >= 1/2 on the circle.
L1ZSeq random_invertible(std::mt19937_64& rng, int terms, Index spread)
{
    std::uniform_int_distribution<Index> idx(-spread, spread);
    std::normal_distribution<double> c(0.0, 1.0);
    std::map<Index, complex> m;
    while (static_cast<int>(m.size()) < terms) {
        Index n = idx(rng);
        if (n != 0) {
            m[n] = complex(c(rng), c(rng));
        }
    }
    double mass = 0.0;
    for (auto& [n, v] : m) {
        mass += std::abs(v);
    }
    std::vector<Term> t{{0, 1.0}};
    for (auto [n, v] : m) {
        t.push_back({n, v * (0.5 / mass)});
    }
    return L1ZSeq::from_terms(std::move(t));
}

WienerOptions small_caps()
{
    WienerOptions o;
    o.max_grid = 1 << 14;
    return o;
}

} // namespace

TEST_SUITE("inversion") {

TEST_CASE("neumann_invert examples") {
    InversionResult id = neumann_invert(delta(0), 1e-12);
    CHECK(id.inverse == delta(0));
    CHECK(id.cert.residual.value() == 0.0);

    L1ZSeq x = delta(0) - delta(1, 0.5);
    InversionResult g = neumann_invert(x, 1e-10);
    for (int n = 0; n < 20; ++n) {
        CHECK(std::abs(g.inverse.coeff(n) - std::ldexp(1.0, -n)) <= 1e-12);
    }
    CHECK(norm_upper(g.inverse).value() >= 2.0);
    CHECK(norm_upper(g.inverse).value() <= 2.0 + 1e-9);
    CHECK(g.cert.residual.value() <= 1e-10);
    CHECK(oracle::residual(x, g.cert.witness.finite_part()) <= Real(g.cert.residual.value()));

    InversionResult half = neumann_invert(delta(0, 0.5), 1e-12);
    CHECK(std::abs(half.inverse.coeff(0) - 2.0) <= 1e-12);

    try {
        (void)neumann_invert(delta(0, 2.0), 1e-9);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
        CHECK(std::string(e.what()).find("Neumann hypothesis fails") != std::string::npos);
    }
}

TEST_CASE("perturb_invert_bound examples") {
    CHECK(perturb_invert_bound(CertUpper(1), CertUpper(0), 0.5).value() == doctest::Approx(2.0).epsilon(1e-14));
    double b = perturb_invert_bound(CertUpper(1), CertUpper(0.5), 0.5).value();
    CHECK(b >= 2.0);
    CHECK(b <= 2.0 + 1e-14);
    // scalar check: a = 1, u = 0.5, |(a - u)^-1| = 2
    CHECK(1.0 / (1.0 - 0.5) <= b);
    double c = perturb_invert_bound(CertUpper(4), CertUpper(0.1), 0.4).value();
    CHECK(c >= 4.0 / 0.6);
    CHECK(c == doctest::Approx(6.666666666666667).epsilon(1e-14));
    // scalar a = 0.25 (|a^-1| = 4), u = 0.1: |(0.15)^-1| = 6.67 <= 4/0.6
    CHECK(1.0 / 0.15 <= c * (1 + 1e-12));
    CHECK_THROWS_AS((void)perturb_invert_bound(CertUpper(4), CertUpper(0.2), 0.4), Error);
    CHECK_THROWS_AS((void)perturb_invert_bound(CertUpper(1), CertUpper(0), 1.0), Error);
}

TEST_CASE("newton_refine examples") {
    InversionResult id = newton_refine(delta(0), delta(0), 1e-12);
    CHECK(id.cert.residual.value() == 0.0);

    InversionResult s = newton_refine(delta(0, 2.0), delta(0, 0.4), 0.05);
    REQUIRE(s.residual_history.size() == 2);
    CHECK(s.residual_history[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s.residual_history[1] == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(s.inverse.coeff(0).real() == doctest::Approx(0.48).epsilon(1e-15));

    L1ZSeq f = delta(0) + delta(1, 0.5);
    L1ZSeq x0 = delta(0) - delta(1, 0.5) + delta(2, 0.25);
    const double target = 1e-12;
    InversionResult r = newton_refine(f, x0, target);
    CHECK(r.cert.residual.value() <= target);
    CHECK(r.residual_history[0] == doctest::Approx(0.125).epsilon(1e-12));
    const double budget = target / (4.0 * 1.5);
    for (std::size_t k = 0; k + 1 < r.residual_history.size(); ++k) {
        double rk = r.residual_history[k];
        CHECK(r.residual_history[k + 1] <= rk * rk * (1 + 1e-9) + 1.5 * budget + 1e-15);
    }
    CHECK(oracle::residual(f, r.inverse) <= Real(r.cert.residual.value()));

    CHECK_THROWS_AS((void)newton_refine(f, delta(0, 3.0), 1e-9), Error);
    try {
        (void)newton_refine(f, x0, 1e-300, 2);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("did not converge") != std::string::npos);
    }
}

TEST_CASE("circle_min_modulus_certify examples") {
    // |delta_1| = 1 everywhere, but the grid slack is L*pi/N with L = 1.
    CHECK_FALSE(circle_min_modulus_certify(delta(1), 0.9, 16).certified);
    MinModulusReport a = circle_min_modulus_certify(delta(1), 0.9, 32);
    CHECK(a.certified);
    CHECK(a.min_lower >= 1.0 - std::numbers::pi / 32 - 1e-12);

    MinModulusReport b = circle_min_modulus_certify(delta(0) + delta(1), 0.01, 1 << 14);
    CHECK_FALSE(b.certified);
    CHECK(std::abs(b.worst_lambda - complex(-1.0, 0.0)) < 1e-3);

    MinModulusReport c = circle_min_modulus_certify(delta(0) + delta(1, 0.5), 0.4, 64);
    CHECK(c.certified);
    CHECK(c.min_lower <= 0.5);

    CHECK_THROWS_AS((void)circle_min_modulus_certify(delta(0), 0.5, 4), Error);
}

TEST_CASE("monotone certification") {
    std::mt19937_64 rng(31);
    int certified = 0;
    for (int i = 0; i < 50; ++i) {
        L1ZSeq f = random_invertible(rng, 6, 20);
        for (std::size_t N = 16; N <= 1024; N *= 2) {
            if (circle_min_modulus_certify(f, 0.45, N).certified) {
                ++certified;
                CHECK(circle_min_modulus_certify(f, 0.45, 2 * N).certified);
                break;
            }
        }
    }
    CHECK(certified > 25);
}

TEST_CASE("grid certification soundness") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 3; ++i) {
        L1ZSeq f = random_invertible(rng, 5, 12);
        MinModulusReport rep = certify_min_modulus(f, 0.45, small_caps());
        REQUIRE(rep.certified);
        double dense_min = 1e300;
        const int samples = 1000000;
        for (int k = 0; k < samples; ++k) {
            double theta = 2.0 * std::numbers::pi * k / samples;
            complex v{};
            for (const auto& t : f.terms()) {
                v += t.c * std::polar(1.0, static_cast<double>(t.n) * theta);
            }
            dense_min = std::min(dense_min, std::abs(v));
        }
        CHECK(dense_min >= 0.45 - 1e-9);
    }
}

TEST_CASE("wiener_invert examples") {
    WienerResult two = wiener_invert(delta(0, 2.0), 1.0, 1e-12);
    CHECK(two.inverse == delta(0, 0.5));
    CHECK(two.cert.residual.value() == 0.0);

    WienerResult u = wiener_invert(delta(1), 0.5, 1e-12);
    CHECK(std::abs(u.inverse.coeff(-1) - 1.0) <= 1e-12);
    CHECK(u.cert.residual.value() <= 1e-12);

    L1ZSeq f = delta(0) + delta(1, 0.5);
    WienerResult r = wiener_invert(f, 0.4, 1e-9);
    for (int n = 0; n <= 30; ++n) {
        CHECK(std::abs(r.inverse.coeff(n) - std::pow(-0.5, n)) <= 1e-9);
    }
    CHECK(r.cert.residual.value() <= 1e-9);
    CHECK(r.cert.params.target == 1e-9);
    CHECK(r.cert.params.grid >= 64);
}

TEST_CASE("certificates recompute and are sound") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
        L1ZSeq f = random_invertible(rng, 8, 30);
        WienerResult r = wiener_invert(f, 0.4, 1e-10, small_caps());
        double again = recompute_residual(f, r.cert.witness).value();
        CHECK(again == doctest::Approx(r.cert.residual.value()).epsilon(1e-12));
        CHECK(oracle::residual(f, r.cert.witness) <= Real(r.cert.residual.value()));
        CHECK(norm_upper(sub(delta(0), convolve(f, r.inverse))).value() <= r.cert.residual.value());
        CHECK(inverse_distance_bound(r.cert).value() <= 1e-9);
    }
}

TEST_CASE("hypothesis failure and caps") {
    WienerOptions o;
    o.max_grid = 1 << 12;
    try {
        (void)wiener_invert(delta(0) + delta(1), 0.1, 1e-9, o);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
    }
    CHECK_THROWS_AS((void)wiener_invert(delta(0), 0.0, 1e-9), Error);

    ::setenv("WIENER_MAX_GRID", "4096", 1);
    CHECK(WienerOptions::from_environment().max_grid == 4096);
    ::unsetenv("WIENER_MAX_GRID");
    CHECK(WienerOptions::from_environment().max_grid == (std::size_t{1} << 20));
}

TEST_CASE("quotient_norm_upper examples") {
    L1ZSeq g = delta(0) + delta(1, 0.5);
    CHECK(quotient_norm_upper(g, g, delta(0)).value() == 0.0);
    CHECK(quotient_norm_upper(delta(0), delta(0, 2.0), delta(0, 0.5)).value() == 0.0);
    L1ZSeq k = delta(0) - delta(1, 0.5) + delta(2, 0.25) - delta(3, 0.125);
    double q = quotient_norm_upper(delta(0), g, k).value();
    CHECK(q <= 0.0625);
    CHECK(q >= 0.0625);
}

}
