#include "oracle.hpp"

#include "wiener/calculus.hpp"
#include "wiener/error.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace wiener;
using oracle::Real;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BanachCurve<L1ZSeq> constant_curve(const L1ZSeq& c)
{
    BanachCurve<L1ZSeq> curve;
    curve.value = [c](double) { return c; };
    curve.modulus = lipschitz_modulus(CertUpper(0));
    curve.second_derivative_bound = CertUpper(0);
    return curve;
}

BanachCurve<L1ZSeq> linear_curve()
{
    BanachCurve<L1ZSeq> curve;
    curve.value = [](double t) { return delta(0, t); };
    curve.modulus = lipschitz_modulus(CertUpper(1));
    curve.second_derivative_bound = CertUpper(0);
    return curve;
}

// z -> z^-1 delta0 on the unit circle.
PathIntegrand<L1ZSeq> inverse_integrand()
{
    PathIntegrand<L1ZSeq> f;
    f.eval = [](complex z) {
        complex inv = 1.0 / z;
        return scale(inv, CertUpper(8 * kUlp * std::abs(inv)), delta(0));
    };
    f.sup_norm = CertUpper(1.0 + 1e-12);
    f.derivative_bound = CertUpper(1.0 + 1e-12);
    f.second_derivative_bound = CertUpper(2.0 + 1e-12);
    f.modulus = lipschitz_modulus(CertUpper(1.0 + 1e-12));
    return f;
}

// |value - c delta0| as a certified number: the finite part distance plus the tail.
double distance_to(const L1ZSeq& value, complex c)
{
    return norm_upper(sub(value, delta(0, c))).value();
}

const complex kTwoPiI(0.0, kTwoPi);

} // namespace

TEST_SUITE("calculus") {

TEST_CASE("integrate examples") {
    L1ZSeq c = delta(2, complex(0.5, -1.0));
    Integral<L1ZSeq> ic = integrate(constant_curve(c), 0.0, 1.0, 1e-12);
    CHECK(ic.value == c);
    CHECK(ic.err.value() <= 1e-14);

    Integral<L1ZSeq> il = integrate(linear_curve(), 0.0, 1.0, 1e-9);
    CHECK(distance_to(il.value, 0.5) <= il.err.value() + 1e-15);
    CHECK(il.err.value() <= 1e-9);

    // |int g| <= M (b - a) + err for |g| <= M
    Integral<L1ZSeq> w = integrate(linear_curve(), -2.0, 3.0, 1e-6);
    CHECK(norm_upper(w.value).value() <= 3.0 * 5.0 + w.err.value());

    CHECK_THROWS_AS((void)integrate(linear_curve(), 1.0, 0.0, 1e-6), Error);
    CHECK_THROWS_AS((void)integrate(linear_curve(), 0.0, 1.0, 0.0), Error);
}

TEST_CASE("integrate reports unreachable tolerance") {
    BanachCurve<L1ZSeq> jumpy;
    jumpy.value = [](double t) { return delta(0, t < 0.5 ? 0.0 : 1.0); };
    jumpy.modulus = [](double) { return CertUpper(1.0); };
    try {
        (void)integrate(jumpy, 0.0, 1.0, 1e-3, 1 << 10);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_certified);
        CHECK(std::string(e.what()) == "tolerance unreachable");
    }
}

TEST_CASE("integrate in the scalar algebra") {
    BanachCurve<CertScalar> curve;
    curve.value = [](double t) { return CertScalar{std::exp(complex(0, t)), CertUpper(4 * kUlp)}; };
    curve.modulus = lipschitz_modulus(CertUpper(1.0));
    curve.second_derivative_bound = CertUpper(1.0);
    Integral<CertScalar> r = integrate(curve, 0.0, 2.0, 1e-8);
    // int_0^2 e^{it} dt = (e^{2i} - 1) / i
    oracle::C exact = (oracle::expi(Real(2)) - oracle::C(Real(1))) / oracle::C(Real(0), Real(1));
    Real d = oracle::abs(exact - oracle::C(r.value.value));
    CHECK(d <= Real(r.err.value() + r.value.radius.value()));
    CHECK(r.err.value() <= 1e-8);
}

TEST_CASE("banach_exp examples") {
    CHECK(banach_exp(L1ZSeq{}, 1e-12) == delta(0));

    L1ZSeq e = banach_exp(delta(0), 1e-12);
    Real euler = exp(Real(1));
    CHECK(abs(Real(e.coeff(0).real()) - euler) <= Real(e.tail().value()));
    CHECK(e.tail().value() <= 1e-11);

    L1ZSeq u = banach_exp(delta(1), 1e-12);
    Real fact = 1;
    for (int n = 0; n <= 15; ++n) {
        if (n > 0) {
            fact *= n;
        }
        CHECK(abs(Real(u.coeff(n).real()) - 1 / fact) <= Real(u.tail().value()));
    }
    CHECK(norm_upper(u).value() >= euler.convert_to<double>());
    CHECK(norm_upper(u).value() <= euler.convert_to<double>() + 1e-11);
}

TEST_CASE("banach_exp matches the scalar exponential") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const double tol = 1e-9;
    for (int i = 0; i < 50; ++i) {
        complex a(u(rng), u(rng) * 0.3);
        if (std::abs(a) > 10.0) {
            continue;
        }
        L1ZSeq e = banach_exp(delta(0, a), tol);
        oracle::C exact = exp(Real(a.real())) * oracle::expi(Real(a.imag()));
        Real d = oracle::abs(exact - oracle::C(e.coeff(0)));
        CAPTURE(a);
        CHECK(d <= Real(tol + 1e-12));
        CHECK(d <= Real(e.tail().value()));
    }
}

TEST_CASE("exp_flow_check examples") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> c(0.0, 0.3);
    L1ZSeq a = delta(-1, complex(c(rng), c(rng))) + delta(2, complex(c(rng), c(rng)));
    CHECK(exp_flow_check(a, 0.0, 0.0, 1e-9).value() <= 2e-9);
    CHECK(exp_flow_check(delta(0), 1.0, 1.0, 1e-9).value() <= 1e-8);
    CHECK(exp_flow_check(delta(1), 0.5, 0.5, 1e-9).value() <= 1e-8);
}

TEST_CASE("exp_flow_curve modulus") {
    BanachCurve<L1ZSeq> flow = exp_flow_curve(delta(1, 0.5), 2.0, 1e-12);
    double prev = 0.0;
    for (double d : {1e-12, 1e-6, 1e-3, 0.1, 1.0}) {
        double m = flow.modulus(d).value();
        CHECK(m >= prev);
        prev = m;
    }
    CHECK(flow.modulus(1e-14).value() <= 1e-12);
    // |e^{sa} - e^{ta}| against the modulus
    for (double s : {-1.5, 0.0, 0.7}) {
        double t = s + 0.25;
        double diff = norm_upper(sub(flow.value(t), flow.value(s))).value();
        CHECK(diff <= flow.modulus(0.25).value());
    }
}

TEST_CASE("paths") {
    PathLoop g = circle_loop(2.0);
    CHECK(std::abs(g.point(0.0) - g.point(1.0)) <= 1e-12);
    CHECK(g.is_loop);
    const double h = 1e-5;
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.9}) {
        complex fd = (g.point(t + h) - g.point(t)) / h;
        CHECK(std::abs(fd - g.derivative(t)) <= g.deriv_lipschitz.value() * h + 1e-9);
    }
    CHECK_THROWS_AS((void)circle_loop(0.0), Error);
}

TEST_CASE("loop_integral examples") {
    PathLoop g = circle_loop(1.0);

    PathIntegrand<L1ZSeq> one = polynomial_integrand({1.0}, 1.0);
    Integral<L1ZSeq> a = loop_integral(one, g, 1e-6);
    CHECK(norm_upper(a.value).value() <= a.err.value());

    PathIntegrand<L1ZSeq> sq = polynomial_integrand({0.0, 0.0, 1.0}, 1.0);
    Integral<L1ZSeq> b = loop_integral(sq, g, 1e-6);
    CHECK(norm_upper(b.value).value() <= b.err.value());
    CHECK(b.err.value() <= 1e-6);

    Integral<L1ZSeq> c = loop_integral(inverse_integrand(), g, 1e-6);
    CHECK(distance_to(c.value, kTwoPiI) <= c.err.value());
}

TEST_CASE("resolvent_eval examples") {
    L1ZSeq z0 = resolvent_eval(L1ZSeq{}, 2.0, 1e-12);
    CHECK(z0 == delta(0, 0.5));

    L1ZSeq r = resolvent_eval(delta(1), 2.0, 1e-12);
    for (int n = 0; n < 30; ++n) {
        CHECK(std::abs(r.coeff(n) - std::ldexp(1.0, -(n + 1))) <= 1e-15);
    }
    // The coefficients alone are within |2 - u| * tail(r) of the exact resolvent.
    L1ZSeq check = convolve(delta(0, 2.0) - delta(1), r.finite_part());
    CHECK(distance_to(check, 1.0) <= 3.0 * r.tail().value() * (1 + 1e-9));

    L1ZSeq half = resolvent_eval(delta(1, 0.5), 1.0, 1e-12);
    CHECK(std::abs(half.coeff(0) - 1.0) <= 1e-15);
    CHECK(std::abs(half.coeff(3) - 0.125) <= 1e-15);

    try {
        (void)resolvent_eval(delta(1), complex(0.0, 1.0), 1e-12);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
        CHECK(std::string(e.what()).find("outside convergence region") != std::string::npos);
    }
}

TEST_CASE("resolvent_loop_integral examples") {
    Integral<L1ZSeq> a = resolvent_loop_integral(L1ZSeq{}, 1.0, 1024, 1e-12);
    CHECK(distance_to(a.value, kTwoPiI) <= 1e-4);
    CHECK(distance_to(a.value, kTwoPiI) <= a.err.value());

    Integral<L1ZSeq> b = resolvent_loop_integral(delta(1), 2.0, 4096, 1e-12);
    CHECK(distance_to(b.value, kTwoPiI) <= 1e-4);
    CHECK(distance_to(b.value, kTwoPiI) <= b.err.value() + b.value.tail().value());
    CHECK(b.err.value() <= 1e-3);

    L1ZSeq u = delta(1, 0.3) + delta(-1, 0.3);
    Integral<L1ZSeq> c = resolvent_loop_integral(u, 2.0, 4096, 1e-12);
    CHECK(distance_to(c.value, kTwoPiI) <= 1e-4);

    try {
        (void)resolvent_loop_integral(delta(1), 0.5, 64, 1e-12);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
        CHECK(std::string(e.what()).find("radius inside spectrum bound") != std::string::npos);
    }
}

TEST_CASE("theorem mainC embodiment") {
    for (double R : {1.5, 2.0, 3.0}) {
        Integral<L1ZSeq> r = resolvent_loop_integral(delta(1), R, 2048, 1e-12);
        CAPTURE(R);
        CHECK(r.err.value() <= 0.1);
        CHECK(norm_upper(r.value).value() >= 6.0);
    }
    Integral<L1ZSeq> r2 = resolvent_loop_integral(delta(1), 2.0, 4096, 1e-12);
    Integral<L1ZSeq> r3 = resolvent_loop_integral(delta(1), 3.0, 4096, 1e-12);
    CHECK(norm_upper(sub(r2.value, r3.value)).value() <= r2.err.value() + r3.err.value());
}

TEST_CASE("lemma holom on random polynomials") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double R = i % 2 == 0 ? 1.0 : 2.0;
        std::vector<complex> coeffs(7);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            complex c(u(rng), u(rng));
            coeffs[k] = c / std::abs(c) * std::abs(u(rng)) / std::pow(R, static_cast<double>(k));
        }
        PathIntegrand<L1ZSeq> f = polynomial_integrand(coeffs, R);
        Integral<L1ZSeq> lo = loop_integral_steps(f, circle_loop(R), 1024);
        Integral<L1ZSeq> hi = loop_integral_steps(f, circle_loop(R), 2048);
        CHECK(norm_upper(lo.value).value() <= lo.err.value());
        CHECK(norm_upper(hi.value).value() <= hi.err.value());
        CHECK(lo.err.value() / hi.err.value() >= 1.9);
    }
}

TEST_CASE("mean_value_bound_check examples") {
    CHECK(mean_value_bound_check(constant_curve(delta(3, 2.0)), CertUpper(0), 0.0, 1.0));

    BanachCurve<L1ZSeq> line;
    line.value = [](double t) { return delta(1, t); };
    line.modulus = lipschitz_modulus(CertUpper(1));
    CHECK(mean_value_bound_check(line, CertUpper(1), 0.0, 1.0));
    CHECK_FALSE(mean_value_bound_check(line, CertUpper(0.5), 0.0, 1.0));

    BanachCurve<L1ZSeq> flow = exp_flow_curve(delta(0), 1.0, 1e-12);
    CHECK(mean_value_bound_check(flow, CertUpper(std::exp(1.0)), 0.0, 1.0));
}

TEST_CASE("pullback modulus is monotone and vanishes at 0") {
    PathIntegrand<L1ZSeq> f = resolvent_integrand(delta(1), 2.0, 1e-12);
    BanachCurve<L1ZSeq> c = pullback(f, circle_loop(2.0));
    double prev = 0.0;
    for (double d : {1e-15, 1e-9, 1e-4, 1e-2, 0.5}) {
        double m = c.modulus(d).value();
        CHECK(m >= prev);
        prev = m;
    }
    CHECK(c.modulus(1e-15).value() <= 1e-12);
    CHECK(c.second_derivative_bound.has_value());
}

}
