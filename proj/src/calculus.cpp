#include "wiener/calculus.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wiener {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kMaxSeriesTerms = 100000;

// Upper bound on exp(x) for x >= 0 (libm exp is faithful to within 1 ulp).
CertUpper exp_upper(CertUpper x)
{
    return CertUpper(inflate(inflate(std::exp(x.value()))));
}

// Rounding radius of fl(1/z) relative to the exact reciprocal.
// Error of inv = 1 / z as computed by the complex division. Real z whose
// reciprocal is representable gives an exact result.
CertUpper reciprocal_err(complex z, complex inv)
{
    if (z.imag() == 0.0 && inv.imag() == 0.0 && std::isnormal(inv.real())
        && std::fma(z.real(), inv.real(), -1.0) == 0.0) {
        return {};
    }
    return cu_abs(inv) * CertUpper(8.0 * kUlp);
}

} // namespace

PathLoop circle_loop(double radius, complex center)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::invalid_input, "circle radius must be positive");
    }
    PathLoop g;
    g.point = [radius, center](double t) { return center + std::polar(radius, 2.0 * kPi * t); };
    g.derivative = [radius](double t) {
        return complex(0.0, 2.0 * kPi * radius) * std::polar(1.0, 2.0 * kPi * t);
    };
    const CertUpper two_pi(inflate(2.0 * kPi));
    const CertUpper R(radius);
    g.speed = two_pi * R;
    g.deriv_lipschitz = two_pi * two_pi * R;
    g.third_derivative = two_pi * two_pi * two_pi * R;
    g.is_loop = true;
    return g;
}

L1ZSeq banach_exp(const L1ZSeq& a, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    }
    const CertUpper A = norm_upper(a);
    // remainder(K) = A^(K+1)/(K+1)! * e^A
    CertUpper remainder = exp_upper(A) * A;
    unsigned K = 0;
    while (remainder.value() > tol) {
        if (++K > kMaxSeriesTerms) {
            throw Error(ErrorKind::not_certified, "exponential series needs too many terms");
        }
        remainder = cu_div(remainder * A, static_cast<double>(K + 1));
    }

    L1ZSeq sum = delta(0);
    L1ZSeq term = delta(0);
    for (unsigned n = 1; n <= K; ++n) {
        const double inv = 1.0 / static_cast<double>(n);
        term = scale(inv, CertUpper(inflate(inv * kUlp)), convolve(term, a));
        sum = add(sum, term);
    }
    return sum.with_tail(sum.tail() + remainder);
}

CertUpper exp_flow_check(const L1ZSeq& a, double x, double y, double tol)
{
    const auto s = two_sum(x, y);
    const L1ZSeq exy = banach_exp(scale(s.sum, cu_abs(s.err), a), tol);
    const L1ZSeq ex = banach_exp(scale(x, a), tol);
    const L1ZSeq ey = banach_exp(scale(y, a), tol);
    return norm_upper(sub(exy, convolve(ex, ey)));
}

BanachCurve<L1ZSeq> exp_flow_curve(const L1ZSeq& a, double T, double tol)
{
    if (!(T >= 0.0)) {
        throw Error(ErrorKind::invalid_input, "time horizon must be nonnegative");
    }
    const CertUpper A = norm_upper(a);
    const CertUpper growth = exp_upper(A * CertUpper(T));
    BanachCurve<L1ZSeq> curve;
    curve.value = [a, tol](double t) { return banach_exp(scale(t, a), tol); };
    // Samples carry their own tails; the modulus is for the exact flow.
    curve.modulus = lipschitz_modulus(A * growth);
    curve.second_derivative_bound = A * A * growth;
    return curve;
}

L1ZSeq resolvent_eval(const L1ZSeq& u, complex z, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    }
    const CertUpper U = norm_upper(u);
    const double z_lower = deflate(std::abs(z));
    const double gap = detail::lower_sub(z_lower, U.value());
    if (!(gap >= 1e-6)) {
        std::ostringstream os;
        os.precision(17);
        os << "outside convergence region: |z| = " << std::abs(z) << " vs |u| <= " << U.value();
        throw Error(ErrorKind::hypothesis_failed, os.str());
    }
    const CertUpper q = cu_div(U, z_lower);
    // remainder(K) = |u|^(K+1) / |z|^(K+1) / (|z| - |u|)
    CertUpper remainder = cu_div(q, gap);
    unsigned K = 0;
    while (remainder.value() > tol) {
        if (++K > kMaxSeriesTerms) {
            throw Error(ErrorKind::not_certified, "resolvent series needs too many terms");
        }
        remainder = remainder * q;
    }

    const complex inv = 1.0 / z;
    const CertUpper inv_err = reciprocal_err(z, inv);
    L1ZSeq term = scale(inv, inv_err, delta(0));
    L1ZSeq sum = term;
    for (unsigned n = 1; n <= K; ++n) {
        term = scale(inv, inv_err, convolve(term, u));
        sum = add(sum, term);
    }
    return sum.with_tail(sum.tail() + remainder);
}

PathIntegrand<L1ZSeq> resolvent_integrand(const L1ZSeq& u, double R, double tol)
{
    const CertUpper U = norm_upper(u);
    const double gap = detail::lower_sub(R, U.value());
    if (!(gap > 0.0)) {
        throw Error(ErrorKind::hypothesis_failed, "radius inside spectrum bound");
    }
    const CertUpper F = cu_div(CertUpper(1.0), gap);
    PathIntegrand<L1ZSeq> f;
    f.eval = [u, tol](complex z) { return resolvent_eval(u, z, tol); };
    f.sup_norm = F;
    f.derivative_bound = F * F;
    f.second_derivative_bound = CertUpper(2.0) * F * F * F;
    const CertUpper d1 = F * F;
    // Samples carry their own tails; the modulus is for the exact resolvent.
    f.modulus = [d1](double delta) { return d1 * CertUpper(std::abs(delta)); };
    return f;
}

Integral<L1ZSeq> resolvent_loop_integral(const L1ZSeq& u, double R, std::size_t steps, double tol,
                                         const std::function<void(double, const L1ZSeq&)>& observe)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw Error(ErrorKind::invalid_input, "radius must be positive");
    }
    const CertUpper U = norm_upper(u);
    if (!(R > inflate(U.value() * (1.0 + 1e-3)))) {
        std::ostringstream os;
        os.precision(17);
        os << "radius inside spectrum bound: R = " << R << " but |u| <= " << U.value();
        throw Error(ErrorKind::hypothesis_failed, os.str());
    }
    return loop_integral_steps(resolvent_integrand(u, R, tol), circle_loop(R), steps, observe);
}

PathIntegrand<L1ZSeq> polynomial_integrand(std::vector<complex> coeffs, double R)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw Error(ErrorKind::invalid_input, "radius must be positive");
    }
    CertUpper F;
    CertUpper d1;
    CertUpper d2;
    CertUpper Rk(1.0);  // R^k
    CertUpper Rk1;      // R^(k-1)
    CertUpper Rk2;      // R^(k-2)
    const CertUpper Rc(R);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const CertUpper c = cu_abs(coeffs[k]);
        const auto kk = static_cast<double>(k);
        F += c * Rk;
        d1 += CertUpper(kk) * c * Rk1;
        d2 += CertUpper(kk * (kk > 0 ? kk - 1.0 : 0.0)) * c * Rk2;
        Rk2 = Rk1;
        Rk1 = Rk;
        Rk = Rk * Rc;
    }
    PathIntegrand<L1ZSeq> f;
    f.eval = [coeffs = std::move(coeffs)](complex z) {
        // Horner's rule in the algebra keeps the rounding inside the tail.
        L1ZSeq acc;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = add(scale(z, acc), delta(0, *it));
        }
        return acc;
    };
    f.sup_norm = F;
    f.derivative_bound = d1;
    f.second_derivative_bound = d2;
    f.modulus = [d1](double delta) { return d1 * CertUpper(std::abs(delta)); };
    return f;
}

} // namespace wiener
