#ifndef WIENER_CALCULUS_HPP
#define WIENER_CALCULUS_HPP

#include "wiener/cert_numeric.hpp"
#include "wiener/error.hpp"
#include "wiener/l1z.hpp"

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace wiener {

/// A commutative Banach algebra element type with certified arithmetic: the
/// default-constructed value is zero and every operation keeps its own
/// rounding error inside the represented set.
template <class E>
concept BanachElement = std::copyable<E> && std::default_initializable<E>
                        && requires(const E& a, const E& b, complex c) {
                               { add(a, b) } -> std::same_as<E>;
                               { scale(c, a) } -> std::same_as<E>;
                               { norm_upper(a) } -> std::same_as<CertUpper>;
                           };

/// delta -> bound on |value(s) - value(t)| whenever |s - t| <= delta.
using Modulus = std::function<CertUpper(double)>;

inline Modulus lipschitz_modulus(CertUpper L)
{
    return [L](double delta) { return L * CertUpper(std::abs(delta)); };
}

/// A uniformly continuous map [a, b] -> E. Uniform continuity is data: the
/// caller supplies the modulus, and optionally sup |value''| which enables the
/// second-order midpoint bound.
template <BanachElement E>
struct BanachCurve {
    std::function<E(double)> value;
    Modulus modulus;
    std::optional<CertUpper> second_derivative_bound;
};

template <BanachElement E>
struct Integral {
    E value{};
    CertUpper err{};  ///< quadrature error; arithmetic rounding lives in value itself
    std::size_t panels = 0;
};

namespace detail {

inline double lower_sub(double a, double b)
{
    double d = a - b;
    return d >= 0.0 ? deflate(d) : d * kSlack;
}

// Quadrature part of the composite midpoint error for P panels of width h.
template <BanachElement E>
CertUpper midpoint_error(const BanachCurve<E>& curve, std::size_t P, double h, double offset)
{
    const CertUpper covered(inflate(static_cast<double>(P) * h));
    const CertUpper shift = curve.modulus(offset);
    CertUpper first = covered * (curve.modulus(inflate(0.5 * h + offset)));
    if (curve.second_derivative_bound) {
        CertUpper h3(inflate(inflate(h * h) * h));
        CertUpper second = cu_div(covered * h3 * *curve.second_derivative_bound, 24.0 * h);
        second += covered * shift;
        return std::min(first, second);
    }
    return first;
}

} // namespace detail

/// Composite midpoint rule with a fixed number of panels. On each panel the
/// error is at most h*modulus(h/2) (or h^3/24 * sup|f''|), so the total is
/// (b-a)*modulus(h/2) up to rounding allowances for sample placement.
/// `observe`, if set, sees every (t, sample) pair in order.
template <BanachElement E>
Integral<E> integrate_panels(const BanachCurve<E>& curve, double a, double b, std::size_t panels,
                             const std::function<void(double, const E&)>& observe = {})
{
    if (!(a <= b) || panels == 0) {
        throw Error(ErrorKind::invalid_input, "integration needs a <= b and at least one panel");
    }
    Integral<E> out;
    out.panels = panels;
    const double width = b - a;
    if (width == 0.0) {
        return out;
    }
    const double h = width / static_cast<double>(panels);
    E sum{};
    double sup = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        double t = a + (static_cast<double>(i) + 0.5) * h;
        E v = curve.value(t);
        sup = std::max(sup, norm_upper(v).value());
        if (observe) {
            observe(t, v);
        }
        sum = add(sum, v);
    }
    out.value = scale(h, sum);

    const double offset = inflate(4.0 * kUlp * (std::abs(a) + std::abs(b) + h));
    const CertUpper quad = detail::midpoint_error(curve, panels, h, offset);
    // Panels cover [a, a + P h]; charge the mismatch with [a, b] at sup |f|.
    const CertUpper mismatch(
        inflate((static_cast<double>(panels) + 2.0) * kUlp * width + kUlp * (std::abs(a) + std::abs(b))));
    const CertUpper sup_f = CertUpper(sup) + curve.modulus(h);
    out.err = quad + mismatch * sup_f;
    return out;
}

/// Composite midpoint rule with the panel count doubled until the certified
/// error is <= tol. Throws Error(not_certified, "tolerance unreachable") past
/// max_panels.
template <BanachElement E>
Integral<E> integrate(const BanachCurve<E>& curve, double a, double b, double tol,
                      std::size_t max_panels = std::size_t{1} << 22)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    }
    if (!(a <= b)) {
        throw Error(ErrorKind::invalid_input, "integration needs a <= b");
    }
    const double width = b - a;
    const double offset = inflate(4.0 * kUlp * (std::abs(a) + std::abs(b) + width));
    for (std::size_t P = 1; P <= max_panels; P *= 2) {
        const double h = width / static_cast<double>(P);
        if (width > 0.0 && detail::midpoint_error(curve, P, h, offset).value() > 0.5 * tol) {
            continue;
        }
        Integral<E> out = integrate_panels(curve, a, b, P);
        if (out.err.value() <= tol) {
            return out;
        }
    }
    throw Error(ErrorKind::not_certified, "tolerance unreachable");
}

/// Checks |f(b) - f(a)| <= M (b - a) + 1e-9 for a curve whose derivative is
/// bounded by M on [a, b].
template <BanachElement E>
bool mean_value_bound_check(const BanachCurve<E>& curve, CertUpper M, double a, double b)
{
    const E diff = add(curve.value(b), scale(-1.0, curve.value(a)));
    const double lhs = norm_upper(diff).value();
    return lhs <= (M * CertUpper(std::abs(b - a))).value() + 1e-9;
}

/// A differentiable path gamma: [0, 1] -> C.
struct PathLoop {
    std::function<complex(double)> point;
    std::function<complex(double)> derivative;
    CertUpper deriv_lipschitz;                  ///< |gamma'(s) - gamma'(t)| <= L |s - t|
    CertUpper speed;                            ///< sup |gamma'|
    std::optional<CertUpper> third_derivative;  ///< sup |gamma'''|, for the second-order bound
    bool is_loop = false;
};

/// The circle t -> center + R exp(2 pi i t).
PathLoop circle_loop(double radius, complex center = 0.0);

/// A map f: C -> E along a path, with the continuity data the certified
/// integral needs. `modulus` is in terms of arc length along the path.
template <BanachElement E>
struct PathIntegrand {
    std::function<E(complex)> eval;
    CertUpper sup_norm;
    Modulus modulus;
    std::optional<CertUpper> derivative_bound;         ///< sup |f'| along the path
    std::optional<CertUpper> second_derivative_bound;  ///< sup |f''| along the path
};

/// The curve t -> f(gamma(t)) gamma'(t) with its modulus of continuity.
template <BanachElement E>
BanachCurve<E> pullback(const PathIntegrand<E>& f, const PathLoop& gamma)
{
    BanachCurve<E> curve;
    curve.value = [f, gamma](double t) { return scale(gamma.derivative(t), f.eval(gamma.point(t))); };
    const CertUpper S = gamma.speed;
    const CertUpper A = gamma.deriv_lipschitz;
    const CertUpper F = f.sup_norm;
    const Modulus fm = f.modulus;
    curve.modulus = [fm, S, A, F](double delta) {
        return fm((S * CertUpper(delta)).value()) * S + F * A * CertUpper(delta);
    };
    if (f.derivative_bound && f.second_derivative_bound && gamma.third_derivative) {
        const CertUpper d1 = *f.derivative_bound;
        const CertUpper d2 = *f.second_derivative_bound;
        curve.second_derivative_bound =
            d2 * S * S * S + CertUpper(3.0) * d1 * S * A + F * *gamma.third_derivative;
    }
    return curve;
}

namespace detail {

// Allowance for evaluating gamma and gamma' in floating point.
template <BanachElement E>
CertUpper path_rounding_allowance(const PathIntegrand<E>& f, const PathLoop& gamma)
{
    const double eta = 0x1p-40 * std::max(1.0, gamma.speed.value());
    return f.modulus(eta) * gamma.speed + f.sup_norm * CertUpper(eta);
}

} // namespace detail

/// Integral of f over gamma, i.e. int_0^1 f(gamma(t)) gamma'(t) dt, with a
/// fixed number of midpoint panels.
template <BanachElement E>
Integral<E> loop_integral_steps(const PathIntegrand<E>& f, const PathLoop& gamma, std::size_t steps,
                                const std::function<void(double, const E&)>& observe = {})
{
    Integral<E> out = integrate_panels(pullback(f, gamma), 0.0, 1.0, steps, observe);
    out.err += detail::path_rounding_allowance(f, gamma);
    return out;
}

template <BanachElement E>
Integral<E> loop_integral(const PathIntegrand<E>& f, const PathLoop& gamma, double tol)
{
    const CertUpper allowance = detail::path_rounding_allowance(f, gamma);
    if (!(allowance.value() < tol)) {
        throw Error(ErrorKind::not_certified, "tolerance unreachable");
    }
    Integral<E> out = integrate(pullback(f, gamma), 0.0, 1.0, tol - allowance.value());
    out.err += allowance;
    return out;
}

// l1(Z)-specific constructions.

/// Exponential sum a^n/n! truncated once the remainder bound
/// |a|^(K+1)/(K+1)! e^|a| is <= tol; the remainder goes into the tail.
L1ZSeq banach_exp(const L1ZSeq& a, double tol);

/// Certified |e^{a(x+y)} - e^{ax} e^{ay}|.
CertUpper exp_flow_check(const L1ZSeq& a, double x, double y, double tol);

/// The flow t -> e^{ta} on [-T, T] with Lipschitz modulus |a| e^{|a|T} and
/// second-derivative bound |a|^2 e^{|a|T}.
BanachCurve<L1ZSeq> exp_flow_curve(const L1ZSeq& a, double T, double tol);

/// Resolvent (z - u)^-1 as the series sum u^n / z^(n+1). Requires
/// |z| - |u| >= 1e-6; Error(hypothesis_failed, "outside convergence region")
/// otherwise.
L1ZSeq resolvent_eval(const L1ZSeq& u, complex z, double tol);

/// The resolvent along the circle of radius R, with sup bound 1/(R - |u|)
/// and derivative bounds |f'| <= F^2, |f''| <= 2 F^3.
PathIntegrand<L1ZSeq> resolvent_integrand(const L1ZSeq& u, double R, double tol);

/// Loop integral of the resolvent over the circle of radius R; the result
/// equals 2 pi i delta0 within err plus the value's tail. Requires
/// R > |u| (1 + 1e-3).
Integral<L1ZSeq> resolvent_loop_integral(const L1ZSeq& u, double R, std::size_t steps, double tol,
                                         const std::function<void(double, const L1ZSeq&)>& observe = {});

/// z -> p(z) delta0 on the circle of radius R, with derivative bounds.
PathIntegrand<L1ZSeq> polynomial_integrand(std::vector<complex> coeffs, double R);

} // namespace wiener

#endif // WIENER_CALCULUS_HPP
