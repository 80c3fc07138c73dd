#include "wiener/l1r.hpp"

#include "wiener/error.hpp"
#include "wiener/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace wiener {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(complex c)
{
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

double up(double x)
{
    return inflate(x);
}

double mag(complex c)
{
    return std::hypot(c.real(), c.imag());
}

// Linear interpolation on [x0, x1], clamped to the end values.
complex lerp(double x0, double x1, complex v0, complex v1, double t)
{
    if (t <= x0) {
        return v0;
    }
    if (t >= x1) {
        return v1;
    }
    return v0 + (v1 - v0) * ((t - x0) / (x1 - x0));
}

// Bound on the rounding error of lerp relative to the exact interpolant.
double lerp_error(complex v0, complex v1)
{
    return 16.0 * kUlp * (mag(v0) + mag(v1));
}

// Walks a piecewise-linear function at nondecreasing query points.
class Walker {
public:
    Walker(const std::vector<double>& x, const std::vector<complex>& v) : x_(x), v_(v) {}

    // Value at t and a bound on its rounding error.
    std::pair<complex, double> at(double t)
    {
        if (x_.empty() || t <= x_.front() || t >= x_.back()) {
            return {complex{}, 0.0};
        }
        while (x_[i_ + 1] < t) {
            ++i_;
        }
        if (t == x_[i_ + 1]) {
            return {v_[i_ + 1], 0.0};
        }
        if (t == x_[i_]) {
            return {v_[i_], 0.0};
        }
        return {lerp(x_[i_], x_[i_ + 1], v_[i_], v_[i_ + 1], t), lerp_error(v_[i_], v_[i_ + 1])};
    }

private:
    const std::vector<double>& x_;
    const std::vector<complex>& v_;
    std::size_t i_ = 0;
};

// L1 charge for knot value errors e_i: sum e_i (h_left + h_right) / 2.
CertUpper value_error_charge(const std::vector<double>& x, const std::vector<double>& e)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (e[i] == 0.0) {
            continue;
        }
        double left = i > 0 ? x[i] - x[i - 1] : 0.0;
        double right = i + 1 < x.size() ? x[i + 1] - x[i] : 0.0;
        s = up(s + up(e[i] * up(up(left + right) * 0.5)));
    }
    return CertUpper(up(s));
}

double max_abs_value(const PLFunction& f)
{
    double m = 0.0;
    for (const auto& v : f.values()) {
        m = std::max(m, mag(v));
    }
    return up(m);
}

// Largest |slope| of the piecewise-linear part.
double max_slope(const PLFunction& f)
{
    const auto& x = f.knots();
    const auto& v = f.values();
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        m = std::max(m, mag(v[i + 1] - v[i]) / (x[i + 1] - x[i]));
    }
    return up(up(up(m)));
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

PLFunction PLFunction::from_local(double origin, std::vector<double> knots, std::vector<complex> values,
                                  CertUpper slack)
{
    if (knots.size() != values.size()) {
        throw Error(ErrorKind::invalid_input, "breakpoints and values differ in length");
    }
    if (!std::isfinite(origin)) {
        throw Error(ErrorKind::invalid_input, "non-finite origin");
    }
    PLFunction out;
    out.slack_ = slack;
    if (knots.empty()) {
        return out;
    }
    if (knots.size() < 2) {
        throw Error(ErrorKind::invalid_input, "a nonzero function needs at least two breakpoints");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !finite(values[i])) {
            throw Error(ErrorKind::invalid_input, "non-finite breakpoint or value at position " + std::to_string(i));
        }
        if (i > 0 && !(knots[i] > knots[i - 1])) {
            throw Error(ErrorKind::invalid_input, "breakpoints must be strictly increasing");
        }
    }
    if (values.front() != complex{} || values.back() != complex{}) {
        throw Error(ErrorKind::invalid_input, "end values must be 0");
    }
    out.origin_ = origin;
    out.knots_ = std::move(knots);
    out.values_ = std::move(values);
    return out;
}

PLFunction PLFunction::from_points(std::vector<double> breakpoints, std::vector<complex> values, CertUpper slack)
{
    return from_local(0.0, std::move(breakpoints), std::move(values), slack);
}

std::vector<double> PLFunction::breakpoints() const
{
    std::vector<double> out(knots_.size());
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        out[i] = origin_ + knots_[i];
    }
    return out;
}

double PLFunction::support_lo() const
{
    return knots_.empty() ? 0.0 : origin_ + knots_.front();
}

double PLFunction::support_hi() const
{
    return knots_.empty() ? 0.0 : origin_ + knots_.back();
}

PLFunction PLFunction::with_slack(CertUpper slack) const
{
    PLFunction out = *this;
    out.slack_ = slack;
    return out;
}

complex PLFunction::operator()(double x) const
{
    if (knots_.empty()) {
        return {};
    }
    double t = x - origin_;
    if (t <= knots_.front() || t >= knots_.back()) {
        return {};
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return lerp(knots_[i], knots_[i + 1], values_[i], values_[i + 1], t);
}

PLFunction triangle(double center, double half_width, complex height)
{
    if (!(half_width > 0.0)) {
        throw Error(ErrorKind::invalid_input, "triangle half-width must be positive");
    }
    return PLFunction::from_local(center, {-half_width, 0.0, half_width}, {0.0, height, 0.0});
}

namespace {

// Upper bound on the integral over [0, h] of |linear| between real values ra, rb.
// Exact when h, |ra| + |rb| and their product are exact.
double real_segment_integral(double h, double ra, double rb)
{
    if ((ra >= 0.0 && rb >= 0.0) || (ra <= 0.0 && rb <= 0.0)) {
        const SumAndError s = two_sum(std::abs(ra), std::abs(rb));
        const double p = h * s.sum;
        if (s.err == 0.0 && std::fma(h, s.sum, -p) == 0.0 && p >= 2.0 * std::numeric_limits<double>::min()) {
            return p * 0.5;
        }
        return p * 0.5 * (1.0 + 16.0 * kUlp);
    }
    return h * (ra * ra + rb * rb) / (2.0 * (std::abs(ra) + std::abs(rb))) * (1.0 + 16.0 * kUlp);
}

} // namespace

CertUpper norm_l1(const PLFunction& f)
{
    const auto& x = f.knots();
    const auto& v = f.values();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const SumAndError width = two_sum(x[i + 1], -x[i]);
        const double h = width.err == 0.0 ? width.sum : up(width.sum);
        const complex a = v[i];
        const complex b = v[i + 1];
        double seg = 0.0;
        if (a.imag() == 0.0 && b.imag() == 0.0) {
            seg = real_segment_integral(h, a.real(), b.real());
        } else {
            const complex d = b - a;
            const double slack = h * 16.0 * kUlp * (mag(a) + mag(b));
            if (d == complex{}) {
                seg = up(h * mag(a)) + slack;
            } else {
                // |linear| is convex, so the trapezoid rule overestimates.
                constexpr int panels = 64;
                double s = 0.5 * (mag(a) + mag(b));
                for (int j = 1; j < panels; ++j) {
                    s += mag(a + d * (static_cast<double>(j) / panels));
                }
                seg = h * s / panels;
                seg = seg * (1.0 + 256.0 * kUlp) + h * 8.0 * kUlp * (mag(a) + mag(b));

                // |a + t d| <= |projection onto d| + distance of the line from 0.
                const complex u = std::conj(d) / mag(d);
                const double dist = std::abs((u * a).imag());
                const double proj = real_segment_integral(h, (u * a).real(), (u * b).real());
                seg = std::min(seg, up(proj + h * dist) + slack);
            }
        }
        total = (CertUpper(total) + CertUpper(seg)).value();
    }
    return CertUpper(total) + f.l1_slack();
}

CertUpper total_variation(const PLFunction& f)
{
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        s = up(s + up(up(mag(v[i + 1] - v[i]))));
    }
    return CertUpper(up(s));
}

CertUpper slope_variation(const PLFunction& f)
{
    const auto& x = f.knots();
    const auto& v = f.values();
    if (x.size() < 2) {
        return {};
    }
    std::vector<complex> slope(x.size() + 1);  // slope[0] and slope[n] are the outer zeros
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        slope[i + 1] = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
        double jump = mag(slope[i + 1] - slope[i]) + 16.0 * kUlp * (mag(slope[i]) + mag(slope[i + 1]));
        s = up(s + up(jump));
    }
    return CertUpper(up(s));
}

CertUpper first_moment(const PLFunction& f)
{
    const auto& x = f.knots();
    const auto& v = f.values();
    const double o = std::abs(f.origin());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double reach = up(o + std::max(std::abs(x[i]), std::abs(x[i + 1])));
        double mass = up(up(x[i + 1] - x[i]) * up(mag(v[i]) + mag(v[i + 1])) * 0.5);
        s = up(s + up(reach * mass));
    }
    return CertUpper(up(s));
}

PLFunction translate(const PLFunction& f, double x)
{
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::invalid_input, "non-finite translation");
    }
    if (f.is_zero()) {
        return f;
    }
    const auto shifted = two_sum(f.origin(), -x);
    CertUpper slack = f.l1_slack();
    if (shifted.err != 0.0) {
        slack += cu_abs(shifted.err) * total_variation(f);
    }
    return PLFunction::from_local(shifted.sum, f.knots(), f.values(), slack);
}

PLFunction materialize(const PLFunction& f)
{
    if (f.origin() == 0.0 || f.is_zero()) {
        return f;
    }
    const auto& k = f.knots();
    const auto& v = f.values();
    std::vector<double> x(k.size());
    double charge = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto s = two_sum(f.origin(), k[i]);
        x[i] = s.sum;
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw Error(ErrorKind::invalid_input, "breakpoints collapse at this offset");
        }
        if (s.err != 0.0) {
            double around = (i > 0 ? mag(v[i] - v[i - 1]) : 0.0) + (i + 1 < k.size() ? mag(v[i + 1] - v[i]) : 0.0);
            charge = up(charge + up(std::abs(s.err) * up(around)));
        }
    }
    return PLFunction::from_points(std::move(x), v, f.l1_slack() + CertUpper(up(charge)));
}

PLFunction neg(const PLFunction& f)
{
    std::vector<complex> v = f.values();
    for (auto& c : v) {
        c = -c;
    }
    return PLFunction::from_local(f.origin(), f.knots(), std::move(v), f.l1_slack());
}

PLFunction scale(complex c, const PLFunction& f)
{
    if (!finite(c)) {
        throw Error(ErrorKind::invalid_input, "non-finite scale factor");
    }
    if (c == complex{}) {
        return PLFunction{};
    }
    std::vector<complex> v(f.size());
    std::vector<double> e(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        ErrorAccumulator acc;
        v[i] = mul_tracked(c, f.values()[i], acc);
        e[i] = acc.bound().value();
    }
    const CertUpper charge = value_error_charge(f.knots(), e);
    return PLFunction::from_local(f.origin(), f.knots(), std::move(v), cu_abs(c) * f.l1_slack() + charge);
}

PLFunction add(const PLFunction& f0, const PLFunction& g0)
{
    if (f0.is_zero()) {
        return g0.with_slack(g0.l1_slack() + f0.l1_slack());
    }
    if (g0.is_zero()) {
        return f0.with_slack(f0.l1_slack() + g0.l1_slack());
    }
    const PLFunction f = materialize(f0);
    const PLFunction g = materialize(g0);
    std::vector<double> x;
    x.reserve(f.size() + g.size());
    std::merge(f.knots().begin(), f.knots().end(), g.knots().begin(), g.knots().end(), std::back_inserter(x));
    x.erase(std::unique(x.begin(), x.end()), x.end());

    Walker wf(f.knots(), f.values());
    Walker wg(g.knots(), g.values());
    std::vector<complex> v(x.size());
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto [fv, fe] = wf.at(x[i]);
        auto [gv, ge] = wg.at(x[i]);
        v[i] = fv + gv;
        e[i] = fe + ge + 2.0 * kUlp * mag(v[i]);
    }
    v.front() = 0.0;
    v.back() = 0.0;
    const CertUpper charge = value_error_charge(x, e);
    return PLFunction::from_points(std::move(x), std::move(v), f.l1_slack() + g.l1_slack() + charge);
}

PLFunction sub(const PLFunction& f, const PLFunction& g)
{
    return add(f, neg(g));
}

namespace {

// Uniform grid from lo to hi with n segments; the last point is hi exactly.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> x(n + 1);
    const double step = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = lo + static_cast<double>(i) * step;
    }
    x[n] = hi;
    for (std::size_t i = 1; i <= n; ++i) {
        if (!(x[i] > x[i - 1])) {
            throw Error(ErrorKind::not_certified, "grid spacing below floating-point resolution");
        }
    }
    return x;
}

double max_spacing(const std::vector<double>& x)
{
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        m = std::max(m, x[i + 1] - x[i]);
    }
    return up(m);
}

std::size_t segments_for(double width, double spacing)
{
    double n = std::ceil(width / spacing);
    if (!(n <= static_cast<double>(std::size_t{1} << 26))) {
        throw Error(ErrorKind::not_certified, "grid too fine (more than 2^26 points)");
    }
    return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

} // namespace

PLFunction resample(const PLFunction& f0, double spacing)
{
    if (!(spacing > 0.0)) {
        throw Error(ErrorKind::invalid_input, "spacing must be positive");
    }
    if (f0.is_zero()) {
        return f0;
    }
    const PLFunction f = materialize(f0);
    const double lo = f.knots().front();
    const double hi = f.knots().back();
    std::vector<double> x = uniform_grid(lo, hi, segments_for(hi - lo, spacing));
    Walker w(f.knots(), f.values());
    std::vector<complex> v(x.size());
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::tie(v[i], e[i]) = w.at(x[i]);
    }
    v.front() = 0.0;
    v.back() = 0.0;
    const double d = max_spacing(x);
    const CertUpper interp = cu_div(CertUpper(up(d * d)) * slope_variation(f), 8.0);
    return PLFunction::from_points(x, std::move(v), f.l1_slack() + interp + value_error_charge(x, e));
}

namespace {

struct ConvolutionContext {
    const std::vector<double>& xs;
    const std::vector<complex>& fv;
    const std::vector<double>& zs;
    const std::vector<complex>& gv;
};

struct PointValue {
    complex value{};
    double abs_sum = 0.0;  // sum of |terms|
    std::size_t terms = 0;
};

// Exact (up to rounding) value of int f(x) g(y - x) dx for piecewise-linear f
// and g, by integrating the product exactly between merged breakpoints.
PointValue convolution_at(const ConvolutionContext& c, double y)
{
    const auto& xs = c.xs;
    const auto& zs = c.zs;
    const double L = std::max(xs.front(), y - zs.back());
    const double U = std::min(xs.back(), y - zs.front());
    PointValue out;
    if (!(L < U)) {
        return out;
    }
    const std::size_t nf = xs.size();
    const std::size_t ng = zs.size();

    // F walker: xs[fi] <= p; G walker: zs[gj] <= u for decreasing u.
    std::size_t fi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), L) - xs.begin());
    fi = std::min(fi > 0 ? fi - 1 : 0, nf - 2);
    std::size_t gj = static_cast<std::size_t>(std::upper_bound(zs.begin(), zs.end(), y - L) - zs.begin());
    gj = std::min(gj > 0 ? gj - 1 : 0, ng - 2);

    auto evalF = [&](double p) {
        while (fi + 2 < nf && xs[fi + 1] <= p) {
            ++fi;
        }
        return lerp(xs[fi], xs[fi + 1], c.fv[fi], c.fv[fi + 1], p);
    };
    auto evalG = [&](double u) {
        while (gj > 0 && zs[gj] > u) {
            --gj;
        }
        return lerp(zs[gj], zs[gj + 1], c.gv[gj], c.gv[gj + 1], u);
    };

    // Next f knot strictly inside (L, U), and next g knot whose image y - z is.
    std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), L) - xs.begin());
    std::ptrdiff_t j = (std::lower_bound(zs.begin(), zs.end(), y - L) - zs.begin()) - 1;

    double p0 = L;
    complex F0 = evalF(L);
    complex G0 = evalG(y - L);
    complex sum{};
    double abs_sum = 0.0;
    std::size_t terms = 0;
    auto segment = [&](double p1, complex F1, complex G1) {
        const double d = p1 - p0;
        if (d > 0.0) {
            const complex t = (2.0 * F0 * G0 + F0 * G1 + F1 * G0 + 2.0 * F1 * G1) * (d / 6.0);
            sum += t;
            const double a0 = mag(F0);
            const double a1 = mag(F1);
            const double b0 = mag(G0);
            const double b1 = mag(G1);
            abs_sum += (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1) * (d / 6.0);
            ++terms;
        }
        p0 = std::max(p0, p1);
        F0 = F1;
        G0 = G1;
    };

    while (true) {
        const bool has_f = i < nf && xs[i] < U;
        const double pg = j >= 0 ? y - zs[static_cast<std::size_t>(j)] : U;
        const bool has_g = j >= 0 && pg < U;
        if (!has_f && !has_g) {
            break;
        }
        if (has_f && (!has_g || xs[i] <= pg)) {
            const double p = xs[i];
            complex Gv = (has_g && pg == p) ? c.gv[static_cast<std::size_t>(j)] : evalG(y - p);
            if (has_g && pg == p) {
                --j;
            }
            segment(p, c.fv[i], Gv);
            ++i;
        } else {
            const complex Fv = evalF(std::max(pg, p0));
            segment(std::max(pg, p0), Fv, c.gv[static_cast<std::size_t>(j)]);
            --j;
        }
    }
    segment(U, evalF(U), evalG(y - U));
    out.value = sum;
    out.abs_sum = abs_sum;
    out.terms = terms;
    return out;
}

} // namespace

PLFunction convolve(const PLFunction& f0, const PLFunction& g0, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    }
    const PLFunction f = materialize(f0);
    const PLFunction g = materialize(g0);
    const CertUpper nf = norm_l1(f.with_slack({}));
    const CertUpper ng = norm_l1(g.with_slack({}));
    const CertUpper sf = f.l1_slack();
    const CertUpper sg = g.l1_slack();
    const CertUpper cross = sf * ng + sg * nf + sf * sg;
    if (f.is_zero() || g.is_zero()) {
        return PLFunction{}.with_slack(cross);
    }

    const CertUpper curvature = std::min(slope_variation(f) * ng, slope_variation(g) * nf);
    const double lo = std::nextafter(f.knots().front() + g.knots().front(), -INFINITY);
    const double hi = std::nextafter(f.knots().back() + g.knots().back(), INFINITY);
    double spacing = hi - lo;
    if (curvature.value() > 0.0) {
        spacing = std::min(spacing, 0.999 * std::sqrt(8.0 * 0.5 * tol / curvature.value()));
    }
    std::vector<double> y = uniform_grid(lo, hi, segments_for(hi - lo, spacing));

    const ConvolutionContext ctx{f.knots(), f.values(), g.knots(), g.values()};
    std::vector<complex> v(y.size());
    std::vector<double> e(y.size());
    const double reach = up(std::max(std::abs(f.knots().front()), std::abs(f.knots().back()))
                            + std::max(std::abs(g.knots().front()), std::abs(g.knots().back())));
    // Breakpoint placement and interpolation rounding, as a perturbation of f and g.
    const double lip_term = up(max_slope(g) * nf.value() + max_slope(f) * ng.value());
    const double sup_term = up(max_abs_value(f) * ng.value() + max_abs_value(g) * nf.value());
    parallel_for(y.size(), [&](std::size_t k) {
        const PointValue pv = convolution_at(ctx, y[k]);
        v[k] = pv.value;
        const double pos = 4.0 * kUlp * (std::abs(y[k]) + reach);
        e[k] = up(4.0 * kUlp * static_cast<double>(pv.terms + 16) * pv.abs_sum + pos * lip_term
                  + 32.0 * kUlp * sup_term);
    });
    // The grid ends lie outside the support, where the convolution vanishes.
    e.front() += mag(v.front());
    e.back() += mag(v.back());
    v.front() = 0.0;
    v.back() = 0.0;

    const double d = max_spacing(y);
    const CertUpper interp = cu_div(CertUpper(up(d * d)) * curvature, 8.0);
    const CertUpper rounding = value_error_charge(y, e);
    return PLFunction::from_points(std::move(y), std::move(v), interp + rounding + cross);
}

namespace {

// Integrals of exp(-i theta s) and s exp(-i theta s) over [0, 1].
void segment_moments(double theta, complex& A, complex& B)
{
    if (std::abs(theta) < 1.0) {
        const complex z(0.0, -theta);
        complex power = 1.0;  // z^k / k!
        A = 0.0;
        B = 0.0;
        for (int k = 0; k < 28; ++k) {
            A += power / static_cast<double>(k + 1);
            B += power / static_cast<double>(k + 2);
            power *= z / static_cast<double>(k + 1);
        }
        return;
    }
    const complex e = std::polar(1.0, -theta);
    const complex i(0.0, 1.0);
    A = (1.0 - e) / (i * theta);
    B = e * (i / theta + 1.0 / (theta * theta)) - 1.0 / (theta * theta);
}

} // namespace

FourierValue fourier_eval(const PLFunction& f, double p)
{
    if (!std::isfinite(p)) {
        throw Error(ErrorKind::invalid_input, "non-finite frequency");
    }
    const auto& x = f.knots();
    const auto& v = f.values();
    complex sum{};
    double scale_sum = 0.0;
    const double ap = std::abs(p);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        const double x0 = f.origin() + x[i];
        complex A;
        complex B;
        segment_moments(p * h, A, B);
        sum += h * std::polar(1.0, -p * x0) * (v[i] * A + (v[i + 1] - v[i]) * B);
        scale_sum += h * (mag(v[i]) + mag(v[i + 1])) * (1.0 + ap * (std::abs(x0) + h));
    }
    const double err = up(128.0 * kUlp * up(scale_sum * (1.0 + 1e-6)));
    return {sum, f.l1_slack() + CertUpper(err)};
}

namespace {

// The Fejer profile K(y) = (1/2pi) (sin(y/2)/(y/2))^2.
double fejer_profile(double y)
{
    const double a = std::abs(y);
    if (a < 1e-4) {
        return (1.0 - a * a / 12.0) / (2.0 * kPi);
    }
    const double s = std::sin(0.5 * a) / (0.5 * a);
    return s * s / (2.0 * kPi);
}

// Upper bound on |K''| over |y| >= a.
double fejer_curvature(double a)
{
    const double near = 1.0 / (12.0 * kPi);
    if (a <= 0.0) {
        return up(near);
    }
    const double far = (a * a + 4.0 * a + 12.0) / (kPi * a * a * a * a);
    return up(up(std::min(near, far)));
}

} // namespace

PLFunction fejer_kernel(double lambda, double support_tol)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::invalid_input, "lambda must be positive");
    }
    if (!(support_tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "support tolerance must be positive");
    }
    // All of the construction is scale invariant in y = lambda x.
    const double reach = up(4.0 / (kPi * support_tol));
    const double budget = 4.0 * support_tol;
    double s0 = std::sqrt(budget / 0.12);
    for (int attempt = 0; attempt < 60; ++attempt, s0 *= 0.8) {
        std::vector<double> pos{0.0};
        while (pos.back() * lambda < reach || pos.size() < 2) {
            const double yk = pos.back() * lambda;
            const double step = s0 * std::max(1.0, std::sqrt(yk / 5.0));
            pos.push_back((yk + step) / lambda);
        }
        const double last = pos.back();
        pos.push_back((last * lambda + s0 * std::max(1.0, std::sqrt(last * lambda / 5.0))) / lambda);

        const std::size_t n = pos.size();
        std::vector<double> x(2 * n - 1);
        std::vector<complex> v(2 * n - 1);
        for (std::size_t k = 0; k < n; ++k) {
            const double val = k + 1 == n ? 0.0 : lambda * fejer_profile(lambda * pos[k]);
            x[n - 1 + k] = pos[k];
            x[n - 1 - k] = -pos[k];
            v[n - 1 + k] = val;
            v[n - 1 - k] = val;
        }

        // Interpolation error on [-last, last] (both halves).
        double disc = 0.0;
        for (std::size_t k = 0; k + 2 < n; ++k) {
            const double H = up(up(pos[k + 1] - pos[k]) * lambda);
            const double ymin = deflate(pos[k] * lambda);
            disc = up(disc + up(up(H * H * H) / 12.0 * fejer_curvature(ymin)));
        }
        disc = up(2.0 * disc);
        if (disc > budget) {
            continue;
        }
        const double y_last = deflate(last * lambda);
        const double tail = up(4.0 / (kPi * y_last));
        const double ramp = up(v[2 * n - 3].real() * up(pos[n - 1] - pos[n - 2]));
        std::vector<double> e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            e[i] = 16.0 * kUlp * v[i].real();
        }
        const CertUpper slack = CertUpper(tail) + CertUpper(disc) + CertUpper(ramp) + value_error_charge(x, e);
        return PLFunction::from_points(std::move(x), std::move(v), slack);
    }
    throw Error(ErrorKind::not_certified, "Fejer discretization did not reach its budget");
}

PLFunction dlvp_kernel(double lambda, double support_tol)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::invalid_input, "lambda must be positive");
    }
    const PLFunction wide = fejer_kernel(2.0 * lambda, support_tol / 3.0);
    const PLFunction narrow = fejer_kernel(lambda, support_tol / 3.0);
    return sub(scale(2.0, wide), narrow);
}

PLFunction spectrum_compactify(const PLFunction& g, double lambda, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    }
    if (g.is_zero()) {
        return g;
    }
    const double gn = norm_l1(g.with_slack({})).value();
    const PLFunction kernel = fejer_kernel(lambda, tol / (20.0 * std::max(1.0, gn)));
    return convolve(kernel, g, 0.5 * tol);
}

SpectrumReport certify_spectrum_lower_bound(const PLFunction& f, double band, double eps, std::size_t max_grid)
{
    if (!(band >= 0.0) || !(eps > 0.0)) {
        throw Error(ErrorKind::invalid_input, "band must be nonnegative and epsilon positive");
    }
    SpectrumReport rep;
    rep.band = band;
    rep.epsilon = eps;
    rep.lipschitz = first_moment(f).value();
    for (std::size_t N = 16; N <= max_grid; N *= 2) {
        const double step = 2.0 * band / static_cast<double>(N);
        const double radius = up(up(0.5 * step) + 4.0 * kUlp * band);
        const double lip_slack = up(rep.lipschitz * radius);
        std::vector<double> lower(N);
        std::vector<double> where(N);
        parallel_for(N, [&](std::size_t i) {
            const double p = -band + (static_cast<double>(i) + 0.5) * step;
            const FourierValue fv = fourier_eval(f, p);
            where[i] = p;
            lower[i] = deflate(mag(fv.value)) - fv.err.value() - lip_slack;
        });
        rep.grid = N;
        const auto it = std::min_element(lower.begin(), lower.end());
        rep.min_lower = deflate(*it);
        rep.worst_p = where[static_cast<std::size_t>(it - lower.begin())];
        if (rep.min_lower >= eps) {
            rep.certified = true;
            return rep;
        }
        if (band == 0.0) {
            break;
        }
    }
    return rep;
}

namespace {

// Approximate transform on the grid p_j = p0 + j dp (no certificate), from
// f^(p) = -(1/p^2) sum sigma_i exp(-i p x_i) where sigma_i are the slope
// jumps; frequencies close to 0 use the closed form instead.
std::vector<complex> fourier_grid(const PLFunction& f0, double p0, double dp, std::size_t count)
{
    const PLFunction f = materialize(f0);
    std::vector<complex> out(count);
    if (f.is_zero()) {
        return out;
    }
    const auto& x = f.knots();
    const auto& v = f.values();
    std::vector<complex> sigma(x.size());
    {
        complex prev{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            complex next = i + 1 < x.size() ? (v[i + 1] - v[i]) / (x[i + 1] - x[i]) : complex{};
            sigma[i] = next - prev;
            prev = next;
        }
    }
    constexpr std::size_t chunk = 256;
    const std::size_t chunks = (count + chunk - 1) / chunk;
    const double near_zero = 1e-2;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t j0 = c * chunk;
        const std::size_t j1 = std::min(count, j0 + chunk);
        std::vector<complex> acc(j1 - j0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            complex z = std::polar(1.0, -(p0 + static_cast<double>(j0) * dp) * x[i]);
            const complex r = std::polar(1.0, -dp * x[i]);
            for (std::size_t j = j0; j < j1; ++j) {
                acc[j - j0] += sigma[i] * z;
                z *= r;
            }
        }
        for (std::size_t j = j0; j < j1; ++j) {
            const double p = p0 + static_cast<double>(j) * dp;
            out[j] = std::abs(p) < near_zero ? fourier_eval(f, p).value : -acc[j - j0] / (p * p);
        }
    });
    return out;
}

} // namespace

TauberianResult tauberian_divide(const PLFunction& f, const PLFunction& g, double band, double eps, double tol,
                                 const TauberianOptions& opts)
{
    if (!(band > 0.0) || !(eps > 0.0) || !(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "band, epsilon and tol must be positive");
    }
    TauberianResult out;
    if (g.is_zero()) {
        out.residual = norm_l1(sub(convolve(f, PLFunction{}, tol), g));
        if (out.residual.value() > tol) {
            throw Error(ErrorKind::not_certified, "division not certified: best residual " + fmt(out.residual.value()));
        }
        return out;
    }
    if (f.is_zero()) {
        throw Error(ErrorKind::hypothesis_failed, "hypothesis not certified: f is zero");
    }
    out.hypothesis = certify_spectrum_lower_bound(f, band, eps);
    if (!out.hypothesis.certified) {
        throw Error(ErrorKind::hypothesis_failed,
                    "hypothesis not certified: |f^| lower bound " + fmt(out.hypothesis.min_lower) + " < epsilon "
                        + fmt(eps) + " near p = " + fmt(out.hypothesis.worst_p) + " (grid "
                        + std::to_string(out.hypothesis.grid) + ")");
    }
    const double L = out.hypothesis.lipschitz;
    const double wide = band + (L > 0.0 ? std::min(eps / (2.0 * L), 0.5 * band) : 0.5 * band);
    out.extended_band = wide;

    const PLFunction F = materialize(f);
    const PLFunction G = materialize(g);
    const double center = 0.5 * (G.support_lo() + G.support_hi()) - 0.5 * (F.support_lo() + F.support_hi());
    double half_width = 0.5 * (G.support_hi() - G.support_lo());
    double dx = 1.0 / (4.0 * wide);
    double tol_c = 0.25 * tol;
    double best = INFINITY;

    for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
        const double dp_target = kPi / (2.0 * half_width);
        std::size_t J = static_cast<std::size_t>(std::ceil(2.0 * wide / dp_target));
        J = std::clamp<std::size_t>(J, 8, opts.max_frequency_grid);
        const double dp = 2.0 * wide / static_cast<double>(J);

        const std::vector<complex> fh = fourier_grid(F, -wide, dp, J + 1);
        const std::vector<complex> gh = fourier_grid(G, -wide, dp, J + 1);
        std::vector<complex> coef(J + 1);
        for (std::size_t j = 0; j <= J; ++j) {
            const double p = -wide + static_cast<double>(j) * dp;
            const double ap = std::abs(p);
            double w = ap <= band ? 1.0 : std::max(0.0, (wide - ap) / (wide - band));
            if (j == 0 || j == J) {
                w = 0.0;
            }
            coef[j] = w == 0.0 ? complex{} : gh[j] * w / fh[j] * (dp / (2.0 * kPi));
        }

        const double x_lo = center - half_width;
        const std::size_t n = segments_for(2.0 * half_width, dx);
        std::vector<double> xs = uniform_grid(x_lo, center + half_width, n);
        std::vector<complex> ks(xs.size());
        constexpr std::size_t chunk = 256;
        const std::size_t chunks = (xs.size() + chunk - 1) / chunk;
        const double step = xs[1] - xs[0];
        parallel_for(chunks, [&](std::size_t c) {
            const std::size_t m0 = c * chunk;
            const std::size_t m1 = std::min(xs.size(), m0 + chunk);
            for (std::size_t j = 0; j <= J; ++j) {
                if (coef[j] == complex{}) {
                    continue;
                }
                const double p = -wide + static_cast<double>(j) * dp;
                complex z = coef[j] * std::polar(1.0, p * xs[m0]);
                const complex r = std::polar(1.0, p * step);
                for (std::size_t m = m0; m < m1; ++m) {
                    ks[m] += z;
                    z *= r;
                }
            }
        });
        ks.front() = 0.0;
        ks.back() = 0.0;
        PLFunction k = PLFunction::from_points(std::move(xs), std::move(ks));

        const CertUpper residual = norm_l1(sub(convolve(F, k, tol_c), G));
        best = std::min(best, residual.value());
        out.k = std::move(k);
        out.residual = residual;
        out.frequency_points = J + 1;
        out.spatial_step = step;
        out.attempts = attempt;
        if (residual.value() <= tol) {
            return out;
        }
        half_width *= 2.0;
        dx *= 0.5;
        tol_c *= 0.5;
    }
    throw Error(ErrorKind::not_certified, "division not certified: best residual " + fmt(best) + " > tol " + fmt(tol));
}

void write_csv(std::ostream& os, const PLFunction& f)
{
    os << "x,re,im\n";
    const std::vector<double> x = f.breakpoints();
    char buf[96];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[i], f.values()[i].real(), f.values()[i].imag());
        os << buf;
    }
}

} // namespace wiener
