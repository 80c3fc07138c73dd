#include "wiener/cert_numeric.hpp"

#include "wiener/error.hpp"

#include <string>

namespace wiener {

namespace {

CertUpper checked(double v)
{
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::bound_overflow, "bound overflow");
    }
    return CertUpper(v);
}

// a + b rounded up; exact sums are returned unchanged.
double add_up(double a, double b)
{
    SumAndError t = two_sum(a, b);
    return t.err == 0.0 ? t.sum : inflate(t.sum);
}

} // namespace

CertUpper::CertUpper(double value) : value_(value)
{
    if (std::isnan(value) || value < 0.0) {
        throw Error(ErrorKind::invalid_input, "certified bound must be a nonnegative number, got "
                                                  + std::to_string(value));
    }
    if (std::isinf(value)) {
        throw Error(ErrorKind::bound_overflow, "bound overflow");
    }
}

CertUpper cu_add(CertUpper a, CertUpper b)
{
    return checked(add_up(a.value(), b.value()));
}

CertUpper cu_mul(CertUpper a, CertUpper b)
{
    if (a.value() == 0.0 || b.value() == 0.0) {
        return CertUpper::zero();
    }
    double p = a.value() * b.value();
    if (p < std::numeric_limits<double>::min()) {
        return CertUpper(std::numeric_limits<double>::min());
    }
    if (std::isfinite(p) && std::fma(a.value(), b.value(), -p) == 0.0) {
        return CertUpper(p);
    }
    return checked(inflate(p));
}

CertUpper cu_abs(complex z)
{
    if (std::isnan(z.real()) || std::isnan(z.imag())) {
        throw Error(ErrorKind::invalid_input, "NaN in certified computation");
    }
    if (z.imag() == 0.0) {
        return checked(std::abs(z.real()));
    }
    if (z.real() == 0.0) {
        return checked(std::abs(z.imag()));
    }
    return checked(inflate(std::hypot(z.real(), z.imag())));
}

CertUpper cu_abs(double x)
{
    if (std::isnan(x)) {
        throw Error(ErrorKind::invalid_input, "NaN in certified computation");
    }
    return checked(std::abs(x));
}

CertUpper cu_sum_abs(std::span<const complex> xs)
{
    double s = 0.0;
    for (const complex& x : xs) {
        s = add_up(s, cu_abs(x).value());
    }
    return checked(s);
}

CertUpper cu_div(CertUpper num, double den_lower)
{
    if (!(den_lower > 0.0)) {
        throw Error(ErrorKind::invalid_input, "division by a nonpositive lower bound");
    }
    if (num.value() == 0.0) {
        return CertUpper::zero();
    }
    double q = num.value() / den_lower;
    if (q < std::numeric_limits<double>::min()) {
        return CertUpper(std::numeric_limits<double>::min());
    }
    if (std::isfinite(q) && std::fma(q, den_lower, -num.value()) == 0.0) {
        return CertUpper(q);
    }
    return checked(inflate(q));
}

CertUpper cu_pow(CertUpper x, unsigned n)
{
    CertUpper r(1.0);
    for (unsigned i = 0; i < n; ++i) {
        r = cu_mul(r, x);
    }
    return r;
}

CertUpper ErrorAccumulator::bound() const
{
    if (sum_ == 0.0) {
        return CertUpper::zero();
    }
    double factor = 1.0 + 2.0 * static_cast<double>(count_ + 1) * kUlp;
    return checked(inflate(inflate(sum_) * factor));
}

CertScalar add(const CertScalar& a, const CertScalar& b)
{
    ErrorAccumulator acc;
    complex v = add_tracked(a.value, b.value, acc);
    return {v, a.radius + b.radius + acc.bound()};
}

CertScalar scale(complex c, const CertScalar& a)
{
    ErrorAccumulator acc;
    complex v = mul_tracked(c, a.value, acc);
    return {v, cu_abs(c) * a.radius + acc.bound()};
}

CertScalar convolve(const CertScalar& a, const CertScalar& b)
{
    ErrorAccumulator acc;
    complex v = mul_tracked(a.value, b.value, acc);
    CertUpper r = cu_abs(a.value) * b.radius + cu_abs(b.value) * a.radius + a.radius * b.radius;
    return {v, r + acc.bound()};
}

CertUpper norm_upper(const CertScalar& a)
{
    return cu_abs(a.value) + a.radius;
}

} // namespace wiener
