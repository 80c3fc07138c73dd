#ifndef WIENER_CERT_NUMERIC_HPP
#define WIENER_CERT_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>

namespace wiener {

using complex = std::complex<double>;

// Unit of least precision at 1, and the multiplicative slack applied to every
// rounded result that feeds a certified upper bound.
inline constexpr double kUlp = 0x1p-52;
inline constexpr double kSlack = 1.0 + 4.0 * kUlp;

/// Rounds a nonnegative computed quantity upward so that it dominates the
/// exact value it approximates (one rounding step of relative error <= ulp).
/// Subnormal results are lifted to the smallest normal number.
inline double inflate(double x)
{
    if (x == 0.0) {
        return 0.0;
    }
    if (x < std::numeric_limits<double>::min()) {
        return std::numeric_limits<double>::min();
    }
    return x * kSlack;
}

/// Rounds a nonnegative computed quantity downward (lower-bound counterpart
/// of inflate). Never returns a negative number for a nonnegative input.
inline double deflate(double x)
{
    if (x <= std::numeric_limits<double>::min()) {
        return x > 0.0 ? 0.0 : x;
    }
    return x * (1.0 - 4.0 * kUlp);
}

/// A certified upper bound on a nonnegative real quantity.
///
/// This is the computational stand-in for an upper real: the exact quantity
/// is only known to lie in [0, value()]. All arithmetic rounds outward.
class CertUpper {
public:
    constexpr CertUpper() = default;

    /// Throws Error(invalid_input) for negative or NaN values and
    /// Error(bound_overflow) for infinities.
    explicit CertUpper(double value);

    double value() const noexcept { return value_; }

    static CertUpper zero() noexcept { return CertUpper{}; }

    friend bool operator==(CertUpper a, CertUpper b) noexcept { return a.value_ == b.value_; }
    friend auto operator<=>(CertUpper a, CertUpper b) noexcept { return a.value_ <=> b.value_; }

private:
    double value_ = 0.0;
};

CertUpper cu_add(CertUpper a, CertUpper b);
CertUpper cu_mul(CertUpper a, CertUpper b);

/// Left-to-right sum of moduli, every partial sum rounded upward.
CertUpper cu_sum_abs(std::span<const complex> xs);

/// Upper bound on |z|.
CertUpper cu_abs(complex z);

/// Upper bound on |x| for a real number.
CertUpper cu_abs(double x);

/// Upper bound on num / den where num is an upper bound and den a lower bound
/// of the respective exact quantities; den must be positive.
CertUpper cu_div(CertUpper num, double den_lower);

/// Upper bound on x^n for x >= 0.
CertUpper cu_pow(CertUpper x, unsigned n);

inline CertUpper operator+(CertUpper a, CertUpper b) { return cu_add(a, b); }
inline CertUpper operator*(CertUpper a, CertUpper b) { return cu_mul(a, b); }
inline CertUpper& operator+=(CertUpper& a, CertUpper b) { return a = cu_add(a, b); }

// Error-free transforms. Valid in round-to-nearest without fp contraction.

struct SumAndError {
    double sum;
    double err;
};

inline SumAndError two_sum(double a, double b) noexcept
{
    double s = a + b;
    double bv = s - a;
    double av = s - bv;
    return {s, (a - av) + (b - bv)};
}

/// Magnitude bound on the rounding error of fl(a*b), exact unless the product
/// is near the underflow threshold, in which case the smallest normal is added.
inline double prod_error(double a, double b, double p) noexcept
{
    double e = std::abs(std::fma(a, b, -p));
    if (a != 0.0 && b != 0.0 && std::abs(p) < 0x1p-969) {
        e += std::numeric_limits<double>::min();
    }
    return e;
}

/// Accumulates nonnegative rounding-error magnitudes and returns a certified
/// upper bound of their exact sum.
class ErrorAccumulator {
public:
    void add(double e) noexcept
    {
        sum_ += e;
        ++count_;
    }

    void merge(const ErrorAccumulator& other) noexcept
    {
        sum_ += other.sum_;
        count_ += other.count_ + 1;
    }

    CertUpper bound() const;

private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

/// Complex product with its rounding error accumulated into `acc` (in the
/// |re| + |im| sense, which dominates the modulus).
inline complex mul_tracked(complex a, complex b, ErrorAccumulator& acc) noexcept
{
    double p1 = a.real() * b.real();
    double p2 = a.imag() * b.imag();
    double p3 = a.real() * b.imag();
    double p4 = a.imag() * b.real();
    auto re = two_sum(p1, -p2);
    auto im = two_sum(p3, p4);
    acc.add(prod_error(a.real(), b.real(), p1) + prod_error(a.imag(), b.imag(), p2)
            + prod_error(a.real(), b.imag(), p3) + prod_error(a.imag(), b.real(), p4)
            + std::abs(re.err) + std::abs(im.err));
    return {re.sum, im.sum};
}

inline complex add_tracked(complex a, complex b, ErrorAccumulator& acc) noexcept
{
    auto re = two_sum(a.real(), b.real());
    auto im = two_sum(a.imag(), b.imag());
    acc.add(std::abs(re.err) + std::abs(im.err));
    return {re.sum, im.sum};
}

/// A complex number known up to a certified radius: the scalar algebra C with
/// the same outward-rounding discipline as the sequence algebras.
struct CertScalar {
    complex value{};
    CertUpper radius{};
};

CertScalar add(const CertScalar& a, const CertScalar& b);
CertScalar scale(complex c, const CertScalar& a);
CertScalar convolve(const CertScalar& a, const CertScalar& b);
CertUpper norm_upper(const CertScalar& a);

} // namespace wiener

#endif // WIENER_CERT_NUMERIC_HPP
