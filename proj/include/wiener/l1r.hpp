#ifndef WIENER_L1R_HPP
#define WIENER_L1R_HPP

#include "wiener/cert_numeric.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace wiener {

/// A compactly supported continuous piecewise-linear function on R, known up
/// to a certified L1 distance l1_slack().
///
/// Breakpoints are stored as origin() + knots()[i]. The values at the first
/// and last knot are 0 and the function vanishes outside. The zero function
/// has no knots.
class PLFunction {
public:
    PLFunction() = default;

    /// Validates: at least two strictly increasing finite breakpoints (or
    /// none, for zero), finite values, and zero values at both ends.
    static PLFunction from_points(std::vector<double> breakpoints, std::vector<complex> values,
                                  CertUpper slack = {});
    static PLFunction from_local(double origin, std::vector<double> knots, std::vector<complex> values,
                                 CertUpper slack = {});

    double origin() const noexcept { return origin_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<complex>& values() const noexcept { return values_; }
    CertUpper l1_slack() const noexcept { return slack_; }

    bool is_zero() const noexcept { return knots_.empty(); }
    std::size_t size() const noexcept { return knots_.size(); }

    /// origin + knot, rounded to nearest.
    std::vector<double> breakpoints() const;
    double support_lo() const;
    double support_hi() const;

    PLFunction with_slack(CertUpper slack) const;

    /// Value of the represented piecewise-linear function (no certificate).
    complex operator()(double x) const;

    friend bool operator==(const PLFunction&, const PLFunction&) = default;

private:
    double origin_ = 0.0;
    std::vector<double> knots_;
    std::vector<complex> values_;
    CertUpper slack_{};
};

/// height * max(1 - |x - center| / half_width, 0).
PLFunction triangle(double center = 0.0, double half_width = 1.0, complex height = 1.0);

/// Certified upper bound on the L1 norm: exact closed form on real segments,
/// 64-panel trapezoid (an upper bound by convexity) on complex ones, plus
/// l1_slack.
CertUpper norm_l1(const PLFunction& f);

/// sum |v_{i+1} - v_i|, the total variation of the piecewise-linear part.
CertUpper total_variation(const PLFunction& f);

/// Total variation of f', i.e. the mass of f'' as a measure.
CertUpper slope_variation(const PLFunction& f);

/// int |x| |f(x)| dx for the piecewise-linear part: a Lipschitz constant of
/// the Fourier transform.
CertUpper first_moment(const PLFunction& f);

/// T_x(f)(y) = f(x + y): the support moves by -x. Exact on the knots; when
/// the new origin is not representable the shift error d is charged as
/// |d| * TV(f).
PLFunction translate(const PLFunction& f, double x);

/// Same function with origin 0. Rounding of breakpoints is charged to the
/// slack.
PLFunction materialize(const PLFunction& f);

PLFunction add(const PLFunction& f, const PLFunction& g);
PLFunction sub(const PLFunction& f, const PLFunction& g);
PLFunction neg(const PLFunction& f);
PLFunction scale(complex c, const PLFunction& f);

/// Interpolation of f on a uniform grid of spacing at most `spacing`,
/// with error spacing^2/8 * TV(f') charged to the slack.
PLFunction resample(const PLFunction& f, double spacing);

/// Certified convolution. The exact convolution of two piecewise-linear
/// functions is C^1 and piecewise cubic; it is evaluated exactly at the
/// points of a uniform grid and interpolated, with L1 error
/// spacing^2/8 * min(TV(f')|g|, TV(g')|f|) <= tol. Slacks contribute
/// slack_f |g| + slack_g |f| + slack_f slack_g.
PLFunction convolve(const PLFunction& f, const PLFunction& g, double tol);

struct FourierValue {
    complex value{};
    CertUpper err{};
};

/// f^(p) = int f(x) exp(-ipx) dx, in closed form per segment.
FourierValue fourier_eval(const PLFunction& f, double p);

/// K_lambda(x) = lambda K(lambda x), K(x) = (1/2pi) (sin(x/2)/(x/2))^2,
/// truncated where the discarded mass is <= support_tol and interpolated
/// with error <= 4 support_tol. Its transform is max(1 - |t|/lambda, 0).
PLFunction fejer_kernel(double lambda, double support_tol);

/// V_lambda = 2 K_{2 lambda} - K_lambda, whose transform is 1 on
/// [-lambda, lambda] and 0 beyond 2 lambda.
PLFunction dlvp_kernel(double lambda, double support_tol);

/// K_lambda * g, whose transform is (1 - |t|/lambda) g^(t) on [-lambda,
/// lambda] and 0 outside, up to the slack.
PLFunction spectrum_compactify(const PLFunction& g, double lambda, double tol);

struct SpectrumReport {
    bool certified = false;
    double band = 0.0;
    double epsilon = 0.0;
    std::size_t grid = 0;       ///< frequency samples on [-band, band]
    double min_lower = 0.0;     ///< smallest certified lower bound of |f^|
    double worst_p = 0.0;
    double lipschitz = 0.0;     ///< first moment of f
};

/// Proves |f^(p)| >= eps on [-band, band] from grid samples and the
/// Lipschitz bound |f^(p) - f^(q)| <= first_moment(f) |p - q|, doubling the
/// grid up to max_grid.
SpectrumReport certify_spectrum_lower_bound(const PLFunction& f, double band, double eps,
                                            std::size_t max_grid = std::size_t{1} << 16);

struct TauberianOptions {
    int max_attempts = 4;
    std::size_t max_frequency_grid = std::size_t{1} << 18;
};

struct TauberianResult {
    PLFunction k;
    CertUpper residual;        ///< certified |f*k - g|_1
    SpectrumReport hypothesis;
    double extended_band = 0.0;
    std::size_t frequency_points = 0;
    double spatial_step = 0.0;
    int attempts = 0;
};

/// Finds k with |f*k - g|_1 <= tol. The hypothesis |f^| >= eps on [-M, M] is
/// certified first (Error(hypothesis_failed, "hypothesis not certified"));
/// k^ = g^ w / f^ on a frequency grid, with w a trapezoid equal to 1 on
/// [-M, M], is synthesized by the inversion formula and the residual is
/// certified. Error(not_certified, "division not certified") if tol is not
/// reached.
TauberianResult tauberian_divide(const PLFunction& f, const PLFunction& g, double band, double eps,
                                 double tol, const TauberianOptions& opts = {});

/// CSV with header x,re,im and one line per breakpoint.
void write_csv(std::ostream& os, const PLFunction& f);

} // namespace wiener

#endif // WIENER_L1R_HPP
