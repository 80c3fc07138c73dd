#ifndef WIENER_INVERSION_HPP
#define WIENER_INVERSION_HPP

#include "wiener/cert_numeric.hpp"
#include "wiener/l1z.hpp"

#include <cstddef>
#include <vector>

namespace wiener {

struct CertificateParams {
    std::size_t grid = 0;    ///< circle sampling size used for the seed
    std::size_t degree = 0;  ///< degree the seed was truncated to
    double target = 0.0;
};

/// Witness of invertibility: residual < 1 means |1 - f*witness| < 1, hence f
/// is invertible with inverse witness * sum (1 - f*witness)^n.
struct InversionCertificate {
    L1ZSeq witness;
    CertUpper residual;
    CertificateParams params;
};

/// Recomputes |delta0 - f*witness| from scratch.
CertUpper recompute_residual(const L1ZSeq& f, const L1ZSeq& witness);

/// l1 distance between the true inverse of f and the witness,
/// bounded by residual * |witness| / (1 - residual). Requires residual < 1.
CertUpper inverse_distance_bound(const InversionCertificate& cert);

struct InversionResult {
    L1ZSeq inverse;
    InversionCertificate cert;
    std::vector<double> residual_history;  ///< certified residual after each step
};

/// Neumann series sum_{n<=K} (delta0 - x)^n. Throws
/// Error(hypothesis_failed) when |delta0 - x| >= 1.
InversionResult neumann_invert(const L1ZSeq& x, double target);

/// Bound M/(1-c) for the inverse of a - u when |a^-1| <= M and |u| <= c/M.
CertUpper perturb_invert_bound(CertUpper M, CertUpper u_norm, double c);

/// Newton iteration x <- x*(2 delta0 - f*x). Every iterate is a concrete
/// finite element; small coefficients are dropped within target/(4 max(1,|f|))
/// and the residual is recertified from scratch at each step.
InversionResult newton_refine(const L1ZSeq& f, const L1ZSeq& x0, double target, int max_iter = 64);

struct MinModulusReport {
    bool certified = false;
    std::size_t grid = 0;
    double epsilon = 0.0;
    double min_lower = 0.0;      ///< smallest certified lower bound over the grid
    std::size_t worst_index = 0;
    complex worst_lambda{};
    double slack = 0.0;          ///< tail + Lipschitz * pi / N
};

/// Proves |f(lambda)| >= eps on the whole circle from the N-point grid, or
/// reports the grid point where the certified lower bound is smallest.
MinModulusReport circle_min_modulus_certify(const L1ZSeq& f, double eps, std::size_t N);

struct WienerOptions {
    std::size_t initial_grid = 64;
    std::size_t max_grid = std::size_t{1} << 20;
    std::size_t max_degree = std::size_t{1} << 20;
    int max_newton_iter = 64;

    /// Defaults with max_grid capped by the WIENER_MAX_GRID environment variable.
    static WienerOptions from_environment();
};

/// Doubles the grid from opts.initial_grid until the certificate succeeds or
/// opts.max_grid is exceeded; returns the last report either way.
MinModulusReport certify_min_modulus(const L1ZSeq& f, double eps, const WienerOptions& opts);

struct WienerResult {
    L1ZSeq inverse;
    InversionCertificate cert;
    MinModulusReport hypothesis;
};

/// Inverse of f in l1(Z) with a certified residual <= target. The hypothesis
/// |f| >= eps on the circle is certified first (Error(hypothesis_failed) if it
/// cannot be); the seed comes from sampling 1/f on the circle, and Newton
/// steps finish the job (Error(not_certified) if the caps are reached).
WienerResult wiener_invert(const L1ZSeq& f, double eps, double target,
                           const WienerOptions& opts = WienerOptions::from_environment());

/// Upper bound on the quotient norm of a in B/<g>, witnessed by g*k.
CertUpper quotient_norm_upper(const L1ZSeq& a, const L1ZSeq& g, const L1ZSeq& k);

} // namespace wiener

#endif // WIENER_INVERSION_HPP
