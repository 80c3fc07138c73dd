#ifndef WIENER_L1Z_HPP
#define WIENER_L1Z_HPP

#include "wiener/cert_numeric.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace wiener {

using Index = std::int64_t;

struct Term {
    Index n = 0;
    complex c{};

    friend bool operator==(const Term&, const Term&) = default;
};

/// An element of l1(Z) known up to a certified l1 distance.
///
/// The finite coefficient part is stored sorted by index with no explicit
/// zeros. The object represents every sequence a with
/// sum_n |a_n - coeff(n)| <= tail().
class L1ZSeq {
public:
    L1ZSeq() = default;

    /// Builds a sequence from terms in any order. Duplicate indices or
    /// non-finite coefficients throw Error(invalid_input).
    static L1ZSeq from_terms(std::vector<Term> terms, CertUpper tail = {});

    const std::vector<Term>& terms() const noexcept { return terms_; }
    CertUpper tail() const noexcept { return tail_; }
    complex coeff(Index n) const;

    bool empty() const noexcept { return terms_.empty(); }
    std::size_t support_size() const noexcept { return terms_.size(); }
    Index min_index() const;
    Index max_index() const;
    /// Largest |n| over the support (0 for an empty support).
    Index support_radius() const;

    /// Same coefficients with tail 0: the concrete finite element.
    L1ZSeq finite_part() const;
    L1ZSeq with_tail(CertUpper tail) const;

    friend bool operator==(const L1ZSeq&, const L1ZSeq&) = default;

private:
    std::vector<Term> terms_;
    CertUpper tail_{};
};

L1ZSeq delta(Index n, complex c = 1.0);

L1ZSeq add(const L1ZSeq& a, const L1ZSeq& b);
L1ZSeq sub(const L1ZSeq& a, const L1ZSeq& b);
L1ZSeq neg(const L1ZSeq& a);
L1ZSeq scale(complex c, const L1ZSeq& a);
/// Multiplication by a scalar known only up to |c_true - c| <= c_err.
L1ZSeq scale(complex c, CertUpper c_err, const L1ZSeq& a);

/// Convolution product. The coefficient part is computed in a fixed order and
/// its rounding error, together with the tail cross terms
/// tail_a*|b| + tail_b*|a| + tail_a*tail_b, goes into the result's tail.
L1ZSeq convolve(const L1ZSeq& a, const L1ZSeq& b);

inline L1ZSeq operator+(const L1ZSeq& a, const L1ZSeq& b) { return add(a, b); }
inline L1ZSeq operator-(const L1ZSeq& a, const L1ZSeq& b) { return sub(a, b); }
inline L1ZSeq operator-(const L1ZSeq& a) { return neg(a); }
inline L1ZSeq operator*(const L1ZSeq& a, const L1ZSeq& b) { return convolve(a, b); }
inline L1ZSeq operator*(complex c, const L1ZSeq& a) { return scale(c, a); }

CertUpper norm_upper(const L1ZSeq& a);

/// Value of the symbol a(lambda) = sum a_n lambda^n on the unit circle.
struct CircleValue {
    complex value{};
    CertUpper err{};  ///< bounds the tail plus evaluation rounding
};

/// lambda must satisfy ||lambda| - 1| <= 1e-12; it is normalized internally.
CircleValue eval_circle(const L1ZSeq& a, complex lambda);

/// Upper bound L with |a(lambda) - a(mu)| <= L |lambda - mu| on the circle,
/// namely sum |n| |a_n|. Requires a tail-free sequence.
CertUpper circle_lipschitz_upper(const L1ZSeq& a);

/// Drops coefficients of smallest modulus (ties: smaller |n|, then n > 0
/// first) as long as the dropped l1 mass stays <= budget; the dropped mass
/// is added to the tail.
L1ZSeq truncate(const L1ZSeq& a, double budget);

/// Keeps only indices for which keep(n) holds; the dropped mass goes into
/// the tail.
L1ZSeq truncate(const L1ZSeq& a, const std::function<bool(Index)>& keep);

/// Evaluation of the finite part at the N-th roots of unity
/// exp(2 pi i k / N), k = 0..N-1, with per-point rounding bounds (tail not
/// included). Angles are reduced exactly modulo N.
struct RootGridValues {
    std::vector<complex> values;
    std::vector<double> rounding;
};
RootGridValues eval_roots_of_unity(const L1ZSeq& a, std::size_t N);

/// exp(2 pi i j / N) computed as polar(1, (2 pi j) / N).
complex root_of_unity(std::size_t j, std::size_t N);

} // namespace wiener

#endif // WIENER_L1Z_HPP
