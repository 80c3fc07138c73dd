#include "wiener/l1z.hpp"

#include "wiener/error.hpp"
#include "wiener/parallel.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <string>

namespace wiener {

namespace {

bool finite(complex c)
{
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

// Dense accumulation is used while the output index span stays below this.
constexpr Index kDenseSpanLimit = Index{1} << 24;

} // namespace

L1ZSeq L1ZSeq::from_terms(std::vector<Term> terms, CertUpper tail)
{
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.n < y.n; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!finite(terms[i].c)) {
            throw Error(ErrorKind::invalid_input,
                        "non-finite coefficient at index " + std::to_string(terms[i].n));
        }
        if (i > 0 && terms[i].n == terms[i - 1].n) {
            throw Error(ErrorKind::invalid_input, "duplicate index " + std::to_string(terms[i].n));
        }
    }
    std::erase_if(terms, [](const Term& t) { return t.c == complex{}; });
    L1ZSeq out;
    out.terms_ = std::move(terms);
    out.tail_ = tail;
    return out;
}

complex L1ZSeq::coeff(Index n) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), n,
                               [](const Term& t, Index k) { return t.n < k; });
    if (it != terms_.end() && it->n == n) {
        return it->c;
    }
    return {};
}

Index L1ZSeq::min_index() const
{
    return terms_.empty() ? 0 : terms_.front().n;
}

Index L1ZSeq::max_index() const
{
    return terms_.empty() ? 0 : terms_.back().n;
}

Index L1ZSeq::support_radius() const
{
    if (terms_.empty()) {
        return 0;
    }
    return std::max(std::abs(terms_.front().n), std::abs(terms_.back().n));
}

L1ZSeq L1ZSeq::finite_part() const
{
    return with_tail(CertUpper::zero());
}

L1ZSeq L1ZSeq::with_tail(CertUpper tail) const
{
    L1ZSeq out = *this;
    out.tail_ = tail;
    return out;
}

L1ZSeq delta(Index n, complex c)
{
    return L1ZSeq::from_terms({Term{n, c}});
}

L1ZSeq add(const L1ZSeq& a, const L1ZSeq& b)
{
    ErrorAccumulator acc;
    std::vector<Term> out;
    out.reserve(a.support_size() + b.support_size());
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() || ib != b.terms().end()) {
        if (ib == b.terms().end() || (ia != a.terms().end() && ia->n < ib->n)) {
            out.push_back(*ia++);
        } else if (ia == a.terms().end() || ib->n < ia->n) {
            out.push_back(*ib++);
        } else {
            complex s = add_tracked(ia->c, ib->c, acc);
            if (s != complex{}) {
                out.push_back({ia->n, s});
            }
            ++ia;
            ++ib;
        }
    }
    return L1ZSeq::from_terms(std::move(out), a.tail() + b.tail() + acc.bound());
}

L1ZSeq neg(const L1ZSeq& a)
{
    std::vector<Term> out = a.terms();
    for (auto& t : out) {
        t.c = complex(0.0 - t.c.real(), 0.0 - t.c.imag());
    }
    return L1ZSeq::from_terms(std::move(out), a.tail());
}

L1ZSeq sub(const L1ZSeq& a, const L1ZSeq& b)
{
    return add(a, neg(b));
}

L1ZSeq scale(complex c, const L1ZSeq& a)
{
    if (!finite(c)) {
        throw Error(ErrorKind::invalid_input, "non-finite scale factor");
    }
    ErrorAccumulator acc;
    std::vector<Term> out;
    out.reserve(a.support_size());
    for (const auto& t : a.terms()) {
        out.push_back({t.n, mul_tracked(c, t.c, acc)});
    }
    return L1ZSeq::from_terms(std::move(out), cu_abs(c) * a.tail() + acc.bound());
}

L1ZSeq scale(complex c, CertUpper c_err, const L1ZSeq& a)
{
    L1ZSeq s = scale(c, a);
    return s.with_tail(s.tail() + c_err * norm_upper(a));
}

L1ZSeq convolve(const L1ZSeq& a, const L1ZSeq& b)
{
    CertUpper cross = a.tail() * norm_upper(b) + b.tail() * norm_upper(a) + a.tail() * b.tail();
    if (a.empty() || b.empty()) {
        return L1ZSeq::from_terms({}, cross);
    }

    ErrorAccumulator acc;
    std::vector<Term> out;
    Index lo = a.min_index() + b.min_index();
    Index hi = a.max_index() + b.max_index();
    // Each output slot is summed in ascending order of a's index.
    if (hi - lo < kDenseSpanLimit) {
        std::vector<complex> buf(static_cast<std::size_t>(hi - lo + 1));
        for (const auto& x : a.terms()) {
            for (const auto& y : b.terms()) {
                auto& slot = buf[static_cast<std::size_t>(x.n + y.n - lo)];
                slot = add_tracked(slot, mul_tracked(x.c, y.c, acc), acc);
            }
        }
        for (std::size_t i = 0; i < buf.size(); ++i) {
            if (buf[i] != complex{}) {
                out.push_back({lo + static_cast<Index>(i), buf[i]});
            }
        }
    } else {
        std::map<Index, complex> buf;
        for (const auto& x : a.terms()) {
            for (const auto& y : b.terms()) {
                auto& slot = buf[x.n + y.n];
                slot = add_tracked(slot, mul_tracked(x.c, y.c, acc), acc);
            }
        }
        for (const auto& [n, c] : buf) {
            if (c != complex{}) {
                out.push_back({n, c});
            }
        }
    }
    return L1ZSeq::from_terms(std::move(out), cross + acc.bound());
}

CertUpper norm_upper(const L1ZSeq& a)
{
    CertUpper s;
    for (const auto& t : a.terms()) {
        s += cu_abs(t.c);
    }
    return s + a.tail();
}

CircleValue eval_circle(const L1ZSeq& a, complex lambda)
{
    double r = std::abs(lambda);
    if (!(std::abs(r - 1.0) <= 1e-12)) {
        throw Error(ErrorKind::invalid_input, "not on circle");
    }
    double theta = std::arg(lambda / r);
    ErrorAccumulator acc;
    complex value{};
    double rounding = 0.0;
    // At +-1 and +-i the powers lambda^(+-1) are exact.
    const bool unit = (lambda.imag() == 0.0 && std::abs(lambda.real()) == 1.0)
                      || (lambda.real() == 0.0 && std::abs(lambda.imag()) == 1.0);
    for (const auto& t : a.terms()) {
        if (t.n == 0 || (unit && (t.n == 1 || t.n == -1))) {
            complex power = t.n == 0 ? complex(1.0) : (t.n == 1 ? lambda : std::conj(lambda));
            value = add_tracked(value, mul_tracked(t.c, power, acc), acc);
            continue;
        }
        double angle = static_cast<double>(t.n) * theta;
        complex power = std::polar(1.0, angle);
        value = add_tracked(value, mul_tracked(t.c, power, acc), acc);
        double n_abs = std::abs(static_cast<double>(t.n));
        rounding = inflate(rounding + cu_abs(t.c).value()
                                          * ((n_abs * (std::abs(theta) + 2.0) + 4.0) * 4.0 * kUlp));
    }
    return {value, a.tail() + CertUpper(rounding) + acc.bound()};
}

CertUpper circle_lipschitz_upper(const L1ZSeq& a)
{
    if (a.tail().value() > 0.0) {
        throw Error(ErrorKind::invalid_input, "lipschitz unavailable for infinite tail");
    }
    CertUpper s;
    for (const auto& t : a.terms()) {
        s += cu_abs(static_cast<double>(t.n)) * cu_abs(t.c);
    }
    return s;
}

L1ZSeq truncate(const L1ZSeq& a, double budget)
{
    if (!(budget > 0.0)) {
        throw Error(ErrorKind::invalid_input, "truncation budget must be positive");
    }
    struct Ranked {
        double modulus;
        std::size_t pos;
    };
    const auto& terms = a.terms();
    std::vector<Ranked> order;
    order.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        order.push_back({cu_abs(terms[i].c).value(), i});
    }
    std::sort(order.begin(), order.end(), [&](const Ranked& x, const Ranked& y) {
        if (x.modulus != y.modulus) {
            return x.modulus < y.modulus;
        }
        Index nx = terms[x.pos].n;
        Index ny = terms[y.pos].n;
        if (std::abs(nx) != std::abs(ny)) {
            return std::abs(nx) < std::abs(ny);
        }
        return nx > ny;
    });

    std::vector<bool> dropped(terms.size(), false);
    CertUpper mass;
    for (const auto& r : order) {
        CertUpper next = mass + CertUpper(r.modulus);
        if (next.value() > budget) {
            break;
        }
        mass = next;
        dropped[r.pos] = true;
    }
    std::vector<Term> kept;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!dropped[i]) {
            kept.push_back(terms[i]);
        }
    }
    return L1ZSeq::from_terms(std::move(kept), a.tail() + mass);
}

L1ZSeq truncate(const L1ZSeq& a, const std::function<bool(Index)>& keep)
{
    std::vector<Term> kept;
    CertUpper mass;
    for (const auto& t : a.terms()) {
        if (keep(t.n)) {
            kept.push_back(t);
        } else {
            mass += cu_abs(t.c);
        }
    }
    return L1ZSeq::from_terms(std::move(kept), a.tail() + mass);
}

complex root_of_unity(std::size_t j, std::size_t N)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return std::polar(1.0, (two_pi * static_cast<double>(j)) / static_cast<double>(N));
}

RootGridValues eval_roots_of_unity(const L1ZSeq& a, std::size_t N)
{
    if (N == 0) {
        throw Error(ErrorKind::invalid_input, "empty grid");
    }
    std::vector<complex> twiddle(N);
    for (std::size_t j = 0; j < N; ++j) {
        twiddle[j] = root_of_unity(j, N);
    }
    const auto& terms = a.terms();
    const auto n_mod = static_cast<Index>(N);
    std::vector<std::size_t> residues(terms.size());
    double coeff_mass = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        residues[i] = static_cast<std::size_t>(((terms[i].n % n_mod) + n_mod) % n_mod);
        coeff_mass = inflate(coeff_mass + cu_abs(terms[i].c).value());
    }
    // Each twiddle entry is within 16 ulp of the exact root.
    const double twiddle_rounding = inflate(coeff_mass * 16.0 * kUlp);

    RootGridValues out;
    out.values.resize(N);
    out.rounding.resize(N);
    parallel_for(N, [&](std::size_t k) {
        ErrorAccumulator acc;
        complex v{};
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::size_t j = static_cast<std::size_t>(
                (static_cast<unsigned __int128>(residues[i]) * k) % N);
            v = add_tracked(v, mul_tracked(terms[i].c, twiddle[j], acc), acc);
        }
        out.values[k] = v;
        out.rounding[k] = inflate(twiddle_rounding + acc.bound().value());
    });
    return out;
}

} // namespace wiener
