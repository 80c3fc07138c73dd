#include "wiener/inversion.hpp"

#include "wiener/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <sstream>

namespace wiener {

namespace {

// a - b rounded toward -infinity.
double lower_sub(double a, double b)
{
    double d = a - b;
    return d >= 0.0 ? deflate(d) : d * kSlack;
}

std::string describe(const MinModulusReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "grid " << r.grid << ": certified lower bound " << r.min_lower << " < epsilon " << r.epsilon
       << " at lambda = " << r.worst_lambda.real() << (r.worst_lambda.imag() < 0 ? " - " : " + ")
       << std::abs(r.worst_lambda.imag()) << "i (grid index " << r.worst_index << ", slack " << r.slack
       << ")";
    return os.str();
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)), &fftw_free)
    {
        if (!data) {
            throw std::bad_alloc();
        }
    }
    complex* get() { return reinterpret_cast<complex*>(data.get()); }
    fftw_complex* raw() { return data.get(); }

    std::unique_ptr<fftw_complex, decltype(&fftw_free)> data;
};

// In-place DFT of length n with exponent sign `sign` (FFTW_FORWARD = -1).
void dft_in_place(FftwBuffer& buf, std::size_t n, int sign)
{
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf.raw(), buf.raw(), sign, FFTW_ESTIMATE);
    if (plan == nullptr) {
        throw Error(ErrorKind::not_certified, "FFT planning failed");
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// Seed inverse from reciprocal samples of g at the M-th roots of unity,
// keeping indices |n| <= degree.
L1ZSeq reciprocal_seed(const L1ZSeq& g, std::size_t M, std::size_t degree)
{
    FftwBuffer buf(M);
    complex* a = buf.get();
    std::fill(a, a + M, complex{});
    const auto m = static_cast<Index>(M);
    for (const auto& t : g.terms()) {
        a[static_cast<std::size_t>(((t.n % m) + m) % m)] += t.c;
    }
    dft_in_place(buf, M, FFTW_BACKWARD);  // a[k] = g(exp(2 pi i k / M))
    for (std::size_t k = 0; k < M; ++k) {
        a[k] = 1.0 / a[k];
    }
    dft_in_place(buf, M, FFTW_FORWARD);
    std::vector<Term> terms;
    const double inv_m = 1.0 / static_cast<double>(M);
    for (std::size_t j = 0; j < M; ++j) {
        Index n = j < M / 2 ? static_cast<Index>(j) : static_cast<Index>(j) - m;
        if (static_cast<std::size_t>(std::abs(n)) <= degree) {
            terms.push_back({n, a[j] * inv_m});
        }
    }
    return L1ZSeq::from_terms(std::move(terms));
}

} // namespace

CertUpper recompute_residual(const L1ZSeq& f, const L1ZSeq& witness)
{
    return norm_upper(sub(delta(0), convolve(f, witness)));
}

CertUpper inverse_distance_bound(const InversionCertificate& cert)
{
    double r = cert.residual.value();
    if (!(r < 1.0)) {
        throw Error(ErrorKind::invalid_input, "certificate residual is not below 1");
    }
    return cu_div(cert.residual * norm_upper(cert.witness), lower_sub(1.0, r));
}

InversionResult neumann_invert(const L1ZSeq& x, double target)
{
    if (!(target > 0.0)) {
        throw Error(ErrorKind::invalid_input, "target must be positive");
    }
    const L1ZSeq y = sub(delta(0), x);
    const CertUpper rho = norm_upper(y);
    if (!(rho.value() < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "Neumann hypothesis fails: |1 - x| <= " << rho.value() << " is not below 1";
        throw Error(ErrorKind::hypothesis_failed, os.str());
    }

    const double gap = lower_sub(1.0, rho.value());
    constexpr unsigned kMaxTerms = 1u << 20;
    unsigned K = 0;
    CertUpper power = rho;  // rho^(K+1)
    CertUpper remainder = cu_div(power, gap);
    while ((remainder + remainder).value() > target) {
        if (++K > kMaxTerms) {
            throw Error(ErrorKind::not_certified, "Neumann series needs too many terms");
        }
        power = power * rho;
        remainder = cu_div(power, gap);
    }

    L1ZSeq sum = delta(0);
    L1ZSeq term = delta(0);
    for (unsigned n = 1; n <= K; ++n) {
        term = convolve(term, y);
        sum = add(sum, term);
    }
    sum = sum.with_tail(sum.tail() + remainder);

    InversionResult out;
    out.inverse = sum;
    out.cert.witness = sum;
    out.cert.residual = recompute_residual(x, sum);
    out.cert.params = {0, K, target};
    out.residual_history = {out.cert.residual.value()};
    return out;
}

CertUpper perturb_invert_bound(CertUpper M, CertUpper u_norm, double c)
{
    if (!(c > 0.0 && c < 1.0)) {
        throw Error(ErrorKind::invalid_input, "contraction constant must lie in (0, 1)");
    }
    // Exact test of u_norm * M <= c.
    double p = u_norm.value() * M.value();
    double e = std::fma(u_norm.value(), M.value(), -p);
    if (p > c || (p == c && e > 0.0)) {
        throw Error(ErrorKind::invalid_input, "perturbation too large");
    }
    return cu_div(M, lower_sub(1.0, c));
}

InversionResult newton_refine(const L1ZSeq& f, const L1ZSeq& x0, double target, int max_iter)
{
    if (!(target > 0.0)) {
        throw Error(ErrorKind::invalid_input, "target must be positive");
    }
    InversionResult out;
    CertUpper r = recompute_residual(f, x0);
    out.residual_history.push_back(r.value());
    if (!(r.value() < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "seed not contracting: residual " << r.value();
        throw Error(ErrorKind::not_certified, os.str());
    }
    if (r.value() <= target) {
        out.inverse = x0;
        out.cert = {x0, r, {0, static_cast<std::size_t>(x0.support_radius()), target}};
        return out;
    }

    const L1ZSeq f_fin = f.finite_part();
    const double budget = target / (4.0 * std::max(1.0, norm_upper(f).value()));
    const L1ZSeq two = delta(0, 2.0);
    L1ZSeq x = x0.finite_part();
    for (int it = 0; it < max_iter; ++it) {
        L1ZSeq correction = sub(two, convolve(f_fin, x)).finite_part();
        L1ZSeq next = truncate(convolve(x, correction).finite_part(), budget).finite_part();
        r = recompute_residual(f, next);
        out.residual_history.push_back(r.value());
        x = std::move(next);
        if (r.value() <= target) {
            out.inverse = x;
            out.cert = {x, r, {0, static_cast<std::size_t>(x.support_radius()), target}};
            return out;
        }
        if (!(r.value() < 1.0)) {
            break;
        }
    }
    std::ostringstream os;
    os.precision(17);
    os << "did not converge: last residual " << r.value() << " > target " << target;
    throw Error(ErrorKind::not_certified, os.str());
}

MinModulusReport circle_min_modulus_certify(const L1ZSeq& f, double eps, std::size_t N)
{
    if (N < 8) {
        throw Error(ErrorKind::invalid_input, "grid size must be at least 8");
    }
    if (!(eps > 0.0)) {
        throw Error(ErrorKind::invalid_input, "epsilon must be positive");
    }
    const L1ZSeq g = f.finite_part();
    const CertUpper lip = circle_lipschitz_upper(g);
    const CertUpper arc(inflate(inflate(std::numbers::pi) / static_cast<double>(N)));
    const CertUpper slack = f.tail() + lip * arc;

    const RootGridValues vals = eval_roots_of_unity(g, N);
    MinModulusReport rep;
    rep.grid = N;
    rep.epsilon = eps;
    rep.slack = slack.value();
    rep.min_lower = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k) {
        double modulus = deflate(std::hypot(vals.values[k].real(), vals.values[k].imag()));
        double lower = lower_sub(lower_sub(modulus, vals.rounding[k]), slack.value());
        if (lower < rep.min_lower) {
            rep.min_lower = lower;
            rep.worst_index = k;
        }
    }
    rep.worst_lambda = root_of_unity(rep.worst_index, N);
    rep.certified = rep.min_lower >= eps;
    return rep;
}

WienerOptions WienerOptions::from_environment()
{
    WienerOptions opts;
    if (const char* env = std::getenv("WIENER_MAX_GRID")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v >= 8) {
            opts.max_grid = static_cast<std::size_t>(v);
        }
    }
    return opts;
}

MinModulusReport certify_min_modulus(const L1ZSeq& f, double eps, const WienerOptions& opts)
{
    std::size_t N = std::max<std::size_t>(8, opts.initial_grid);
    while (true) {
        MinModulusReport rep = circle_min_modulus_certify(f, eps, N);
        if (rep.certified || N > opts.max_grid / 2) {
            return rep;
        }
        N *= 2;
    }
}

WienerResult wiener_invert(const L1ZSeq& f, double eps, double target, const WienerOptions& opts)
{
    if (!(eps > 0.0) || !(target > 0.0)) {
        throw Error(ErrorKind::invalid_input, "epsilon and target must be positive");
    }
    WienerResult out;
    out.hypothesis = certify_min_modulus(f, eps, opts);
    if (!out.hypothesis.certified) {
        throw Error(ErrorKind::hypothesis_failed,
                    "minimum modulus not certified: " + describe(out.hypothesis));
    }

    const L1ZSeq g = truncate(f, eps / 8.0).finite_part();
    const auto deg = static_cast<std::size_t>(g.support_radius());
    const double prune = target / (8.0 * std::max(1.0, norm_upper(f).value()));
    std::size_t M = std::bit_ceil(std::max<std::size_t>(64, 4 * deg + 2));
    double best = std::numeric_limits<double>::infinity();
    while (M <= opts.max_grid) {
        const std::size_t D = std::min(M / 2 - 1, opts.max_degree);
        L1ZSeq seed = truncate(reciprocal_seed(g, M, D), prune).finite_part();
        CertUpper rho = recompute_residual(f, seed);
        best = std::min(best, rho.value());
        if (rho.value() < 1.0) {
            InversionResult refined = newton_refine(f, seed, target, opts.max_newton_iter);
            out.inverse = refined.inverse;
            out.cert = refined.cert;
            out.cert.params = {M, D, target};
            return out;
        }
        if (D == opts.max_degree) {
            break;
        }
        M *= 2;
    }
    std::ostringstream os;
    os.precision(17);
    os << "inversion not certified: best seed residual " << best << " (grid cap " << opts.max_grid << ")";
    throw Error(ErrorKind::not_certified, os.str());
}

CertUpper quotient_norm_upper(const L1ZSeq& a, const L1ZSeq& g, const L1ZSeq& k)
{
    return norm_upper(sub(a, convolve(g, k)));
}

} // namespace wiener
