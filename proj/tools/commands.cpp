#include "commands.hpp"

#include "wiener/calculus.hpp"
#include "wiener/error.hpp"

#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

namespace wiener::cli {

namespace {

Status status_of(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_input: return Status::invalid_input;
    case ErrorKind::hypothesis_failed: return Status::hypothesis_failed;
    case ErrorKind::not_certified:
    case ErrorKind::bound_overflow: return Status::not_certified;
    }
    return Status::internal_error;
}

// Runs body, turning library and parser exceptions into a status.
CommandResult guarded(const std::function<void(CommandResult&)>& body)
{
    CommandResult r;
    try {
        body(r);
    } catch (const Error& e) {
        r.status = status_of(e.kind());
        r.payload = nullptr;
        r.log.push_back(std::string(wiener::to_string(e.kind())) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        r.status = Status::invalid_input;
        r.payload = nullptr;
        r.log.push_back(std::string("invalid-input: ") + e.what());
    } catch (const std::exception& e) {
        r.status = Status::internal_error;
        r.payload = nullptr;
        r.log.push_back(std::string("internal error: ") + e.what());
    }
    return r;
}

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::invalid_input, std::string(name) + " must be a positive number");
    }
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json complex_json(complex c)
{
    Json j = Json::object();
    j["re"] = c.real();
    j["im"] = c.imag();
    return j;
}

} // namespace

const char* to_string(Status s)
{
    switch (s) {
    case Status::ok: return "ok";
    case Status::hypothesis_failed: return "hypothesis-failed";
    case Status::not_certified: return "not-certified";
    case Status::invalid_input: return "invalid-input";
    case Status::internal_error: return "internal-error";
    }
    return "internal-error";
}

int exit_code(Status s)
{
    switch (s) {
    case Status::ok: return 0;
    case Status::hypothesis_failed:
    case Status::not_certified: return 2;
    case Status::invalid_input: return 3;
    case Status::internal_error: return 1;
    }
    return 1;
}

CommandResult cmd_invert(const InvertArgs& a)
{
    return guarded([&](CommandResult& r) {
        require_positive(a.epsilon, "--epsilon");
        require_positive(a.target, "--target");
        const L1ZSeq f = l1z_from_json(read_json_file(a.input));
        WienerOptions opts = WienerOptions::from_environment();
        if (a.grid) {
            if (*a.grid < 8) {
                throw Error(ErrorKind::invalid_input, "--grid must be at least 8");
            }
            opts.initial_grid = *a.grid;
        }
        const WienerResult w = wiener_invert(f, a.epsilon, a.target, opts);
        r.log.push_back("min-modulus grid " + std::to_string(w.hypothesis.grid) + ": lower bound "
                        + num(w.hypothesis.min_lower) + " >= epsilon " + num(a.epsilon));
        r.log.push_back("certified residual " + num(w.cert.residual.value()) + " with seed grid "
                        + std::to_string(w.cert.params.grid));
        Json hyp = Json::object();
        hyp["grid"] = w.hypothesis.grid;
        hyp["epsilon"] = w.hypothesis.epsilon;
        hyp["min_lower"] = w.hypothesis.min_lower;
        r.payload = Json::object();
        r.payload["inverse"] = to_json(w.inverse);
        r.payload["certificate"] = to_json(w.cert);
        r.payload["hypothesis"] = std::move(hyp);
    });
}

CommandResult cmd_resolvent_demo(const ResolventArgs& a)
{
    return guarded([&](CommandResult& r) {
        require_positive(a.radius, "--radius");
        require_positive(a.tol, "--tol");
        if (a.steps == 0) {
            throw Error(ErrorKind::invalid_input, "--steps must be positive");
        }
        const L1ZSeq u = l1z_from_json(read_json_file(a.u));
        std::ostringstream csv;
        csv << "t,re,im\n";
        auto observe = [&](double t, const L1ZSeq& v) {
            const complex c = v.coeff(0);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, c.real(), c.imag());
            csv << buf;
        };
        const Integral<L1ZSeq> integral = resolvent_loop_integral(u, a.radius, a.steps, a.tol, observe);
        const complex two_pi_i(0.0, 2.0 * std::numbers::pi);
        const CertUpper distance = norm_upper(sub(integral.value, delta(0, two_pi_i)));
        r.log.push_back("|value - 2 pi i delta0| <= " + num(distance.value()) + ", certified quadrature err "
                        + num(integral.err.value()));
        r.payload = Json::object();
        r.payload["value"] = to_json(integral.value);
        r.payload["err"] = integral.err.value();
        r.payload["steps"] = a.steps;
        r.payload["radius"] = a.radius;
        r.payload["distance_to_2pi_i"] = distance.value();
        r.trace_csv = csv.str();
    });
}

CommandResult cmd_tauberian(const TauberianArgs& a)
{
    return guarded([&](CommandResult& r) {
        require_positive(a.band, "--band");
        require_positive(a.epsilon, "--epsilon");
        require_positive(a.tol, "--tol");
        const PLFunction f = pl_from_json(read_json_file(a.f));
        const PLFunction g = pl_from_json(read_json_file(a.g));
        const TauberianResult t = tauberian_divide(f, g, a.band, a.epsilon, a.tol);
        r.log.push_back("certified residual " + num(t.residual.value()) + " after " + std::to_string(t.attempts)
                        + " attempt(s)");
        Json hyp = Json::object();
        hyp["band"] = t.hypothesis.band;
        hyp["epsilon"] = t.hypothesis.epsilon;
        hyp["grid"] = t.hypothesis.grid;
        hyp["min_lower"] = t.hypothesis.min_lower;
        r.payload = Json::object();
        r.payload["k"] = to_json(t.k);
        r.payload["residual"] = t.residual.value();
        r.payload["hypothesis"] = std::move(hyp);
        r.payload["extended_band"] = t.extended_band;
        r.payload["frequency_points"] = t.frequency_points;
        r.payload["spatial_step"] = t.spatial_step;
        std::ostringstream csv;
        write_csv(csv, t.k);
        r.trace_csv = csv.str();
    });
}

CommandResult cmd_exp(const ExpArgs& a)
{
    return guarded([&](CommandResult& r) {
        require_positive(a.tol, "--tol");
        const L1ZSeq x = l1z_from_json(read_json_file(a.input));
        const L1ZSeq e = banach_exp(x, a.tol);
        r.log.push_back("exponential with " + std::to_string(e.support_size()) + " coefficients, tail "
                        + num(e.tail().value()));
        r.payload = to_json(e);
    });
}

CommandResult cmd_eval(const EvalArgs& a)
{
    return guarded([&](CommandResult& r) {
        const L1ZSeq x = l1z_from_json(read_json_file(a.input));
        const CircleValue v = eval_circle(x, complex(a.re, a.im));
        r.payload = Json::object();
        r.payload["value"] = complex_json(v.value);
        r.payload["err"] = v.err.value();
    });
}

CommandResult cmd_norm(const NormArgs& a)
{
    return guarded([&](CommandResult& r) {
        const Json j = read_json_file(a.input);
        r.payload = Json::object();
        if (is_pl_json(j)) {
            r.payload["norm"] = norm_l1(pl_from_json(j)).value();
        } else {
            r.payload["norm"] = norm_upper(l1z_from_json(j)).value();
        }
    });
}

} // namespace wiener::cli
