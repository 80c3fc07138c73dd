#include "commands.hpp"

#include "wiener/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using wiener::cli::CommandResult;

bool write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

int finish(const CommandResult& r, const std::string& out, const std::string& trace)
{
    for (const auto& line : r.log) {
        std::cerr << line << '\n';
    }
    if (r.status == wiener::cli::Status::ok) {
        if (!write_text(out, wiener::dump(r.payload))) {
            std::cerr << "cannot write " << out << '\n';
            return 3;
        }
        if (!trace.empty() && !write_text(trace, r.trace_csv)) {
            std::cerr << "cannot write " << trace << '\n';
            return 3;
        }
    }
    return wiener::cli::exit_code(r.status);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified arithmetic in l1(Z) and L1(R): Wiener inversion and Tauberian division"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "worker threads (default: WIENER_THREADS or 1)");

    std::string out;
    std::string trace;

    wiener::cli::InvertArgs inv;
    auto* c_inv = app.add_subcommand("invert", "certified inverse of an l1(Z) element");
    c_inv->add_option("--input", inv.input, "L1ZSeq JSON")->required();
    c_inv->add_option("--epsilon", inv.epsilon, "claimed lower bound of |f| on the circle")->required();
    c_inv->add_option("--target", inv.target, "residual target")->capture_default_str();
    c_inv->add_option("--grid", inv.grid, "initial circle grid");
    c_inv->add_option("--out", out, "output JSON (default stdout)");

    wiener::cli::ResolventArgs res;
    auto* c_res = app.add_subcommand("resolvent-demo", "loop integral of the resolvent over a circle");
    c_res->add_option("--u", res.u, "L1ZSeq JSON")->required();
    c_res->add_option("--radius", res.radius, "circle radius")->capture_default_str();
    c_res->add_option("--steps", res.steps, "midpoint panels")->capture_default_str();
    c_res->add_option("--tol", res.tol, "series truncation per sample")->capture_default_str();
    c_res->add_option("--out,--trace", trace, "integrand trace CSV t,re,im");

    wiener::cli::TauberianArgs tau;
    auto* c_tau = app.add_subcommand("tauberian", "divide g by f in L1(R)");
    c_tau->add_option("--f", tau.f, "PLFunction JSON")->required();
    c_tau->add_option("--g", tau.g, "PLFunction JSON")->required();
    c_tau->add_option("--band", tau.band, "band M on which |f^| >= epsilon")->required();
    c_tau->add_option("--epsilon", tau.epsilon, "lower bound of |f^| on the band")->required();
    c_tau->add_option("--tol", tau.tol, "residual target")->capture_default_str();
    c_tau->add_option("--out", out, "output JSON (default stdout)");
    c_tau->add_option("--trace", trace, "CSV x,re,im of the quotient k");

    wiener::cli::ExpArgs ex;
    auto* c_exp = app.add_subcommand("exp", "exponential of an l1(Z) element");
    c_exp->add_option("--input", ex.input, "L1ZSeq JSON")->required();
    c_exp->add_option("--tol", ex.tol, "remainder bound")->capture_default_str();
    c_exp->add_option("--out", out, "output JSON (default stdout)");

    wiener::cli::EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "value of the symbol at a point of the unit circle");
    c_eval->add_option("--input", ev.input, "L1ZSeq JSON")->required();
    c_eval->add_option("--re", ev.re, "real part of lambda")->capture_default_str();
    c_eval->add_option("--im", ev.im, "imaginary part of lambda")->capture_default_str();
    c_eval->add_option("--out", out, "output JSON (default stdout)");

    wiener::cli::NormArgs nm;
    auto* c_norm = app.add_subcommand("norm", "certified norm of an L1ZSeq or PLFunction");
    c_norm->add_option("--input", nm.input, "element JSON")->required();
    c_norm->add_option("--out", out, "output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    if (threads > 0) {
        wiener::set_thread_count(threads);
    }

    if (c_inv->parsed()) {
        return finish(wiener::cli::cmd_invert(inv), out, trace);
    }
    if (c_res->parsed()) {
        // The summary goes to stdout, the trace to --out.
        return finish(wiener::cli::cmd_resolvent_demo(res), "", trace);
    }
    if (c_tau->parsed()) {
        return finish(wiener::cli::cmd_tauberian(tau), out, trace);
    }
    if (c_exp->parsed()) {
        return finish(wiener::cli::cmd_exp(ex), out, trace);
    }
    if (c_eval->parsed()) {
        return finish(wiener::cli::cmd_eval(ev), out, trace);
    }
    return finish(wiener::cli::cmd_norm(nm), out, trace);
}
