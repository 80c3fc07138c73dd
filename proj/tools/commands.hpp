#ifndef WIENER_TOOLS_COMMANDS_HPP
#define WIENER_TOOLS_COMMANDS_HPP

#include "wiener/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wiener::cli {

enum class Status { ok, hypothesis_failed, not_certified, invalid_input, internal_error };

const char* to_string(Status s);
int exit_code(Status s);

struct CommandResult {
    Status status = Status::ok;
    Json payload;                   ///< null unless status is ok
    std::vector<std::string> log;   ///< human-readable trace lines
    std::string trace_csv;          ///< optional plot data
};

struct InvertArgs {
    std::string input;
    double epsilon = 0.0;
    double target = 1e-9;
    std::optional<std::size_t> grid;  ///< initial circle grid
};

struct ResolventArgs {
    std::string u;
    double radius = 2.0;
    std::size_t steps = 4096;
    double tol = 1e-12;
};

struct TauberianArgs {
    std::string f;
    std::string g;
    double band = 0.0;
    double epsilon = 0.0;
    double tol = 0.05;
};

struct ExpArgs {
    std::string input;
    double tol = 1e-9;
};

struct EvalArgs {
    std::string input;
    double re = 1.0;
    double im = 0.0;
};

struct NormArgs {
    std::string input;
};

CommandResult cmd_invert(const InvertArgs& a);
CommandResult cmd_resolvent_demo(const ResolventArgs& a);
CommandResult cmd_tauberian(const TauberianArgs& a);
CommandResult cmd_exp(const ExpArgs& a);
CommandResult cmd_eval(const EvalArgs& a);
CommandResult cmd_norm(const NormArgs& a);

} // namespace wiener::cli

#endif // WIENER_TOOLS_COMMANDS_HPP
