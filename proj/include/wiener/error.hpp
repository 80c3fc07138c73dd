#ifndef WIENER_ERROR_HPP
#define WIENER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wiener {

enum class ErrorKind {
    invalid_input,      // malformed data or violated precondition on the caller's side
    hypothesis_failed,  // a mathematical hypothesis could not be certified
    not_certified,      // the algorithm ran out of budget before certifying its result
    bound_overflow,     // a certified bound became infinite
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::hypothesis_failed: return "hypothesis-failed";
    case ErrorKind::not_certified: return "not-certified";
    case ErrorKind::bound_overflow: return "bound-overflow";
    }
    return "unknown";
}

} // namespace wiener

#endif // WIENER_ERROR_HPP
