#pragma once

#include <stdexcept>
#include <string>

namespace tsc {

// Error categories; they map 1:1 onto the C API status codes.
enum class ErrorKind {
    Invalid,  // bad argument or config
    Io,       // filesystem failure
    Format,   // malformed file contents
    Numeric,  // non-finite value where a finite one is required
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(ErrorKind::Invalid, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ErrorKind::Io, msg); }
[[noreturn]] inline void fail_format(const std::string& msg) { throw Error(ErrorKind::Format, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(ErrorKind::Numeric, msg); }

}  // namespace tsc
