#pragma once

#include <stdexcept>
#include <string>

namespace lockleak {

// Error categories map 1:1 onto CLI exit codes (see tools/lockleak.cpp).
enum class ErrorKind { Config, Io, Parse, Op };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace lockleak
