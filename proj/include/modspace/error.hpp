#ifndef MODSPACE_ERROR_HPP
#define MODSPACE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace modspace {

// Error categories shared with the C API status codes.
enum class ErrorCode {
    io_failure = 2,
    grid_mismatch = 3,
    bad_argument = 4,
    not_a_frame = 5,
    numerical_failure = 6,
    internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace modspace

#endif
