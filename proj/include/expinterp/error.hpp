#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expinterp {

/// Failure categories surfaced by the library. The service maps them
/// one-to-one onto structured error responses.
enum class ErrorCode {
    InvalidArgument,
    NotSymmetric,
    OrderTooLow,
    SingularSystem,
    ReproductionConditionViolated,
    DegenerateFrame,
    OddFactor,
    UnknownShape,
    IndexOutOfRange,
    NotFound,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace expinterp
