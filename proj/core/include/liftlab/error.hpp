#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liftlab {

enum class Errc {
    SpanViolation,
    Inconsistent,
    IncompleteAssignment,
    EmptySet,
    ShapeMismatch,
    TooLarge,
    GuardExceeded,
    ParamViolation,
    NotPowerOfTwo,
    EmptyState,
    WidthOverflow,
    MalformedProof,
    SourceInvalid,
    ParseError,
    InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` says which contract failed.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace liftlab
