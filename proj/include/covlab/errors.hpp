#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covlab {

enum class ErrorKind {
    MalformedSpec,
    NotAGroup,
    ElementNotInGroup,
    NotNested,
    ChainConditionViolated,
    NotASubgroupTower,
    IdentityElement,
    ChainDoesNotCover,
    UnboundedEnumeration,
    NoSuitableLabel,
    EmptySet,
    NotProductBacked,
    InsufficientFactors,
    NotAbelian,
    InvalidPartition,
    BudgetExhausted,
    ConfigInvalid,
    IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// what() without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace covlab
