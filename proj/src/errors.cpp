#include "covlab/errors.hpp"

#include "covlab/ordinal.hpp"

namespace covlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MalformedSpec: return "MalformedSpec";
        case ErrorKind::NotAGroup: return "NotAGroup";
        case ErrorKind::ElementNotInGroup: return "ElementNotInGroup";
        case ErrorKind::NotNested: return "NotNested";
        case ErrorKind::ChainConditionViolated: return "ChainConditionViolated";
        case ErrorKind::NotASubgroupTower: return "NotASubgroupTower";
        case ErrorKind::IdentityElement: return "IdentityElement";
        case ErrorKind::ChainDoesNotCover: return "ChainDoesNotCover";
        case ErrorKind::UnboundedEnumeration: return "UnboundedEnumeration";
        case ErrorKind::NoSuitableLabel: return "NoSuitableLabel";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::NotProductBacked: return "NotProductBacked";
        case ErrorKind::InsufficientFactors: return "InsufficientFactors";
        case ErrorKind::NotAbelian: return "NotAbelian";
        case ErrorKind::InvalidPartition: return "InvalidPartition";
        case ErrorKind::BudgetExhausted: return "BudgetExhausted";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

std::string Ordinal::to_string() const {
    if (q == 0) return std::to_string(n);
    std::string s = q == 1 ? "w" : "w*" + std::to_string(q);
    if (n) s += "+" + std::to_string(n);
    return s;
}

}  // namespace covlab
