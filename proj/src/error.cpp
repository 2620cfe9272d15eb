#include "expinterp/error.hpp"

namespace expinterp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::OrderTooLow: return "OrderTooLow";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::ReproductionConditionViolated: return "ReproductionConditionViolated";
        case ErrorCode::DegenerateFrame: return "DegenerateFrame";
        case ErrorCode::OddFactor: return "OddFactor";
        case ErrorCode::UnknownShape: return "UnknownShape";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotFound: return "NotFound";
    }
    return "Unknown";
}

}  // namespace expinterp
