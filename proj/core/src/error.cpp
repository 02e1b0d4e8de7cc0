#include "gsv/error.hpp"

namespace gsv {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
        case ErrorCode::unsupported_kernel: return "UNSUPPORTED_KERNEL";
        case ErrorCode::not_psd: return "NOT_PSD";
        case ErrorCode::degenerate_estimate: return "DEGENERATE_ESTIMATE";
        case ErrorCode::degenerate_correlation: return "DEGENERATE_CORRELATION";
        case ErrorCode::not_self_similar: return "NOT_SELF_SIMILAR";
        case ErrorCode::wrong_regime: return "WRONG_REGIME";
        case ErrorCode::growth_violation: return "GROWTH_VIOLATION";
        case ErrorCode::zero_rate: return "ZERO_RATE";
        case ErrorCode::price_out_of_range: return "PRICE_OUT_OF_RANGE";
        case ErrorCode::unclassified: return "UNCLASSIFIED";
        case ErrorCode::witness_not_smooth: return "WITNESS_NOT_SMOOTH";
        case ErrorCode::nonpositive_variance: return "NONPOSITIVE_VARIANCE";
        case ErrorCode::inapplicable_gamma: return "INAPPLICABLE_GAMMA";
        case ErrorCode::config_invalid: return "CONFIG_INVALID";
    }
    return "UNKNOWN";
}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gsv
