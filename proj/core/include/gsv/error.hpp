#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsv {

// Machine-readable failure categories. The CLI prints the name verbatim.
enum class ErrorCode {
    invalid_argument,
    unsupported_kernel,
    not_psd,
    degenerate_estimate,
    degenerate_correlation,
    not_self_similar,
    wrong_regime,
    growth_violation,
    zero_rate,
    price_out_of_range,
    unclassified,
    witness_not_smooth,
    nonpositive_variance,
    inapplicable_gamma,
    config_invalid,
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

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace gsv
