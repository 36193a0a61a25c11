#pragma once

#include <stdexcept>
#include <string>

namespace metricgeo {

/// Error carrying a stable machine-readable code alongside the human message.
/// Codes are part of the CLI contract (they are printed on stderr and mapped
/// to exit codes), so they must not be reworded casually.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* invalid_subspace = "invalid-subspace";
inline constexpr const char* invalid_query = "invalid-query";
inline constexpr const char* invalid_params = "invalid-params";
inline constexpr const char* invalid_function = "invalid-function";
inline constexpr const char* invalid_comparison = "invalid-comparison";
inline constexpr const char* window_violation = "window-violation";
inline constexpr const char* not_verifiable = "not-verifiable-on-window";
inline constexpr const char* out_of_domain = "out-of-domain";
inline constexpr const char* missing_param = "missing-param";
inline constexpr const char* bad_input = "bad-input";
} // namespace errc

} // namespace metricgeo
