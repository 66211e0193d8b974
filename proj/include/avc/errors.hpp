#ifndef AVC_ERRORS_HPP
#define AVC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace avc {

// Error kinds map onto CLI exit codes: config/usage problems exit 1,
// infeasible parameters exit 2, resource exhaustion exit 3.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// A named parameter constraint failed (the name is the message prefix).
struct ConstraintError : std::runtime_error {
    explicit ConstraintError(const std::string& constraint, const std::string& detail = "")
        : std::runtime_error(detail.empty() ? constraint : constraint + ": " + detail),
          constraint(constraint) {}
    std::string constraint;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace avc

#endif
