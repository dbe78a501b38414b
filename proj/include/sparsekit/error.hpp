#ifndef SPARSEKIT_ERROR_HPP
#define SPARSEKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsekit {

enum class ErrorCode {
    RejectedEdge,
    BadNodeId,
    BadWeight,
    LengthMismatch,
    TooLargeForDense,
    IndexOutOfRange,
    BadEstimate,
    ComponentMismatch,
    DifferentComponents,
    Disconnected,
    UnbalancedDemand,
    NotSDD,
    NotSDDM,
    BadEpsilon,
    BadShape,
    ParseError,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::RejectedEdge: return "RejectedEdge";
    case ErrorCode::BadNodeId: return "BadNodeId";
    case ErrorCode::BadWeight: return "BadWeight";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooLargeForDense: return "TooLargeForDense";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadEstimate: return "BadEstimate";
    case ErrorCode::ComponentMismatch: return "ComponentMismatch";
    case ErrorCode::DifferentComponents: return "DifferentComponents";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::UnbalancedDemand: return "UnbalancedDemand";
    case ErrorCode::NotSDD: return "NotSDD";
    case ErrorCode::NotSDDM: return "NotSDDM";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace sparsekit

#endif // SPARSEKIT_ERROR_HPP
