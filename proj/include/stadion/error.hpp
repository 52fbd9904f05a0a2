#ifndef STADION_ERROR_HPP
#define STADION_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace stadion {

// Numeric values double as CLI exit codes, so never renumber.
enum class ErrorCode : int {
    Domain = 2,
    Grazing = 3,
    Corner = 4,
    Existence = 5,
    Convergence = 6,
    Refinement = 7,
    JetDisagreement = 8,
    Resonance = 9,
    Escape = 10,
    NotElliptic = 11,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define STADION_DEFINE_ERROR(Name, Code)                                   \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
    };

STADION_DEFINE_ERROR(DomainError, Domain)
STADION_DEFINE_ERROR(GrazingError, Grazing)
STADION_DEFINE_ERROR(CornerError, Corner)
STADION_DEFINE_ERROR(ExistenceError, Existence)
STADION_DEFINE_ERROR(ConvergenceError, Convergence)
STADION_DEFINE_ERROR(RefinementError, Refinement)
STADION_DEFINE_ERROR(JetDisagreementError, JetDisagreement)
STADION_DEFINE_ERROR(ResonanceError, Resonance)
STADION_DEFINE_ERROR(EscapeError, Escape)
STADION_DEFINE_ERROR(NotEllipticError, NotElliptic)

#undef STADION_DEFINE_ERROR

inline std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Grazing: return "GrazingError";
    case ErrorCode::Corner: return "CornerError";
    case ErrorCode::Existence: return "ExistenceError";
    case ErrorCode::Convergence: return "ConvergenceError";
    case ErrorCode::Refinement: return "RefinementError";
    case ErrorCode::JetDisagreement: return "JetDisagreement";
    case ErrorCode::Resonance: return "ResonanceError";
    case ErrorCode::Escape: return "EscapeError";
    case ErrorCode::NotElliptic: return "NotEllipticError";
    }
    return "Error";
}

} // namespace stadion

#endif
