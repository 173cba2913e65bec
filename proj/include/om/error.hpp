#ifndef OM_ERROR_HPP
#define OM_ERROR_HPP

/*
 * Typed error hierarchy.  The CLI maps ErrorKind to process exit codes:
 * malformed input (ParseError) exits 2; semantically invalid lambda
 * (NonIntegralLambda / NonDominantLambda) exits 3; everything else is an
 * internal contract violation and exits 1.
 */

#include <stdexcept>
#include <string>

namespace om {

enum class ErrorKind {
    ParseError,
    InvalidType,
    NonIntegralLambda,
    NonDominantLambda,
    MismatchedGrading,
    UnsupportedType,
    IncomparableGradings,
    DegenerateFlag,
    ModeMismatch,
    DimensionMismatch,
    NotInY,
    NotMinimalRep,
    RecursionIncomplete,
    CacheCorrupt
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(name(kind) + ": " + what), m_kind(kind) {}

    ErrorKind kind() const { return m_kind; }

    static std::string name(ErrorKind k) {
        switch (k) {
            case ErrorKind::ParseError: return "ParseError";
            case ErrorKind::InvalidType: return "InvalidType";
            case ErrorKind::NonIntegralLambda: return "NonIntegralLambda";
            case ErrorKind::NonDominantLambda: return "NonDominantLambda";
            case ErrorKind::MismatchedGrading: return "MismatchedGrading";
            case ErrorKind::UnsupportedType: return "UnsupportedType";
            case ErrorKind::IncomparableGradings: return "IncomparableGradings";
            case ErrorKind::DegenerateFlag: return "DegenerateFlag";
            case ErrorKind::ModeMismatch: return "ModeMismatch";
            case ErrorKind::DimensionMismatch: return "DimensionMismatch";
            case ErrorKind::NotInY: return "NotInY";
            case ErrorKind::NotMinimalRep: return "NotMinimalRep";
            case ErrorKind::RecursionIncomplete: return "RecursionIncomplete";
            case ErrorKind::CacheCorrupt: return "CacheCorrupt";
        }
        return "Error";
    }

private:
    ErrorKind m_kind;
};

}  // namespace om

#endif  // OM_ERROR_HPP
