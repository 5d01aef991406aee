#include "sorient/error.hpp"

namespace sorient {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::MissingPath: return "MissingPath";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::Io: return "Io";
        case Errc::BadFormat: return "BadFormat";
        case Errc::MalformedQuery: return "MalformedQuery";
        case Errc::EmptyParadigmSet: return "EmptyParadigmSet";
        case Errc::InvalidParadigmSet: return "InvalidParadigmSet";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::QueryBudgetExceeded: return "QueryBudgetExceeded";
        case Errc::UnknownTerm: return "UnknownTerm";
        case Errc::AllTermsFiltered: return "AllTermsFiltered";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
        case Errc::DegenerateMatrix: return "DegenerateMatrix";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::ConflictingLabel: return "ConflictingLabel";
        case Errc::UnknownWord: return "UnknownWord";
        case Errc::EmptyResults: return "EmptyResults";
        case Errc::NoCandidate: return "NoCandidate";
        case Errc::NoKnownWords: return "NoKnownWords";
        case Errc::InvalidSpec: return "InvalidSpec";
    }
    return "Unknown";
}

ErrorFamily errc_family(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidConfig:
        case Errc::MalformedQuery:
        case Errc::InvalidSpec:
            return ErrorFamily::Usage;
        case Errc::ConvergenceFailure:
        case Errc::DegenerateMatrix:
        case Errc::NonFiniteValue:
            return ErrorFamily::Numerical;
        default:
            return ErrorFamily::Data;
    }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace sorient
