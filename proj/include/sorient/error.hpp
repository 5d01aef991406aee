#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sorient {

enum class Errc {
    MissingPath,
    EmptyCorpus,
    Io,
    BadFormat,
    MalformedQuery,
    EmptyParadigmSet,
    InvalidParadigmSet,
    InvalidConfig,
    QueryBudgetExceeded,
    UnknownTerm,
    AllTermsFiltered,
    ConvergenceFailure,
    DegenerateMatrix,
    NonFiniteValue,
    MalformedLine,
    ConflictingLabel,
    UnknownWord,
    EmptyResults,
    NoCandidate,
    NoKnownWords,
    InvalidSpec,
};

/// Coarse grouping used by the CLI to pick an exit status.
enum class ErrorFamily { Usage, Data, Numerical };

std::string_view errc_name(Errc code) noexcept;
ErrorFamily errc_family(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }
    ErrorFamily family() const noexcept { return errc_family(code_); }

private:
    Errc code_;
};

}  // namespace sorient
