#pragma once

#include <stdexcept>
#include <string>

namespace betanorm {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    IoError,
    // algebraic_field
    NotMonic,
    NoDominantRealRoot,
    NotPisot,
    AlphabetTooSmall,
    Reducible,
    MixedContexts,
    // beta_expansion
    OutOfRange,
    DigitOutOfRange,
    StateBudgetExceeded,
    EnumerationBudgetExceeded,
    // normalization
    PeriodNotInAttractor,
    BudgetExceeded,
    WindowTooShort,
    NoStraddlingBlock,
    NotUnit,
    HomoclinicDecayTooSlow,
    // measure_lab
    TruncationTooCoarse,
    WrongAlphabet,
    OrbitNotFinite,
};

const char* to_string(ErrorCode code) noexcept;

/// Input was rejected before any computation (CLI exit code 2).
bool is_validation_error(ErrorCode code) noexcept;

/// A search or scan ran out of its configured budget (CLI exit code 3).
bool is_budget_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace betanorm
