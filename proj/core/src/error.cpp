#include "betanorm/error.hpp"

namespace betanorm {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NotMonic: return "NotMonic";
        case ErrorCode::NoDominantRealRoot: return "NoDominantRealRoot";
        case ErrorCode::NotPisot: return "NotPisot";
        case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
        case ErrorCode::Reducible: return "Reducible";
        case ErrorCode::MixedContexts: return "MixedContexts";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::DigitOutOfRange: return "DigitOutOfRange";
        case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
        case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
        case ErrorCode::PeriodNotInAttractor: return "PeriodNotInAttractor";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::NoStraddlingBlock: return "NoStraddlingBlock";
        case ErrorCode::NotUnit: return "NotUnit";
        case ErrorCode::HomoclinicDecayTooSlow: return "HomoclinicDecayTooSlow";
        case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
        case ErrorCode::WrongAlphabet: return "WrongAlphabet";
        case ErrorCode::OrbitNotFinite: return "OrbitNotFinite";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::IoError:
        case ErrorCode::NotMonic:
        case ErrorCode::NoDominantRealRoot:
        case ErrorCode::NotPisot:
        case ErrorCode::AlphabetTooSmall:
        case ErrorCode::Reducible:
        case ErrorCode::OutOfRange:
        case ErrorCode::DigitOutOfRange:
        case ErrorCode::WindowTooShort:
        case ErrorCode::NotUnit:
        case ErrorCode::TruncationTooCoarse:
        case ErrorCode::WrongAlphabet:
            return true;
        default:
            return false;
    }
}

bool is_budget_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::StateBudgetExceeded:
        case ErrorCode::EnumerationBudgetExceeded:
        case ErrorCode::BudgetExceeded:
            return true;
        default:
            return false;
    }
}

}  // namespace betanorm
