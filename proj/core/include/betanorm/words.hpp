#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace betanorm {

using DigitWord = std::vector<int>;

/// Throws DigitOutOfRange unless every digit lies in {0, ..., bound}.
void check_digits(std::span<const int> w, int bound);

/// Eventually periodic word pre . per^inf; an empty period means the word is
/// finite (followed by 0^inf). Always held in canonical form: primitive
/// period, shortest preperiod, no trailing zeros on finite words.
class PeriodicWord {
public:
    PeriodicWord() = default;
    PeriodicWord(DigitWord pre, DigitWord per);

    static PeriodicWord finite(DigitWord w) { return PeriodicWord(std::move(w), {}); }

    const DigitWord& pre() const noexcept { return pre_; }
    const DigitWord& per() const noexcept { return per_; }
    bool is_finite() const noexcept { return per_.empty(); }
    /// Length of the finite word; for periodic words, pre + per.
    std::size_t length() const noexcept { return pre_.size() + per_.size(); }

    /// Symbol at 0-based position i of the infinite sequence.
    int at(std::size_t i) const noexcept {
        if (i < pre_.size()) return pre_[i];
        if (per_.empty()) return 0;
        return per_[(i - pre_.size()) % per_.size()];
    }

    /// The first n symbols.
    DigitWord prefix(std::size_t n) const;

    friend bool operator==(const PeriodicWord&, const PeriodicWord&) = default;

private:
    DigitWord pre_, per_;
};

/// Lexicographic order of the infinite sequences.
std::strong_ordering lex_compare(const PeriodicWord& a, const PeriodicWord& b);

/// Parry condition: every tail of w (including w itself) is strictly below a.
bool parry_admissible(const PeriodicWord& w, const PeriodicWord& a);
/// Same for a finite window read as window . 0^inf.
bool parry_admissible(std::span<const int> window, const PeriodicWord& a);

/// Least rotation of a cyclic word; identifies cycles independent of phase.
DigitWord least_rotation(const DigitWord& w);

std::string to_json(const PeriodicWord& w);
std::string to_string(std::span<const int> w);
PeriodicWord periodic_word_from_json(const std::string& text);

/// Parses "0110" or "0,1,1,0".
DigitWord parse_digits(const std::string& text);

}  // namespace betanorm
