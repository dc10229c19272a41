#include "betanorm/words.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "betanorm/error.hpp"

namespace betanorm {

void check_digits(std::span<const int> w, int bound) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] > bound) {
            throw Error(ErrorCode::DigitOutOfRange, "digit " + std::to_string(w[i]) + " at position " +
                                                        std::to_string(i + 1) + " outside 0.." +
                                                        std::to_string(bound));
        }
    }
}

PeriodicWord::PeriodicWord(DigitWord pre, DigitWord per) : pre_(std::move(pre)), per_(std::move(per)) {
    if (std::all_of(per_.begin(), per_.end(), [](int x) { return x == 0; })) per_.clear();
    if (per_.empty()) {
        while (!pre_.empty() && pre_.back() == 0) pre_.pop_back();
        return;
    }
    // Primitive root through the border array.
    const std::size_t n = per_.size();
    std::vector<std::size_t> border(n, 0);
    for (std::size_t i = 1, k = 0; i < n; ++i) {
        while (k > 0 && per_[i] != per_[k]) k = border[k - 1];
        if (per_[i] == per_[k]) ++k;
        border[i] = k;
    }
    const std::size_t p = n - border[n - 1];
    if (n % p == 0) per_.resize(p);
    // Fold the preperiod into the period while its last symbol repeats.
    while (!pre_.empty() && pre_.back() == per_.back()) {
        pre_.pop_back();
        std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
    }
}

DigitWord PeriodicWord::prefix(std::size_t n) const {
    DigitWord out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
    return out;
}

namespace {

std::size_t horizon(std::size_t pre_a, std::size_t per_a, std::size_t pre_b, std::size_t per_b) {
    const std::size_t l = std::lcm(std::max<std::size_t>(per_a, 1), std::max<std::size_t>(per_b, 1));
    return std::max(pre_a, pre_b) + l + 1;
}

}  // namespace

std::strong_ordering lex_compare(const PeriodicWord& a, const PeriodicWord& b) {
    const std::size_t n = horizon(a.pre().size(), a.per().size(), b.pre().size(), b.per().size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.at(i) != b.at(i)) return a.at(i) <=> b.at(i);
    }
    return std::strong_ordering::equal;
}

bool parry_admissible(const PeriodicWord& w, const PeriodicWord& a) {
    const std::size_t starts = w.is_finite() ? w.pre().size() : w.length();
    for (std::size_t k = 0; k < starts; ++k) {
        const std::size_t pre_tail = k < w.pre().size() ? w.pre().size() - k : 0;
        const std::size_t n = horizon(pre_tail, w.per().size(), a.pre().size(), a.per().size());
        bool less = false;
        for (std::size_t j = 0; j < n; ++j) {
            const int x = w.at(k + j), y = a.at(j);
            if (x != y) {
                if (x > y) return false;
                less = true;
                break;
            }
        }
        if (!less) return false;
    }
    return true;
}

bool parry_admissible(std::span<const int> window, const PeriodicWord& a) {
    const std::size_t tail = a.length() + 1;
    for (std::size_t k = 0; k < window.size(); ++k) {
        const std::size_t n = window.size() - k + tail;
        bool less = false;
        for (std::size_t j = 0; j < n; ++j) {
            const int x = k + j < window.size() ? window[k + j] : 0;
            const int y = a.at(j);
            if (x != y) {
                if (x > y) return false;
                less = true;
                break;
            }
        }
        if (!less) return false;
    }
    return true;
}

DigitWord least_rotation(const DigitWord& w) {
    DigitWord best = w;
    DigitWord r = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(r.begin(), r.begin() + 1, r.end());
        if (r < best) best = r;
    }
    return best;
}

std::string to_json(const PeriodicWord& w) {
    nlohmann::json j;
    j["pre"] = w.pre();
    j["per"] = w.per();
    return j.dump();
}

std::string to_string(std::span<const int> w) {
    std::string s;
    const bool wide = std::any_of(w.begin(), w.end(), [](int x) { return x > 9; });
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

PeriodicWord periodic_word_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        return PeriodicWord(j.at("pre").get<DigitWord>(), j.at("per").get<DigitWord>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

DigitWord parse_digits(const std::string& text) {
    DigitWord out;
    if (text.find(',') != std::string::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (piece.empty() || !std::all_of(piece.begin(), piece.end(), [](char c) { return c >= '0' && c <= '9'; })) {
                throw Error(ErrorCode::ParseError, "malformed digit list '" + text + "'");
            }
            out.push_back(std::stoi(piece));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }
    for (char c : text) {
        if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "malformed digit word '" + text + "'");
        out.push_back(c - '0');
    }
    return out;
}

}  // namespace betanorm
