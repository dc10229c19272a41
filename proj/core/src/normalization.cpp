#include "betanorm/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_set>

#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"

namespace betanorm {

FieldElement scaled_value(const PisotBase& base, std::span<const int> x) {
    check_digits(x, base.d() - 1);
    return base.c() * value(base.context(), x);
}

DigitWord NormalizedWord::padded(std::size_t n) const {
    DigitWord out = word.pre();
    if (out.size() < n) out.resize(n, 0);
    return out;
}

NormalizedWord normalize_finite(const PisotBase& base, std::span<const int> x) {
    return NormalizedWord{greedy_expand(base, scaled_value(base, x)), x.size()};
}

Shape shape(const PisotBase& base, const NormalizedWord& nw) {
    if (nw.finite()) return Shape{nw.word.pre(), {}};
    const auto& attractor = base.normalization_attractor();
    if (!attractor.contains(nw.word.per())) {
        throw Error(ErrorCode::PeriodNotInAttractor,
                    "period " + to_string(nw.word.per()) + " of " + to_json(nw.word) +
                        " is not among the enumerated attractor cycles");
    }
    return Shape{nw.word.pre(), nw.word.per()};
}

// ---------------------------------------------------------------------------
// PrefixNormalizer

PrefixNormalizer::PrefixNormalizer(const PisotBase& base, std::size_t max_states)
    : base_(base), max_states_(max_states) {
    const auto q = detail::to_i128(base.lattice_denominator());
    fast_ = base.context()->is_unit() && base.lattice().enabled() && q.has_value();
    if (q) den_ = *q;
    next_term_ = base.c().mul_beta_inv();
    reset();
}

void PrefixNormalizer::reset() {
    acc_ = detail::LatticePoint{};
    acc_.den = den_;
    digits_.clear();
    n_ = 0;
    overflowed_at_ = 0;
    cached_.reset();
}

const detail::LatticePoint* PrefixNormalizer::term(std::size_t k) {
    while (terms_ok_ && terms_.size() < k) {
        auto lp = base_.lattice().from_field(next_term_, den_);
        if (!lp) {
            terms_ok_ = false;
            break;
        }
        terms_.push_back(*lp);
        next_term_ = next_term_.mul_beta_inv();
    }
    return k <= terms_.size() ? &terms_[k - 1] : nullptr;
}

void PrefixNormalizer::push(int digit) {
    if (digit < 0 || digit >= base_.d()) {
        throw Error(ErrorCode::DigitOutOfRange, "digit " + std::to_string(digit) + " outside the alphabet");
    }
    digits_.push_back(digit);
    ++n_;
    cached_.reset();
    if (fast_ && overflowed_at_ == 0) {
        const auto* t = term(n_);
        if (t == nullptr || !detail::Lattice::add_scaled(acc_, *t, digit)) overflowed_at_ = n_;
    }
}

void PrefixNormalizer::pop() {
    if (n_ == 0) return;
    const int digit = digits_.back();
    cached_.reset();
    if (fast_ && overflowed_at_ == 0) {
        detail::Lattice::add_scaled(acc_, *term(n_), -digit);
        digits_.pop_back();
        --n_;
        return;
    }
    digits_.pop_back();
    --n_;
    if (fast_ && overflowed_at_ > n_) {
        const auto digits = digits_;
        reset();
        for (int x : digits) push(x);
    }
}

const PeriodicWord& PrefixNormalizer::orbit() {
    if (cached_) return *cached_;
    if (fast_ && overflowed_at_ == 0) {
        const auto o = base_.lattice().greedy(acc_, max_states_);
        switch (o.status) {
            case detail::OrbitStatus::Finite:
            case detail::OrbitStatus::Periodic:
                cached_ = PeriodicWord(o.pre, o.per);
                return *cached_;
            case detail::OrbitStatus::Budget:
                throw Error(ErrorCode::StateBudgetExceeded,
                            "no cycle within " + std::to_string(max_states_) + " states");
            case detail::OrbitStatus::Overflow:
                break;
        }
    }
    cached_ = greedy_expand(base_, scaled_value(base_, digits_), max_states_);
    return *cached_;
}

bool PrefixNormalizer::finite() {
    if (fast_ && overflowed_at_ == 0 && !base_.lattice().may_be_finite(acc_)) return false;
    return orbit().is_finite();
}

std::optional<DigitWord> PrefixNormalizer::finite_digits() {
    if (!finite()) return std::nullopt;
    return orbit().pre();
}

PeriodicWord PrefixNormalizer::normalization() { return orbit(); }

// ---------------------------------------------------------------------------
// estimate_K

KEstimate estimate_K(const PisotBase& base, std::size_t max_len, std::uint64_t seed, std::size_t samples) {
    if (max_len < 4) throw Error(ErrorCode::InvalidArgument, "estimate_K needs max_len >= 4");
    KEstimate est;
    const auto d = static_cast<std::size_t>(base.d());
    // Exhaustive up to the largest length whose whole tree fits 2^18 nodes.
    std::size_t nodes = 1, len = 0;
    while (len < max_len && nodes * d <= (std::size_t{1} << 18)) {
        nodes *= d;
        ++len;
    }
    est.exhaustive_length = len;
    int best = std::numeric_limits<int>::min();

    PrefixNormalizer pn(base);
    auto record = [&] {
        if (auto digits = pn.finite_digits()) {
            best = std::max(best, static_cast<int>(digits->size()) - static_cast<int>(pn.size()));
        }
    };
    // Depth-first enumeration; pushing digit by digit shares prefix sums.
    std::vector<int> word;
    for (;;) {
        if (word.size() < len) {
            word.push_back(0);
            pn.push(0);
            record();
            continue;
        }
        while (!word.empty() && word.back() == base.d() - 1) {
            word.pop_back();
            pn.pop();
        }
        if (word.empty()) break;
        const int next = word.back() + 1;
        word.back() = next;
        pn.pop();
        pn.push(next);
        record();
    }

    if (max_len > len) {
        Philox rng(seed, 0x4b);
        for (std::size_t s = 0; s < samples; ++s) {
            const std::size_t n = len + 1 + rng.below(static_cast<std::uint32_t>(max_len - len));
            pn.reset();
            for (std::size_t i = 0; i < n; ++i) pn.push(static_cast<int>(rng.below(static_cast<std::uint32_t>(d))));
            record();
        }
        est.sampled = samples;
    }
    est.observed = best == std::numeric_limits<int>::min() ? 0 : best;
    est.K = std::max(1, est.observed);
    return est;
}

// ---------------------------------------------------------------------------
// Blocks

DigitWord BlockDecomposition::normalized_concat() const {
    DigitWord out;
    for (const auto& b : normalized) out.insert(out.end(), b.begin(), b.end());
    return out;
}

BlockDecomposition block_split(const PisotBase& base, DigitSource& source, int K, std::size_t budget,
                               std::size_t max_blocks) {
    if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    BlockDecomposition out;
    std::deque<int> buf;
    const auto k = static_cast<std::size_t>(K);
    auto fill = [&](std::size_t need) {
        while (buf.size() < need) {
            const auto digit = source.next();
            if (!digit) return false;
            if (*digit < 0 || *digit >= base.d()) {
                throw Error(ErrorCode::DigitOutOfRange, "stream digit " + std::to_string(*digit) + " outside the alphabet");
            }
            buf.push_back(*digit);
        }
        return true;
    };

    PrefixNormalizer pn(base);
    while (out.blocks.size() < max_blocks) {
        pn.reset();
        std::size_t n = 0;
        for (;;) {
            if (!fill(n + 1 + 2 * k)) {
                out.pending.assign(buf.begin(), buf.end());
                return out;
            }
            pn.push(buf[n]);
            ++n;
            if (n > budget) {
                throw Error(ErrorCode::BudgetExceeded,
                            "no block completed within " + std::to_string(budget) + " digits");
            }
            bool zeros = true;
            for (std::size_t j = n; j < n + 2 * k && zeros; ++j) zeros = buf[j] == 0;
            if (!zeros) continue;
            const auto digits = pn.finite_digits();
            if (!digits || digits->size() > n + k) continue;

            DigitWord block(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n + k));
            DigitWord normalized = *digits;
            normalized.resize(n + k, 0);
            buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n + k));
            out.cuts.push_back(out.cuts.back() + n + k);
            out.blocks.push_back(std::move(block));
            out.normalized.push_back(std::move(normalized));
            break;
        }
    }
    out.pending.assign(buf.begin(), buf.end());
    return out;
}

DigitWord TwoSidedNormalization::positive_part() const {
    DigitWord out;
    for (long i = 1; i <= stable_end; ++i) out.push_back(at(i));
    return out;
}

TwoSidedNormalization two_sided_normalize(const PisotBase& base, const Window& x, int K, std::size_t budget) {
    SpanSource source(x.digits);
    const auto dec = block_split(base, source, K, budget);
    const long offset = x.first_index() - 1;
    if (dec.blocks.empty() || offset + static_cast<long>(dec.cuts[1]) > 0) {
        throw Error(ErrorCode::WindowTooShort, "no complete block ends at or before coordinate 0");
    }
    TwoSidedNormalization out;
    out.first_index = x.first_index();
    out.digits = dec.normalized_concat();
    for (std::size_t i = 1; i < dec.cuts.size(); ++i) out.cuts.push_back(offset + static_cast<long>(dec.cuts[i]));
    out.stable_begin = out.cuts.front() + 1;
    out.stable_end = out.cuts.back();
    return out;
}

// ---------------------------------------------------------------------------
// C and C'

namespace {

// A d-ary word u of length n with sum u_k beta^-k == start: walk
// s_k = beta s_{k-1} - u_k from s_0 = start down to s_n = 0.
std::optional<DigitWord> digits_with_value(const PisotBase& base, const FieldElement& start, std::size_t n) {
    const auto& ctx = base.context();
    // beta^n * start = u_1 beta^(n-1) + ... + u_n must lie in Z[beta].
    {
        FieldElement scaled = start;
        for (std::size_t i = 0; i < n; ++i) scaled = scaled.mul_beta();
        for (const auto& q : scaled.coeffs()) {
            if (q.get_den() != 1) return std::nullopt;
        }
    }
    // room[r]: the largest value r digits can carry, (d-1)/(beta-1) (1 - beta^-r).
    // Compared exactly: early states have huge coefficients and no usable
    // floating value.
    std::vector<FieldElement> room;
    {
        const FieldElement top = FieldElement(ctx, Rational(base.d() - 1)) / (FieldElement::beta(ctx) - Rational(1));
        FieldElement tail = top;
        for (std::size_t r = 0; r <= n; ++r) {
            room.push_back(top - tail);
            tail = tail.mul_beta_inv();
        }
    }
    std::vector<std::complex<long double>> conj;
    for (const auto& disk : ctx->conjugates()) conj.push_back(disk.center);

    // Remaining digits r contribute sum_{j=1..r} u_j beta_i^-j to the conjugates.
    auto conj_room = [&](std::size_t r, std::complex<long double> z) {
        long double s = 0, p = 1;
        for (std::size_t j = 0; j < r; ++j) {
            p /= std::abs(z);
            s += p;
        }
        return (base.d() - 1) * s * 1.001L + 1e-9L;
    };
    auto conj_ok = [&](const FieldElement& y, std::size_t r) {
        for (const auto& z : conj) {
            long double magnitude = 0, power = 1;
            for (const auto& q : y.coeffs()) {
                magnitude += std::fabs(static_cast<long double>(q.get_d())) * power;
                power *= std::abs(z);
            }
            if (std::abs(y.approx_at(z)) > conj_room(r, z) + 1e-12L * magnitude) return false;
        }
        return true;
    };

    struct Key {
        std::size_t depth;
        FieldElement s;
        bool operator==(const Key& o) const { return depth == o.depth && s == o.s; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return k.s.hash() * 31 + k.depth; }
    };
    std::unordered_set<Key, KeyHash> dead;
    DigitWord u;

    std::function<bool(const FieldElement&, std::size_t)> dfs = [&](const FieldElement& s, std::size_t k) {
        if (k == n) return s.is_zero();
        if (dead.count(Key{k, s})) return false;
        const FieldElement bs = s.mul_beta();
        const std::size_t r = n - k - 1;
        for (int digit = 0; digit < base.d(); ++digit) {
            const FieldElement next = bs - Rational(digit);
            if (sign(next) < 0) break;
            if (compare(next, room[r]) == std::strong_ordering::greater || !conj_ok(next, r)) continue;
            u.push_back(digit);
            if (dfs(next, k + 1)) return true;
            u.pop_back();
        }
        dead.insert(Key{k, s});
        return false;
    };
    if (!dfs(start, 0)) return std::nullopt;
    return u;
}

}  // namespace

std::optional<DigitWord> preimage_word(const PisotBase& base, const DigitWord& target, std::size_t n) {
    return digits_with_value(base, value(base.context(), std::span<const int>(target)) / base.c(), n);
}

namespace {

Window zero_range(Window w, long from, long to) {
    for (long i = std::max(from, w.first_index()); i <= std::min(to, w.last_index()); ++i) {
        w.digits[static_cast<std::size_t>(i - w.first_index())] = 0;
    }
    return w;
}

DigitWord slice(const Window& w, long from, long to) {
    DigitWord out;
    for (long i = from; i <= to; ++i) out.push_back(w.at(i));
    return out;
}

DigitWord two_sided_slice(const TwoSidedNormalization& t, long from, long to) {
    DigitWord out;
    for (long i = from; i <= to; ++i) out.push_back(t.at(i));
    return out;
}

// Q(x) on the coordinates 1 ... m that its one-sided blocks determine.
DigitWord one_sided_known(const PisotBase& base, const Window& w, int K) {
    const DigitWord positive(w.digits.begin() + (1 - w.first_index()), w.digits.end());
    SpanSource source(positive);
    return block_split(base, source, K, positive.size() + 1).normalized_concat();
}

// Compares P on 1 ... size of `q` against q, at most up to p.stable_end.
bool agree(const TwoSidedNormalization& p, const DigitWord& q, long& checked) {
    checked = std::min(p.stable_end, static_cast<long>(q.size()));
    for (long i = 1; i <= checked; ++i) {
        if (p.at(i) != q[static_cast<std::size_t>(i - 1)]) return false;
    }
    return true;
}

}  // namespace

CoordinateMaps coordinate_maps(const PisotBase& base, const Window& x, int K) {
    const auto p = two_sided_normalize(base, x, K);
    if (x.first_index() > -1) throw Error(ErrorCode::NoStraddlingBlock, "window does not reach coordinate -1");

    // A_0 = x_{-a} ... x_b: from the start of the block holding coordinate -1
    // to the first cut at or after 1, so a > 0 and b > 0 (blocks merged).
    long start = x.first_index();
    for (long cut : p.cuts) {
        if (cut < -1) start = cut + 1;
    }
    const auto b_it = std::find_if(p.cuts.begin(), p.cuts.end(), [](long cut) { return cut >= 1; });
    if (b_it == p.cuts.end()) throw Error(ErrorCode::NoStraddlingBlock, "no block ends after coordinate 0");
    const long b = *b_it;

    CoordinateMaps out;
    out.a = -start;
    out.b = b;
    // Zeroing A_0's nonpositive part leaves x_1 x_2 ... to be normalized from
    // scratch, which is Q(x). Writing the displayed epsilon' over 1..b as well
    // would normalize it a second time, so x_1..x_b stay.
    out.c = zero_range(x, start, 0);

    // C'(x) needs c * value(u) == value(eps) + c * value(x_{b+1} ... x_{b'}).
    // A word of length b alone often cannot reach value(eps), so u may run
    // on to a later cut b' and absorb the difference there.
    const DigitWord eps = two_sided_slice(p, 1, b);
    const auto& ctx = base.context();
    const FieldElement eps_over_c = value(ctx, std::span<const int>(eps)) / base.c();
    const FieldElement head = value(ctx, std::span<const int>(slice(x, 1, b)));
    std::optional<DigitWord> u;
    for (auto it = b_it; it != p.cuts.end() && !u; ++it) {
        u = digits_with_value(base, eps_over_c + value(ctx, std::span<const int>(slice(x, 1, *it))) - head,
                              static_cast<std::size_t>(*it));
    }
    long checked = 0;
    out.p_of_c_equals_q = agree(two_sided_normalize(base, out.c, K), one_sided_known(base, x, K), checked) &&
                          checked >= b;
    out.checked_end = checked;
    if (!u) return out;

    out.b_prime = static_cast<long>(u->size());
    Window cp = zero_range(x, start, 0);
    for (long i = 1; i <= out.b_prime; ++i) {
        cp.digits[static_cast<std::size_t>(i - x.first_index())] = (*u)[static_cast<std::size_t>(i - 1)];
    }
    out.q_of_c_prime_equals_p = agree(p, one_sided_known(base, cp, K), checked) && checked >= out.b_prime;
    out.checked_end = std::min(out.checked_end, checked);
    out.c_prime = std::move(cp);
    return out;
}

}  // namespace betanorm
