#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., Random123). The key is
// the master seed; the upper two counter words select a substream, the lower
// two count blocks, so substreams never overlap and results do not depend on
// how work is split between threads.

#include <array>
#include <cstdint>

namespace betanorm {

class Philox {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(substream) {}

    static Block block(Block ctr, std::array<std::uint32_t, 2> key) noexcept {
        for (int r = 0; r < 10; ++r) {
            if (r) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

    result_type operator()() noexcept {
        if (used_ == 4) {
            buf_ = block({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
            ++counter_;
            used_ = 0;
        }
        return buf_[used_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    /// Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
    std::uint32_t below(std::uint32_t n) noexcept {
        std::uint64_t m = std::uint64_t{(*this)()} * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
            while (low < threshold) {
                m = std::uint64_t{(*this)()} * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    Block buf_{};
    int used_ = 4;
};

}  // namespace betanorm
