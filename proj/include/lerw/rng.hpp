#pragma once

#include <array>
#include <cstdint>

namespace lerw {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A stream is keyed by (master_seed, stream_index); the counter advances by
// one block per 4 outputs.  Identical (seed, stream) => identical sequence,
// independent of how trials are scheduled across workers.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : seed_(master_seed), stream_(stream_index) {
        std::uint64_t k0 = mix(master_seed);
        std::uint64_t k1 = mix(stream_index ^ 0x5851f42d4c957f2dULL);
        key_[0] = std::uint32_t(k0);
        key_[1] = std::uint32_t(k0 >> 32);
        key_[2] = std::uint32_t(k1);
        key_[3] = std::uint32_t(k1 >> 32);
        counter_ = {0, 0, 0, 0};
        pos_ = 4;
        step_bits_ = 0;
        step_count_ = 0;
    }

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        return (std::uint64_t(next_u32()) << 32) | lo;
    }

    // uniform in [0,1) with 53 random bits
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform over {0,1,2,3}; 2 bits per draw, 16 draws per u32
    int next_step() {
        if (step_count_ == 0) {
            step_bits_ = next_u32();
            step_count_ = 16;
        }
        int s = int(step_bits_ & 3u);
        step_bits_ >>= 2;
        --step_count_;
        return s;
    }

    // uniform in {0,...,m-1} (m small; rejection on the top range)
    std::uint32_t next_below(std::uint32_t m) {
        std::uint64_t threshold = (0x100000000ULL / m) * m;
        for (;;) {
            std::uint32_t v = next_u32();
            if (v < threshold) return v % m;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                         std::uint32_t& hi) {
        std::uint64_t p = std::uint64_t(a) * b;
        lo = std::uint32_t(p);
        hi = std::uint32_t(p >> 32);
    }

    void refill() {
        constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
        std::uint32_t c0 = counter_[0], c1 = counter_[1], c2 = counter_[2], c3 = counter_[3];
        std::uint32_t k0 = key_[0], k1 = key_[1];
        // fold the high key words into the initial counter so all 128 key bits matter
        c2 ^= key_[2];
        c3 ^= key_[3];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mul_hilo(kM0, c0, lo0, hi0);
            mul_hilo(kM1, c2, lo1, hi1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0;
            k1 += kW1;
        }
        block_ = {c0, c1, c2, c3};
        pos_ = 0;
        if (++counter_[0] == 0 && ++counter_[1] == 0 && ++counter_[2] == 0)
            ++counter_[3];
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint32_t, 4> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_;
    int pos_;
    std::uint32_t step_bits_;
    int step_count_;
};

}  // namespace lerw
