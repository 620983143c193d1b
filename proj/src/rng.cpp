#include "leanreg/rng.hpp"

#include <cmath>
#include <numbers>

namespace leanreg {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t hash_combine(uint64_t h, uint64_t v) {
    return splitmix64(h ^ (splitmix64(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
    const uint64_t p0 = uint64_t(kPhiloxM0) * c[0];
    const uint64_t p1 = uint64_t(kPhiloxM1) * c[2];
    const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
    const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> RngStream::philox_block(uint64_t counter) const {
    std::array<uint32_t, 4> c = {uint32_t(counter), uint32_t(counter >> 32),
                                 uint32_t(stream_id_), uint32_t(stream_id_ >> 32)};
    std::array<uint32_t, 2> k = {uint32_t(seed_), uint32_t(seed_ >> 32)};
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k);
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

uint64_t RngStream::next_u64() {
    if (buf_pos_ >= 4) {
        buf_ = philox_block(counter_++);
        buf_pos_ = 0;
    }
    const uint64_t lo = buf_[buf_pos_];
    const uint64_t hi = buf_[buf_pos_ + 1];
    buf_pos_ += 2;
    return lo | (hi << 32);
}

double RngStream::uniform01() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

uint64_t RngStream::below(uint64_t n) {
    const uint64_t rem = ~uint64_t(0) % n;
    // accept below the largest multiple of n so residues stay uniform
    const uint64_t limit = ~uint64_t(0) - rem;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * std::numbers::pi * uniform01();
    spare_normal_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

}  // namespace leanreg
