#pragma once

#include <array>
#include <cstdint>

namespace leanreg {

uint64_t splitmix64(uint64_t x);

/// Order-insensitive-free hash chaining for deriving stream ids.
uint64_t hash_combine(uint64_t h, uint64_t v);

/// Counter-based random stream (Philox4x32-10). A stream is fully determined
/// by (seed, stream_id); draws are a pure function of the block counter, so
/// identical streams reproduce identical sequences on any thread layout.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(uint64_t seed, uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {}

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

    /// Independent stream derived from this one's identity and a tag.
    RngStream substream(uint64_t tag) const {
        return RngStream(seed_, hash_combine(stream_id_, tag));
    }

    uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform01();
    /// Uniform on (0, 1].
    double uniform_pos();
    /// Unbiased uniform integer on {0, ..., n-1}.
    uint64_t below(uint64_t n);
    /// Standard normal via Box-Muller (second draw of a pair is cached).
    double normal();

  private:
    std::array<uint32_t, 4> philox_block(uint64_t counter) const;

    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace leanreg
