#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace coverlab {

// SplitMix64 finalizer. Used both for stream-key derivation and for seeding
// the xoshiro state, so every stream is a pure function of (seed, index path).
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Child-stream key derivation: replicate i of an experiment with master seed s
// uses key derive_stream_key(s, 1 + i); index 0 is reserved for bookkeeping
// streams (bootstrap resampling and the like). Two mixing rounds keep sibling
// keys statistically unrelated even for adjacent indices.
inline std::uint64_t derive_stream_key(std::uint64_t key, std::uint64_t index) {
    std::uint64_t s = key ^ (0xD1B54A32D192ED03ULL * (index + 1));
    std::uint64_t a = splitmix64_step(s);
    std::uint64_t b = splitmix64_step(s);
    return a ^ (b >> 1) ^ (b << 17);
}

// xoshiro256++ with SplitMix64 seeding. All sampling goes through explicitly
// passed streams; the library never touches global RNG state.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {
        std::uint64_t s = key;
        for (auto& w : state_) w = splitmix64_step(s);
    }

    std::uint64_t key() const { return key_; }

    // Independent substream; deterministic in (key, index) only.
    RngStream child(std::uint64_t index) const {
        return RngStream(derive_stream_key(key_, index));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Exponential with the given rate; -log(1-U) is safe since U < 1.
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    // Unbiased index in [0, n) via 128-bit multiply (Lemire).
    std::size_t uniform_index(std::size_t n) {
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo < n) {
                std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
                if (lo < threshold) continue;
            }
            return static_cast<std::size_t>(m >> 64);
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace coverlab
