#pragma once

#include <cstdint>
#include <string_view>

namespace permgrow {

// Counter-free splittable RNG. Every consumer derives its own stream from
// (seed, operation-id, index), so results never depend on call interleaving
// or thread count. The generator is SplitMix64.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    static RngStream derive(std::uint64_t seed, std::string_view op_id,
                            std::uint64_t index = 0) {
        std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the op id
        for (char c : op_id) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        std::uint64_t s = seed;
        s = mix(s + 0x9e3779b97f4a7c15ULL + h);
        s = mix(s + 0x9e3779b97f4a7c15ULL + index);
        return RngStream(s);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on [0, n) by rejection; n = 0 returns 0.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    bool coin() { return (next() >> 63) != 0; }

    double unit() { return (next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace permgrow
