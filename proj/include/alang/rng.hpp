#pragma once

// Deterministic RNG streams for parallel chains.
//
// A stream is identified by (seed, stream_id). The full 256-bit xoshiro
// state is derived by hashing both through SplitMix64, so every
// (chain, repeat) pair gets its own statistically independent stream from
// one master seed and can be recreated anywhere without coordination.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>

namespace alang {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Ziggurat tables for the standard normal (128 layers), built once at
// startup from the density itself rather than embedded as a constant blob.
struct ZigguratTables {
    struct Layer {
        std::int64_t k;  // accept threshold on the signed 52-bit mantissa
        double w;        // x[i] / 2^52
    };
    Layer lay[128];
    double x[129];
    double y[129];

    ZigguratTables() {
        const double r = 3.442619855899;           // x coordinate of layer 1
        const double v = 9.91256303526217e-3;      // area of each layer
        x[0] = v / std::exp(-0.5 * r * r);
        x[1] = r;
        double yi = std::exp(-0.5 * r * r);
        double xi = r;
        for (int i = 2; i < 128; ++i) {
            yi += v / xi;
            xi = std::sqrt(-2.0 * std::log(yi));
            x[i] = xi;
        }
        x[128] = 0.0;
        for (int i = 0; i <= 128; ++i) y[i] = std::exp(-0.5 * x[i] * x[i]);
        y[128] = 1.0;
        for (int i = 0; i < 128; ++i) {
            lay[i].k = static_cast<std::int64_t>((x[i + 1] / x[i]) * 4503599627370496.0);
            lay[i].w = x[i] / 4503599627370496.0;
        }
    }
};

// Namespace-scope inline variable: no init-guard check on the hot path.
inline const ZigguratTables ziggurat_tables{};

inline const ZigguratTables& ziggurat() { return ziggurat_tables; }

}  // namespace detail

class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), counter_(0) {
        std::uint64_t h = seed ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
        std::uint64_t x = detail::splitmix64(h) ^ stream_id;
        for (auto& word : state_) word = detail::splitmix64(x);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    // Number of 64-bit words consumed so far.
    std::uint64_t counter() const { return counter_; }

    // xoshiro256++
    inline std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        ++counter_;
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    inline double next_uniform() {
        return static_cast<double>(static_cast<std::int64_t>(next_u64() >> 11)) * 0x1.0p-53;
    }

    // Uniform on (0, 1], safe as a log argument.
    inline double next_uniform_pos() {
        return static_cast<double>(static_cast<std::int64_t>((next_u64() >> 11) + 1)) * 0x1.0p-53;
    }

    // Standard normal via the ziggurat method. Bits of one word: layer index
    // in 0-6, signed 52-bit mantissa in 11-63. Consumes one word on the
    // common path (~98.5%); wedge and tail cases consume extra words. The
    // count is data dependent but fully determined by the stream state, so
    // replaying a stream reproduces the sequence bit for bit.
    inline double next_normal() {
        const auto& zig = detail::ziggurat_tables;
        for (;;) {
            const std::uint64_t u = next_u64();
            const int i = static_cast<int>(u & 127);
            const std::int64_t iz = static_cast<std::int64_t>(u) >> 11;
            const double v = static_cast<double>(iz) * zig.lay[i].w;
            const std::int64_t az = iz < 0 ? -iz : iz;
            if (az < zig.lay[i].k) return v;
            if (i == 0) {
                // Tail beyond x[1] by Marsaglia's method.
                const double r = 3.442619855899;
                double a, b;
                do {
                    a = -std::log(next_uniform_pos()) / r;
                    b = -std::log(next_uniform_pos());
                } while (b + b < a * a);
                return std::copysign(r + a, v);
            }
            const double u2 = next_uniform();
            const double av = v < 0.0 ? -v : v;
            if (zig.y[i] + u2 * (zig.y[i + 1] - zig.y[i]) < std::exp(-0.5 * av * av))
                return v;
        }
    }

  private:
    static inline std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_;
};

// d independent standard normal variates.
inline void standard_normal_vector(RngStream& rng, std::span<double> out) {
    for (double& v : out) v = rng.next_normal();
}

// Encodes (repeat, chain) into a stream id; chains and repeats get disjoint
// id ranges so every worker draws from its own stream.
inline std::uint64_t stream_id_for(std::uint64_t repeat, std::uint64_t chain) {
    return (repeat << 34) | chain;
}

}  // namespace alang
