#ifndef SLELAB_RNG_HPP
#define SLELAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace slelab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A block is a pure function of (seed, stream, counter), so any path /
// worker layout that assigns one stream per path reproduces bit-identical
// output regardless of scheduling.
namespace philox {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(0xD2511F53u, c0, hi0, lo0);
        mulhilo(0xCD9E8D57u, c2, hi1, lo1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
}

} // namespace philox

// One stream per Monte Carlo path: draws consume the counter sequentially.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    // two 64-bit words from one block
    std::array<std::uint64_t, 2> raw() {
        auto b = philox::block(seed_, stream_, ctr_++);
        return {(static_cast<std::uint64_t>(b[0]) << 32) | b[1],
                (static_cast<std::uint64_t>(b[2]) << 32) | b[3]};
    }

    // uniform on (0,1]
    double u01() {
        auto r = raw();
        return ((r[0] >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal via Box-Muller, one block per draw
    double normal() {
        auto r = raw();
        double u1 = ((r[0] >> 11) + 1) * 0x1.0p-53;
        double u2 = (r[1] >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang; shape < 1 boosted through Gamma(shape+1) * U^(1/shape)
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = u01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double z = normal();
            double v = 1.0 + c * z;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = u01();
            if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    std::uint64_t counter() const { return ctr_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t ctr_ = 0;
};

} // namespace slelab

#endif
