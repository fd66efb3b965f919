#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace codedsim {

// Mixes a 64-bit value through the splitmix64 finalizer. Used for deriving
// independent stream seeds from a master seed; the constants are the
// standard splitmix64 ones.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for stream `stream` derived from `master`. Distinct streams give
// statistically independent generators; same inputs give the same seed on
// every platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream + 1));
}

// Deterministic RNG wrapper. mt19937_64 has a standard-mandated sequence,
// and all distributions here are hand-rolled on top of raw 64-bit draws, so
// results are reproducible across compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on (0, 1), strictly excluding both endpoints.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Exponential with rate lambda (mean 1/lambda).
    double exponential(double lambda) {
        return -std::log(uniform01()) / lambda;
    }

    // Standard normal via Box-Muller, caching the spare deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = uniform01();
        double v = uniform01();
        double rad = std::sqrt(-2.0 * std::log(u));
        double ang = 2.0 * 3.14159265358979323846 * v;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    // Uniform integer in [0, n), rejection-sampled so the distribution is
    // exact and the draw count is platform-independent in practice.
    std::uint64_t bounded(std::uint64_t n) {
        std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace codedsim
