#pragma once

#include <cstdint>
#include <random>

namespace kiq {

/// Seeded Gaussian stream. Box-Muller over std::mt19937_64 instead of
/// std::normal_distribution: the mt19937_64 sequence is pinned by the
/// standard while normal_distribution's algorithm is not, and golden-file
/// regressions compare noisy payloads across platforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in (0, 1].
    double uniform() {
        return (static_cast<double>(engine_()) + 1.0) * 0x1.0p-64;
    }

    /// Standard normal deviate.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace kiq
