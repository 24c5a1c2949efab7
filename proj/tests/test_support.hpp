#pragma once

#include <random>

#include "presale/model.hpp"

namespace presale::test {

// Deterministic uniforms for property-style tests (same engine+mapping the
// verification harness uses, so draws are identical across platforms).
class TestRng {
  public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        for (;;) {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0 && u < 1.0) {
                return u;
            }
        }
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    std::mt19937_64 engine_;
};

inline ModelParams random_params(TestRng& rng) {
    const double high = rng.uniform(2.0, 20.0);
    return validate_params(high, high * rng.uniform(0.02, 0.98), rng.uniform(0.05, 0.95),
                           rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0));
}

inline Plan random_plan(TestRng& rng) {
    return Plan{rng.uniform01(), rng.uniform01(), rng.uniform01()};
}

} // namespace presale::test
