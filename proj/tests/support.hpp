#pragma once

#include <cmath>

#include "crossing/model.hpp"
#include "oracle_values.hpp"

namespace testing {

inline crossing::ProcessModel special(int M = 3, double lambda = 1.0, double a = 0.5, double mu = 1.0) {
    using namespace crossing;
    return ProcessModel(lambda, MarkLaw::geometric(a), ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(mu)), M);
}

// Delayed model used across modules: exponential initial delay, non-unit rates.
inline crossing::ProcessModel delayed() {
    using namespace crossing;
    return ProcessModel(1.5, MarkLaw::geometric(0.4),
                        ObservationLaw(TimeLaw::exponential(3.0), TimeLaw::exponential(2.0)), 2);
}

inline bool within(double value, const oracle::Stat& s, double k = 3.0) {
    return std::abs(value - s.mean) <= k * s.se;
}

}  // namespace testing
