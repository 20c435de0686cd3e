#pragma once

#include <string_view>

namespace liftlab {

/// Hard limit on exhaustive work. `force` (or LIFTLAB_GUARD_OVERRIDE=1 in the
/// environment) lets a run exceed the limit after printing the cost estimate.
struct Guard {
    bool force = false;

    /// Throws Error{GuardExceeded} when log2(cost) > log2(limit) and the guard is not forced.
    void require(std::string_view what, double log2_cost, double log2_limit) const;

    static Guard from_env(bool force_flag = false);
};

}  // namespace liftlab
