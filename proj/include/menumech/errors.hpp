#pragma once

#include <stdexcept>

namespace menumech {

// The buyer's observed choice is incompatible with every type in the current
// candidate interval (empty refinement intersection).
struct inconsistent_buyer_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strategic search would exceed its node budget.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Final-round price equalization found unequal payments within a group.
struct equalization_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simplex iteration guard tripped.
struct lp_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace menumech
