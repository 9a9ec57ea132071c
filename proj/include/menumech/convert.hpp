#pragma once

#include <vector>

#include "menumech/buyer.hpp"
#include "menumech/core.hpp"
#include "menumech/direct.hpp"

namespace menumech {

// Tabulates each grid type's best response to the tree as a commitment row.
// The result passes check_ic_pir.
DirectMechanism indirect_to_direct(const MechanismTree& tree, const DiscountSequence& seq,
                                   const std::vector<double>& types);

struct ConversionResult {
    MechanismTree tree;
    DirectMechanism adjusted;  // input with prices equalized and deferred
    int adjustment_steps{0};
};

// Price equalization: per history node and round, each allocation group's
// price drops to the group minimum and the difference moves to the next
// round, scaled by gamma_t / gamma_{t+1}. With `audit` set, the intermediate
// mechanism is re-checked after every single adjustment.
ConversionResult direct_to_indirect(const DirectMechanism& mech, const DiscountSequence& seq,
                                    bool audit = false, double tolerance = 1e-9);

struct RoundTripReport {
    std::vector<double> types;
    std::vector<double> rev_original;
    std::vector<double> rev_adjusted;   // seller-favored best response to the tree
    std::vector<double> rev_roundtrip;
    bool chain_ok{false};
    double max_violation{0.0};
};

// Checks Rev(v, original) <= Rev(v, tree best response) = Rev(v, round-tripped)
// per type. The middle revenue comes from the buyer's best response to the
// converted tree, which on exact indifference can diverge from the adjusted
// table's truthful row.
RoundTripReport roundtrip_audit(const DirectMechanism& mech, const DiscountSequence& seq,
                                double tolerance = 1e-9);

}  // namespace menumech
