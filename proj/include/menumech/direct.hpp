#pragma once

#include <vector>

#include "menumech/core.hpp"

namespace menumech {

// Commitment table: one contract sequence per reportable type.
struct DirectMechanism {
    std::vector<double> types;                 // sorted, distinct, in [0,1]
    std::vector<std::vector<Contract>> rows;   // [type index][round]

    int num_types() const { return static_cast<int>(types.size()); }
    int rounds() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
    const Contract& at(int type_index, int round) const {
        return rows[static_cast<std::size_t>(type_index)][static_cast<std::size_t>(round)];
    }

    void validate() const;  // throws on shape or domain violations

    Trajectory trajectory_for(int type_index) const;
};

// One constraint of the truth-telling / participation family:
// U_{1:T}(types[true_type]; truthful) - U_{1:upto}(types[report]; true type).
struct SlackEntry {
    int true_type{0};
    int report{0};
    int upto{0};  // rounds of the deviation prefix; 0 is the quit-immediately baseline
    double slack{0.0};
};

struct ComplianceReport {
    std::vector<SlackEntry> slacks;
    std::vector<SlackEntry> violations;  // slack < -tolerance
    double min_slack{0.0};

    bool compliant() const { return violations.empty(); }
};

// Evaluates every (true type, report, prefix) slack plus the quit-immediately
// baseline per type.
ComplianceReport check_ic_pir(const DirectMechanism& mech, const DiscountSequence& seq,
                              double tolerance = 1e-9);

double revenue_per_type(const DirectMechanism& mech, int type_index);

// Per type: sum_t allocation*type - sum_t payment, both undiscounted.
// Nonnegative for any mechanism whose participation constraints hold.
std::vector<std::pair<double, double>> audit_payment_bound(const DirectMechanism& mech,
                                                           const DiscountSequence& seq);

// Vertex of the truth-telling/participation polytope under a seeded random
// objective; always passes check_ic_pir.
DirectMechanism random_compliant_mechanism(const std::vector<double>& types,
                                           const DiscountSequence& seq, unsigned seed);

}  // namespace menumech
