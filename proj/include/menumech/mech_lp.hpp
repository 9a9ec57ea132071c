#pragma once

#include <vector>

#include "menumech/core.hpp"
#include "menumech/direct.hpp"
#include "menumech/lp.hpp"

namespace menumech {

// Variable layout for LPs over direct mechanisms:
// alloc(i, t) then pay(i, t), row-major by type. Extra scalar variables may
// be appended after pay by the caller.
struct MechVars {
    int num_types{0};
    int rounds{0};

    int alloc(int i, int t) const { return i * rounds + t; }
    int pay(int i, int t) const { return num_types * rounds + i * rounds + t; }
    int count() const { return 2 * num_types * rounds; }
};

// Appends the full truth-telling + participation constraint family for the
// given type grid, plus alloc <= 1 box rows, to `lp`. `lp.num_vars` must
// already cover MechVars::count() (extra columns are zero-padded).
MechVars add_ic_pir_constraints(LinearProgram& lp, const std::vector<double>& types,
                                const DiscountSequence& seq);

// Reads a mechanism out of an LP solution using the MechVars layout.
DirectMechanism mechanism_from_solution(const MechVars& vars, const std::vector<double>& types,
                                        const std::vector<double>& x);

}  // namespace menumech
