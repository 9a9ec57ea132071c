#pragma once

#include <map>
#include <memory>

#include "menumech/core.hpp"
#include "menumech/menus.hpp"

namespace menumech {

// Indirect mechanism as a tree of finite menus. Children are keyed by the
// option index chosen at this node; a missing child means the continuation
// offers only the outside option.
struct TreeNode {
    FiniteMenu menu;
    std::map<int, std::shared_ptr<const TreeNode>> children;

    explicit TreeNode(FiniteMenu m) : menu(std::move(m)) {}
};

struct MechanismTree {
    std::shared_ptr<const TreeNode> root;
    int depth{0};  // number of rounds
};

struct BuyerStrategy {
    enum class Kind { myopic, tree_optimal, phase_dp };

    Kind kind{Kind::myopic};
    int grid_size{41};  // phase_dp only

    static BuyerStrategy myopic() { return BuyerStrategy{Kind::myopic, 0}; }
    static BuyerStrategy tree_optimal() { return BuyerStrategy{Kind::tree_optimal, 0}; }
    static BuyerStrategy phase_dp(int grid_size) {
        return BuyerStrategy{Kind::phase_dp, grid_size};
    }
};

struct BestResponse {
    Trajectory trajectory;
    double utility{0.0};
};

// Exhaustive backward induction over the tree. Utility ties (within tie_tol)
// break in the seller's favor: larger total payment, then larger allocation.
BestResponse best_response_tree(const MechanismTree& tree, double v, const DiscountSequence& seq,
                                double tie_tol = 1e-12);

// Single-round utility gap of the chosen allocation against the myopic
// optimum on the menu. Always >= 0 up to rounding.
double epsilon_myopic_audit(const QuadraticMenu& menu, double chosen_a, double v);

}  // namespace menumech
