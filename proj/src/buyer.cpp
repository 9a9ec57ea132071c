#include "menumech/buyer.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace menumech {

namespace {

struct NodeValue {
    double utility{0.0};
    double revenue{0.0};  // undiscounted payments along the chosen continuation
    int option{-1};
};

struct TreeEval {
    double v;
    double tie_tol;
    const DiscountSequence* seq;
    // Keyed on (node, round) so nodes shared between depths stay correct.
    std::map<std::pair<const TreeNode*, int>, NodeValue> memo;

    // Optimal continuation value from `node` at round t, plus the chosen option.
    // Utility ties (within tie_tol) break toward the seller: larger total
    // payment, then larger allocation (the later index, since options are
    // sorted ascending by allocation).
    NodeValue value(const TreeNode* node, int t) {
        auto it = memo.find({node, t});
        if (it != memo.end()) return it->second;

        NodeValue best;
        for (int i = 0; i < node->menu.size(); ++i) {
            const Contract& c = node->menu.option(i);
            double u = seq->weight(t) * (c.allocation * v - c.payment);
            double r = c.payment;
            if (t + 1 < seq->rounds()) {
                auto child = node->children.find(i);
                if (child != node->children.end()) {
                    NodeValue cont = value(child->second.get(), t + 1);
                    u += cont.utility;
                    r += cont.revenue;
                }
                // Missing child: outside-option-only continuation, worth 0.
            }
            bool take;
            if (best.option < 0 || u > best.utility + tie_tol)
                take = true;
            else if (u < best.utility - tie_tol)
                take = false;
            else
                take = r >= best.revenue - tie_tol;
            if (take) {
                best.utility = std::max(best.utility, u);
                best.revenue = r;
                best.option = i;
            }
        }
        memo.emplace(std::make_pair(node, t), best);
        return best;
    }
};

}  // namespace

BestResponse best_response_tree(const MechanismTree& tree, double v, const DiscountSequence& seq,
                                double tie_tol) {
    if (tree.depth != seq.rounds())
        throw std::invalid_argument("tree depth must equal discount sequence length");
    if (!tree.root) throw std::invalid_argument("tree has no root");

    TreeEval eval{v, tie_tol, &seq, {}};
    BestResponse out;
    out.trajectory.contracts.assign(static_cast<std::size_t>(seq.rounds()), Contract{});
    out.utility = eval.value(tree.root.get(), 0).utility;

    // Replay the chosen path.
    const TreeNode* node = tree.root.get();
    for (int t = 0; t < seq.rounds() && node != nullptr; ++t) {
        int i = eval.value(node, t).option;
        out.trajectory.contracts[static_cast<std::size_t>(t)] = node->menu.option(i);
        auto child = node->children.find(i);
        node = (child != node->children.end()) ? child->second.get() : nullptr;
    }

    // A trailing all-(0,0) suffix is an absorbing quit.
    int first_zero = seq.rounds();
    while (first_zero > 0 &&
           out.trajectory.contracts[static_cast<std::size_t>(first_zero - 1)].is_outside_option())
        --first_zero;
    if (first_zero < seq.rounds()) out.trajectory.dropout_round = first_zero;
    return out;
}

double epsilon_myopic_audit(const QuadraticMenu& menu, double chosen_a, double v) {
    double gap = menu.max_buyer_utility(v) - menu.buyer_utility(v, chosen_a);
    return std::max(gap, 0.0);
}

}  // namespace menumech
