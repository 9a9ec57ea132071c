#include "menumech/convert.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "menumech/errors.hpp"

namespace menumech {

namespace {

constexpr double kGroupTol = 1e-12;

// Member indices sorted by round-t allocation, clustered within kGroupTol.
std::vector<std::vector<int>> group_by_allocation(const DirectMechanism& mech,
                                                  const std::vector<int>& members, int t) {
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        double xa = mech.at(a, t).allocation, xb = mech.at(b, t).allocation;
        if (xa != xb) return xa < xb;
        return a < b;
    });
    std::vector<std::vector<int>> groups;
    for (int v : sorted) {
        double a = mech.at(v, t).allocation;
        if (groups.empty() ||
            a - mech.at(groups.back().front(), t).allocation > kGroupTol)
            groups.emplace_back();
        groups.back().push_back(v);
    }
    return groups;
}

}  // namespace

DirectMechanism indirect_to_direct(const MechanismTree& tree, const DiscountSequence& seq,
                                   const std::vector<double>& types) {
    if (tree.depth != seq.rounds())
        throw std::invalid_argument("tree depth must match the discount horizon");
    DirectMechanism mech;
    mech.types = types;
    mech.rows.reserve(types.size());
    for (double v : types) mech.rows.push_back(best_response_tree(tree, v, seq).trajectory.contracts);
    mech.validate();
    return mech;
}

ConversionResult direct_to_indirect(const DirectMechanism& mech, const DiscountSequence& seq,
                                    bool audit, double tolerance) {
    mech.validate();
    if (mech.rounds() != seq.rounds()) throw std::invalid_argument("mechanism horizon mismatch");
    if (!check_ic_pir(mech, seq, tolerance).compliant())
        throw std::invalid_argument("input mechanism is not compliant");

    ConversionResult out;
    out.adjusted = mech;
    DirectMechanism& work = out.adjusted;
    const int T = work.rounds();
    auto pay = [&work](int v, int t) -> double& {
        return work.rows[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)].payment;
    };
    auto audit_step = [&] {
        ++out.adjustment_steps;
        if (audit && !check_ic_pir(work, seq, tolerance).compliant())
            throw std::logic_error("price adjustment broke compliance");
    };

    struct Task {
        std::vector<int> members;
        std::shared_ptr<TreeNode> parent;  // null for the root
        int parent_option{0};
    };

    std::vector<int> all(static_cast<std::size_t>(work.num_types()));
    for (int i = 0; i < work.num_types(); ++i) all[static_cast<std::size_t>(i)] = i;
    std::vector<Task> level{Task{std::move(all), nullptr, 0}};

    for (int t = 0; t < T; ++t) {
        std::vector<Task> next;
        for (Task& task : level) {
            auto groups = group_by_allocation(work, task.members, t);

            std::vector<Contract> options;
            std::vector<double> group_key;  // menu allocation per group, in order
            for (const auto& g : groups) {
                double a = work.at(g.front(), t).allocation;
                bool outside = a <= kGroupTol;
                double p_min = 0.0;  // the outside option is always free
                if (!outside) {
                    p_min = pay(g.front(), t);
                    for (int v : g) p_min = std::min(p_min, pay(v, t));
                }

                if (t + 1 < T) {
                    double scale = seq.weight(t) / seq.weight(t + 1);
                    for (int v : g) {
                        double diff = pay(v, t) - p_min;
                        if (diff != 0.0) {
                            pay(v, t + 1) += scale * diff;
                            pay(v, t) = p_min;
                            audit_step();
                        }
                    }
                } else {
                    // No later round to defer into; a compliant input cannot
                    // have unequal prices inside a final-round group.
                    for (int v : g)
                        if (std::abs(pay(v, t) - p_min) > tolerance)
                            throw equalization_error("unequal final-round payments in a group");
                    for (int v : g)
                        if (pay(v, t) != p_min) {
                            pay(v, t) = p_min;
                            audit_step();
                        }
                }

                if (!outside) options.push_back(Contract{a, p_min});
                group_key.push_back(outside ? 0.0 : a);
            }

            FiniteMenu menu = FiniteMenu::with_outside_option(std::move(options));
            auto node = std::make_shared<TreeNode>(menu);
            if (task.parent)
                task.parent->children[task.parent_option] = node;
            else
                out.tree.root = node;

            if (t + 1 < T) {
                for (std::size_t g = 0; g < groups.size(); ++g) {
                    int opt = 0;
                    for (int i = 0; i < menu.size(); ++i)
                        if (std::abs(menu.option(i).allocation - group_key[g]) <= kGroupTol) opt = i;
                    next.push_back(Task{std::move(groups[g]), node, opt});
                }
            }
        }
        level = std::move(next);
    }
    out.tree.depth = T;
    return out;
}

RoundTripReport roundtrip_audit(const DirectMechanism& mech, const DiscountSequence& seq,
                                double tolerance) {
    ConversionResult conv = direct_to_indirect(mech, seq, false, tolerance);
    DirectMechanism rt = indirect_to_direct(conv.tree, seq, mech.types);

    RoundTripReport rep;
    rep.types = mech.types;
    rep.chain_ok = true;
    for (int i = 0; i < mech.num_types(); ++i) {
        double ro = revenue_per_type(mech, i);
        // middle term: what the tree actually collects from this type's
        // (seller-favored) best response, not the adjusted table's truthful
        // row; an exactly indifferent type may take an equal-utility path
        // with different payments
        double ra =
            revenue(best_response_tree(conv.tree, mech.types[static_cast<std::size_t>(i)], seq)
                        .trajectory);
        double rr = revenue_per_type(rt, i);
        rep.rev_original.push_back(ro);
        rep.rev_adjusted.push_back(ra);
        rep.rev_roundtrip.push_back(rr);
        double viol = std::max(ro - ra, std::abs(ra - rr));
        rep.max_violation = std::max(rep.max_violation, viol);
        if (viol > tolerance) rep.chain_ok = false;
    }
    return rep;
}

}  // namespace menumech
