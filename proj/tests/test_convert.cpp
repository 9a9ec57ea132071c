#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "menumech/convert.hpp"
#include "menumech/errors.hpp"
#include "test_support.hpp"

using namespace menumech;
namespace mt = menumech::testing;

namespace {

std::shared_ptr<TreeNode> node(std::vector<Contract> options) {
    return std::make_shared<TreeNode>(FiniteMenu::with_outside_option(std::move(options)));
}

MechanismTree two_round_tree() {
    auto child = node({{1.0, 1.0}});
    auto root = node({{1.0, 0.5}});
    root->children[1] = child;  // option 1 is (1, 0.5)
    return MechanismTree{root, 2};
}

}  // namespace

TEST_CASE("tabulating best responses per type") {
    DiscountSequence seq({1.0, 0.5});
    auto mech = indirect_to_direct(two_round_tree(), seq, {0.3, 0.6, 1.0});

    REQUIRE(mech.num_types() == 3);
    // 0.3: stays out entirely
    CHECK(mech.at(0, 0).is_outside_option());
    CHECK(mech.at(0, 1).is_outside_option());
    // 0.6: buys round one, declines the expensive round two
    CHECK(mech.at(1, 0).allocation == 1.0);
    CHECK(mech.at(1, 0).payment == doctest::Approx(0.5));
    CHECK(mech.at(1, 1).is_outside_option());
    // 1.0: buys both
    CHECK(mech.at(2, 1).payment == doctest::Approx(1.0));

    CHECK(check_ic_pir(mech, seq).compliant());
}

TEST_CASE("constant posted price splits the grid") {
    auto leaf = node({{1.0, 0.5}});
    auto mid = node({{1.0, 0.5}});
    auto root = node({{1.0, 0.5}});
    root->children[0] = mid;
    root->children[1] = mid;
    mid->children[0] = leaf;
    mid->children[1] = leaf;
    MechanismTree tree{root, 3};
    DiscountSequence seq({1.0, 0.8, 0.6});

    auto mech = indirect_to_direct(tree, seq, {0.4, 0.9});
    for (int t = 0; t < 3; ++t) {
        CHECK(mech.at(0, t).is_outside_option());
        CHECK(mech.at(1, t).payment == doctest::Approx(0.5));
    }
}

TEST_CASE("single type grid is trivially compliant") {
    DiscountSequence seq({1.0, 0.5});
    auto mech = indirect_to_direct(two_round_tree(), seq, {0.8});
    CHECK(mech.num_types() == 1);
    CHECK(check_ic_pir(mech, seq).compliant());
}

TEST_CASE("random trees produce compliant tables") {
    std::mt19937 rng(77);
    DiscountSequence seq({1.0, 0.9, 0.5, 0.5});
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 9.0);
    for (int rep = 0; rep < 8; ++rep) {
        auto tree = mt::random_tree(rng, 4, 4);
        auto mech = indirect_to_direct(tree, seq, grid);
        auto rep_check = check_ic_pir(mech, seq);
        CHECK(rep_check.compliant());
    }
}

TEST_CASE("price equalization on the worked instance") {
    auto mech = mt::worked_instance();
    auto seq = mt::worked_seq();
    auto conv = direct_to_indirect(mech, seq, true);

    CHECK(conv.adjustment_steps == 1);
    CHECK(conv.adjusted.at(1, 0).payment == doctest::Approx(0.5));
    CHECK(conv.adjusted.at(1, 1).payment == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(revenue_per_type(conv.adjusted, 0) == doctest::Approx(0.5));
    CHECK(revenue_per_type(conv.adjusted, 1) == doctest::Approx(1.5).epsilon(1e-12));

    // tree: root {(0,0),(1,0.5)}, after accepting: {(0,0),(1,1.0)}
    REQUIRE(conv.tree.depth == 2);
    const auto& root = *conv.tree.root;
    REQUIRE(root.menu.size() == 2);
    CHECK(root.menu.option(1).allocation == 1.0);
    CHECK(root.menu.option(1).payment == doctest::Approx(0.5));
    auto it = root.children.find(1);
    REQUIRE(it != root.children.end());
    CHECK(it->second->menu.option(1).payment == doctest::Approx(1.0).epsilon(1e-12));

    // truthful utilities unchanged by the conversion
    for (int i = 0; i < 2; ++i) {
        double before = prefix_utility(mech.types[static_cast<std::size_t>(i)],
                                       mech.trajectory_for(i), seq, 2);
        double after = prefix_utility(mech.types[static_cast<std::size_t>(i)],
                                      conv.adjusted.trajectory_for(i), seq, 2);
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("singleton groups convert without deferrals") {
    DiscountSequence seq({1.0, 0.5});
    DirectMechanism mech;
    mech.types = {0.4, 0.9};
    mech.rows = {{Contract{0.5, 0.2}, Contract{0.5, 0.1}},
                 {Contract{1.0, 0.5}, Contract{1.0, 0.3}}};
    REQUIRE(check_ic_pir(mech, seq).compliant());

    auto conv = direct_to_indirect(mech, seq, true);
    CHECK(conv.adjustment_steps == 0);
    for (int i = 0; i < 2; ++i)
        for (int t = 0; t < 2; ++t)
            CHECK(conv.adjusted.at(i, t).payment == mech.at(i, t).payment);
}

TEST_CASE("non-compliant input is refused") {
    auto mech = mt::worked_instance();
    mech.rows[1][0].payment = 0.9;
    mech.rows[1][1].payment = 0.9;
    CHECK_THROWS_AS(direct_to_indirect(mech, mt::worked_seq(), false), std::invalid_argument);
}

TEST_CASE("final-round group with unequal prices is diagnosed") {
    // nearly weightless final round: the price difference is invisible to
    // the discounted constraints but cannot be equalized without a
    // deferral target
    DiscountSequence seq({1.0, 1e-10});
    DirectMechanism mech;
    mech.types = {0.5, 1.0};
    mech.rows = {{Contract{1.0, 0.3}, Contract{1.0, 0.3}},
                 {Contract{1.0, 0.3}, Contract{1.0, 0.4}}};
    REQUIRE(check_ic_pir(mech, seq).compliant());
    CHECK_THROWS_AS(direct_to_indirect(mech, seq, false), equalization_error);
}

TEST_CASE("round trip chain on the worked instance") {
    auto rep = roundtrip_audit(mt::worked_instance(), mt::worked_seq());
    CHECK(rep.chain_ok);
    CHECK(rep.rev_original[1] == doctest::Approx(4.0 / 3.0));
    CHECK(rep.rev_adjusted[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(rep.rev_roundtrip[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(rep.rev_original[0] == doctest::Approx(rep.rev_adjusted[0]));
}

TEST_CASE("round trip chain on random compliant mechanisms") {
    DiscountSequence seq({1.0, 0.8, 0.8});
    std::vector<double> types{0.3, 0.55, 0.9};
    for (unsigned seed = 1; seed <= 6; ++seed) {
        auto mech = random_compliant_mechanism(types, seq, seed);
        auto conv = direct_to_indirect(mech, seq, true);  // audit every step
        auto rep = roundtrip_audit(mech, seq);
        CAPTURE(seed);
        CHECK(rep.chain_ok);
        for (std::size_t i = 0; i < types.size(); ++i) {
            CHECK(rep.rev_adjusted[i] >= rep.rev_original[i] - 1e-9);
            double before = prefix_utility(types[i], mech.trajectory_for(static_cast<int>(i)),
                                           seq, 3);
            double after = prefix_utility(types[i],
                                          conv.adjusted.trajectory_for(static_cast<int>(i)),
                                          seq, 3);
            CHECK(after == doctest::Approx(before).epsilon(1e-9));
        }
    }
}

TEST_CASE("converted tree walks every type down its truthful path") {
    DiscountSequence seq({1.0, 0.7});
    std::vector<double> types{0.35, 0.6, 1.0};
    auto mech = random_compliant_mechanism(types, seq, 99);
    auto conv = direct_to_indirect(mech, seq, false);
    for (std::size_t i = 0; i < types.size(); ++i) {
        auto br = best_response_tree(conv.tree, types[i], seq);
        for (int t = 0; t < 2; ++t)
            CHECK(br.trajectory.contracts[static_cast<std::size_t>(t)].allocation ==
                  doctest::Approx(conv.adjusted.at(static_cast<int>(i), t).allocation));
    }
}
