#include <memory>

#include "doctest.h"
#include "menumech/io.hpp"
#include "test_support.hpp"

using namespace menumech;
namespace mt = menumech::testing;

TEST_CASE("full-precision formatting round-trips doubles") {
    for (double x : {1.0 / 3.0, 0.1, 2.0 / 3.0, 1e-17, 123456.789}) {
        CHECK(std::stod(fmt17(x)) == x);
    }
}

TEST_CASE("direct mechanism json round trip") {
    auto mech = mt::worked_instance();
    auto seq = mt::worked_seq();
    auto j = direct_to_json(mech, seq);
    auto [back, seq2] = direct_from_json(j);

    CHECK(back.types == mech.types);
    CHECK(seq2.weights() == seq.weights());
    for (int i = 0; i < 2; ++i)
        for (int t = 0; t < 2; ++t) {
            CHECK(back.at(i, t).allocation == mech.at(i, t).allocation);
            CHECK(back.at(i, t).payment == mech.at(i, t).payment);
        }
    // bit-identical through a second serialization
    CHECK(direct_to_json(back, seq2).dump() == j.dump());
}

TEST_CASE("direct mechanism json validation") {
    auto j = direct_to_json(mt::worked_instance(), mt::worked_seq());
    auto missing = j;
    missing.erase("gamma");
    CHECK_THROWS_AS(direct_from_json(missing), std::invalid_argument);

    auto ragged = j;
    ragged["pay"][0].erase(1);
    CHECK_THROWS_AS(direct_from_json(ragged), std::invalid_argument);

    auto short_gamma = j;
    short_gamma["gamma"] = {1.0};
    CHECK_THROWS_AS(direct_from_json(short_gamma), std::invalid_argument);
}

TEST_CASE("tree json round trip") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        auto tree = mt::random_tree(rng, 3, 4);
        auto j = tree_to_json(tree);
        auto back = tree_from_json(j);
        CHECK(back.depth == tree.depth);
        CHECK(tree_to_json(back).dump() == j.dump());
    }
}
