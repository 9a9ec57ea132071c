#include "menumech/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace menumech {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json direct_to_json(const DirectMechanism& mech, const DiscountSequence& seq) {
    nlohmann::json j;
    j["types"] = mech.types;
    j["gamma"] = seq.weights();
    auto& alloc = j["alloc"] = nlohmann::json::array();
    auto& pay = j["pay"] = nlohmann::json::array();
    for (const auto& row : mech.rows) {
        nlohmann::json ra = nlohmann::json::array(), rp = nlohmann::json::array();
        for (const Contract& c : row) {
            ra.push_back(c.allocation);
            rp.push_back(c.payment);
        }
        alloc.push_back(std::move(ra));
        pay.push_back(std::move(rp));
    }
    return j;
}

std::pair<DirectMechanism, DiscountSequence> direct_from_json(const nlohmann::json& j) {
    for (const char* key : {"types", "gamma", "alloc", "pay"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("missing field: ") + key);

    DirectMechanism mech;
    mech.types = j.at("types").get<std::vector<double>>();
    const auto& alloc = j.at("alloc");
    const auto& pay = j.at("pay");
    if (alloc.size() != mech.types.size() || pay.size() != mech.types.size())
        throw std::invalid_argument("alloc/pay row count must match types");
    for (std::size_t i = 0; i < mech.types.size(); ++i) {
        auto as = alloc.at(i).get<std::vector<double>>();
        auto ps = pay.at(i).get<std::vector<double>>();
        if (as.size() != ps.size()) throw std::invalid_argument("ragged alloc/pay rows");
        std::vector<Contract> row(as.size());
        for (std::size_t t = 0; t < as.size(); ++t) row[t] = Contract{as[t], ps[t]};
        mech.rows.push_back(std::move(row));
    }
    mech.validate();
    DiscountSequence seq(j.at("gamma").get<std::vector<double>>());
    if (mech.rounds() != seq.rounds())
        throw std::invalid_argument("gamma length must match the round count");
    return {std::move(mech), std::move(seq)};
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
    nlohmann::json j;
    auto& menu = j["menu"] = nlohmann::json::array();
    for (const Contract& c : node.menu.options())
        menu.push_back(nlohmann::json::array({c.allocation, c.payment}));
    auto& children = j["children"] = nlohmann::json::object();
    for (const auto& [opt, child] : node.children) {
        // keyed by the chosen option's allocation, printed as a json number
        std::string key = nlohmann::json(node.menu.option(opt).allocation).dump();
        children[key] = node_to_json(*child);
    }
    return j;
}

std::shared_ptr<const TreeNode> node_from_json(const nlohmann::json& j) {
    std::vector<Contract> options;
    for (const auto& pair : j.at("menu")) {
        if (pair.size() != 2) throw std::invalid_argument("menu entries are [allocation, payment]");
        options.push_back(Contract{pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
    auto node = std::make_shared<TreeNode>(FiniteMenu::from_options(std::move(options)));
    if (j.contains("children")) {
        for (const auto& [key, value] : j.at("children").items()) {
            double a = nlohmann::json::parse(key).get<double>();
            int opt = -1;
            for (int i = 0; i < node->menu.size(); ++i)
                if (std::abs(node->menu.option(i).allocation - a) <= 1e-12) opt = i;
            if (opt < 0) throw std::invalid_argument("child key is not a menu allocation");
            node->children[opt] = node_from_json(value);
        }
    }
    return node;
}

int tree_depth(const TreeNode& node) {
    int d = 0;
    for (const auto& [opt, child] : node.children) d = std::max(d, tree_depth(*child));
    return d + 1;
}

}  // namespace

nlohmann::json tree_to_json(const MechanismTree& tree) {
    if (!tree.root) throw std::invalid_argument("empty tree");
    nlohmann::json j = node_to_json(*tree.root);
    j["depth"] = tree.depth;
    return j;
}

MechanismTree tree_from_json(const nlohmann::json& j) {
    MechanismTree tree;
    tree.root = node_from_json(j);
    tree.depth = j.contains("depth") ? j.at("depth").get<int>() : tree_depth(*tree.root);
    return tree;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace menumech
