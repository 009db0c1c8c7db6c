#include "rla/json_io.hpp"

#include <map>

#include "rla/zoo.hpp"

namespace rla {

using nlohmann::json;

namespace {

json tree_node_to_json(const TreeNode& node) {
    if (node.is_leaf()) return json{{"leaf", static_cast<int>(node.leaf)}};
    json children = json::array();
    for (const auto& c : node.children) children.push_back(tree_node_to_json(c));
    return json{{"query", node.query}, {"children", std::move(children)}};
}

TreeNode tree_node_from_json(const json& j) {
    if (!j.is_object()) fail(Errc::parse, "tree node must be an object");
    TreeNode node;
    if (j.contains("leaf")) {
        int v = j.at("leaf").get<int>();
        if (v < 0 || v > 2) fail(Errc::parse, "leaf output out of range");
        node.leaf = static_cast<Out>(v);
        return node;
    }
    node.query = j.at("query").get<Coord>();
    const json& children = j.at("children");
    if (!children.is_array() || children.empty())
        fail(Errc::parse, "inner node needs a child per symbol");
    for (const auto& c : children) node.children.push_back(tree_node_from_json(c));
    return node;
}

template <typename T> std::vector<T> int_list(const json& j, const char* what) {
    if (!j.is_array()) fail(Errc::parse, std::string(what) + " must be an array");
    std::vector<T> out;
    for (const auto& v : j) out.push_back(v.get<T>());
    return out;
}

json coords_json(const std::vector<Coord>& v) { return json(v); }

json symbols_json(const std::vector<Symbol>& v) {
    json a = json::array();
    for (Symbol s : v) a.push_back(static_cast<uint32_t>(s));
    return a;
}

std::vector<Symbol> symbols_from(const json& j, const char* what) {
    std::vector<Symbol> out;
    for (uint32_t v : int_list<uint32_t>(j, what)) {
        if (v > 0xff) fail(Errc::parse, "symbol out of range");
        out.push_back(static_cast<Symbol>(v));
    }
    return out;
}

void require_format(const json& j) {
    if (!j.is_object() || !j.contains("format") || j.at("format").get<int>() != 1)
        fail(Errc::parse, "expected a format: 1 object");
}

json side_to_json(const SideData& side) {
    json sets = json::array();
    for (const auto& s : side.distinct_sets) sets.push_back(coords_json(s));
    json groups = json::array();
    for (const auto& g : side.groups)
        groups.push_back(json{{"coords", coords_json(g.coords)},
                              {"assign", symbols_json(g.assign)},
                              {"mult", g.mult},
                              {"set_index", g.set_index}});
    return json{{"distinct_sets", std::move(sets)},
                {"partition", partition_to_json(side.partition)},
                {"groups", std::move(groups)},
                {"groups_by_daisy", side.groups_by_daisy}};
}

SideData side_from_json(const json& j) {
    SideData side;
    for (const auto& s : j.at("distinct_sets"))
        side.distinct_sets.push_back(int_list<Coord>(s, "distinct set"));
    const json& p = j.at("partition");
    require_format(p);
    side.partition.n = p.at("n").get<uint32_t>();
    side.partition.q = p.at("q").get<uint32_t>();
    for (const auto& k : p.at("kernels"))
        side.partition.kernels.push_back(int_list<Coord>(k, "kernel"));
    for (const auto& d : p.at("daisies"))
        side.partition.daisies.push_back(int_list<uint32_t>(d, "daisy"));
    for (const auto& g : j.at("groups")) {
        TupleGroup tg;
        tg.coords = int_list<Coord>(g.at("coords"), "group coords");
        tg.assign = symbols_from(g.at("assign"), "group assignment");
        tg.mult = g.at("mult").get<uint64_t>();
        tg.set_index = g.at("set_index").get<uint32_t>();
        if (tg.set_index >= side.distinct_sets.size())
            fail(Errc::parse, "group references a missing set");
        side.groups.push_back(std::move(tg));
    }
    for (const auto& lst : j.at("groups_by_daisy")) {
        auto ids = int_list<uint32_t>(lst, "daisy group list");
        for (uint32_t i : ids)
            if (i >= side.groups.size()) fail(Errc::parse, "daisy references a missing group");
        side.groups_by_daisy.push_back(std::move(ids));
    }
    if (side.partition.kernels.size() != side.partition.q + 1 ||
        side.partition.daisies.size() != side.partition.q + 1 ||
        side.groups_by_daisy.size() != side.partition.q + 1)
        fail(Errc::parse, "partition arity mismatch");
    return side;
}

} // namespace

json rational_to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        fail(Errc::parse, "expected a rational object {num, den}");
    return Rational(j.at("num").get<long long>(), j.at("den").get<long long>());
}

json algorithm_to_json(const LocalAlgorithm& alg) {
    std::vector<json> trees;
    std::map<const DecisionTree*, size_t> ids;
    json collections = json::array();
    for (const auto& coll : alg.trees) {
        json list = json::array();
        for (const auto& t : coll) {
            auto [it, inserted] = ids.emplace(t.get(), trees.size());
            if (inserted) trees.push_back(tree_node_to_json(t->root));
            list.push_back(it->second);
        }
        collections.push_back(std::move(list));
    }
    return json{{"format", 1},
                {"name", alg.name},
                {"n", alg.n},
                {"alphabet", alg.alphabet.size},
                {"q", alg.q},
                {"sigma", rational_to_json(alg.sigma)},
                {"rho0", rational_to_json(alg.rho0)},
                {"rho1", rational_to_json(alg.rho1)},
                {"relaxed", alg.relaxed},
                {"normalized", alg.normalized},
                {"spec", alg.spec ? alg.spec->descriptor : std::string("{\"kind\":\"none\"}")},
                {"trees", trees},
                {"collections", std::move(collections)}};
}

LocalAlgorithm algorithm_from_json(const json& j) {
    require_format(j);
    LocalAlgorithm alg;
    try {
        alg.name = j.value("name", "");
        alg.n = j.at("n").get<uint32_t>();
        alg.alphabet.size = j.at("alphabet").get<uint32_t>();
        alg.q = j.at("q").get<uint32_t>();
        alg.sigma = rational_from_json(j.at("sigma"));
        alg.rho0 = rational_from_json(j.at("rho0"));
        alg.rho1 = rational_from_json(j.at("rho1"));
        alg.relaxed = j.at("relaxed").get<bool>();
        alg.normalized = j.at("normalized").get<bool>();

        std::vector<TreePtr> trees;
        for (const auto& t : j.at("trees")) {
            auto tree = std::make_shared<DecisionTree>();
            tree->root = tree_node_from_json(t);
            trees.push_back(std::move(tree));
        }
        for (const auto& coll : j.at("collections")) {
            std::vector<TreePtr> list;
            for (const auto& idx : coll) {
                size_t i = idx.get<size_t>();
                if (i >= trees.size()) fail(Errc::parse, "collection references a missing tree");
                list.push_back(trees[i]);
            }
            alg.trees.push_back(std::move(list));
        }
        const std::string desc = j.value("spec", "{\"kind\":\"none\"}");
        if (json::parse(desc).value("kind", "none") != "none")
            alg.spec = spec_from_descriptor(desc);
    } catch (const json::exception& e) {
        fail(Errc::parse, std::string("bad algorithm JSON: ") + e.what());
    }
    validate(alg);
    return alg;
}

json sampler_to_json(const PreparedSampler& pre) {
    const SamplerConfig& c = pre.config;
    json config{{"n", c.n},
                {"q", c.q},
                {"alphabet", c.alphabet.size},
                {"support", c.support},
                {"gamma", c.gamma},
                {"p", c.p},
                {"p_clamped", c.p_clamped},
                {"overridden", c.overridden},
                {"tau_base", rational_to_json(c.tau_base)},
                {"alpha1", c.alpha1},
                {"alpha0", c.alpha0},
                {"enum_budget", c.enum_budget}};
    json out{{"format", 1},
             {"instance", pre.instance},
             {"z", pre.z},
             {"relaxed", pre.relaxed},
             {"sigma", rational_to_json(pre.sigma)},
             {"rho0", rational_to_json(pre.rho0)},
             {"rho1", rational_to_json(pre.rho1)},
             {"config", std::move(config)},
             {"spec", pre.spec ? pre.spec->descriptor : std::string("{\"kind\":\"none\"}")},
             {"side1", side_to_json(pre.side1)}};
    if (pre.relaxed) out["side0"] = side_to_json(pre.side0);
    return out;
}

PreparedSampler sampler_from_json(const json& j) {
    require_format(j);
    PreparedSampler pre;
    try {
        pre.instance = j.value("instance", "");
        pre.z = j.at("z").get<uint32_t>();
        pre.relaxed = j.at("relaxed").get<bool>();
        pre.sigma = rational_from_json(j.at("sigma"));
        pre.rho0 = rational_from_json(j.at("rho0"));
        pre.rho1 = rational_from_json(j.at("rho1"));
        const json& c = j.at("config");
        pre.config.n = c.at("n").get<uint32_t>();
        pre.config.q = c.at("q").get<uint32_t>();
        pre.config.alphabet.size = c.at("alphabet").get<uint32_t>();
        pre.config.support = c.at("support").get<uint64_t>();
        pre.config.gamma = c.at("gamma").get<double>();
        pre.config.p = c.at("p").get<double>();
        pre.config.p_clamped = c.at("p_clamped").get<bool>();
        pre.config.overridden = c.at("overridden").get<bool>();
        pre.config.tau_base = rational_from_json(c.at("tau_base"));
        pre.config.alpha1 = c.at("alpha1").get<double>();
        pre.config.alpha0 = c.at("alpha0").get<double>();
        pre.config.enum_budget = c.at("enum_budget").get<uint64_t>();
        pre.side1 = side_from_json(j.at("side1"));
        if (pre.relaxed) pre.side0 = side_from_json(j.at("side0"));
        const std::string desc = j.value("spec", "{\"kind\":\"none\"}");
        if (json::parse(desc).value("kind", "none") != "none")
            pre.spec = spec_from_descriptor(desc);
    } catch (const json::exception& e) {
        fail(Errc::parse, std::string("bad sampler JSON: ") + e.what());
    }
    return pre;
}

json partition_to_json(const DaisyPartition& partition) {
    return json{{"format", 1},
                {"n", partition.n},
                {"q", partition.q},
                {"kernels", partition.kernels},
                {"daisies", partition.daisies}};
}

SetCollection set_collection_from_json(const json& j) {
    require_format(j);
    SetCollection coll;
    try {
        coll.n = j.at("n").get<uint32_t>();
        coll.q = j.at("q").get<uint32_t>();
        for (const auto& s : j.at("sets")) coll.sets.push_back(int_list<Coord>(s, "set"));
    } catch (const json::exception& e) {
        fail(Errc::parse, std::string("bad set collection: ") + e.what());
    }
    return coll;
}

json prepare_report_to_json(const PrepareReport& report) {
    return json{{"amplified", report.amplified},
                {"t", report.t},
                {"q_prime", report.q_prime},
                {"sigma", rational_to_json(report.sigma)},
                {"support", report.support},
                {"derand_attempts", report.derand_attempts},
                {"exhaustive", report.exhaustive}};
}

json run_result_to_json(const RunResult& r) {
    std::string kappa;
    for (Symbol s : r.triggering_kappa) kappa += std::to_string(static_cast<uint32_t>(s));
    return json{{"output", static_cast<int>(r.output)},
                {"aborted", r.aborted},
                {"triggering_j", r.triggering_j},
                {"triggering_kappa", kappa},
                {"votes", r.votes},
                {"seed", r.seed},
                {"q_size", r.q_size},
                {"work", r.work},
                {"samplings", r.samplings}};
}

std::string canonical_dump(const json& j) { return j.dump(); }

} // namespace rla
