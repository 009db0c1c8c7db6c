#include "rla/zoo.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "rla/daisy.hpp"
#include "rla/oracle.hpp"
#include "rla/params.hpp"
#include "rla/transforms.hpp"

namespace rla {

namespace {

using nlohmann::json;

TreePtr tree_of(TreeNode root) {
    auto t = std::make_shared<DecisionTree>();
    t->root = std::move(root);
    return t;
}

TreeNode leaf_node(Out v) {
    TreeNode n;
    n.leaf = v;
    return n;
}

// Non-adaptive tree: query coords in order, the leaf output is a function of
// the symbols read.
TreeNode seq_node(const std::vector<Coord>& coords, size_t i, std::vector<Symbol>& path,
                  const Alphabet& alphabet,
                  const std::function<Out(const std::vector<Symbol>&)>& out) {
    if (i == coords.size()) return leaf_node(out(path));
    TreeNode n;
    n.query = coords[i];
    n.children.reserve(alphabet.size);
    for (uint32_t s = 0; s < alphabet.size; ++s) {
        path.push_back(static_cast<Symbol>(s));
        n.children.push_back(seq_node(coords, i + 1, path, alphabet, out));
        path.pop_back();
    }
    return n;
}

TreePtr seq_tree(const std::vector<Coord>& coords, const Alphabet& alphabet,
                 const std::function<Out(const std::vector<Symbol>&)>& out) {
    std::vector<Symbol> path;
    return tree_of(seq_node(coords, 0, path, alphabet, out));
}

uint32_t hamming_abs(const Word& a, const Word& b) {
    uint32_t d = 0;
    for (uint32_t i = 0; i < a.n(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

json rational_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        fail(Errc::parse, "expected a rational object {num, den}");
    return Rational(j.at("num").get<long long>(), j.at("den").get<long long>());
}

// ----- codes -----

uint32_t parity(uint32_t v) { return static_cast<uint32_t>(std::popcount(v)) & 1u; }

Word hadamard_codeword(uint32_t k, uint32_t msg) {
    Word w;
    w.symbols.resize(1u << k);
    for (uint32_t a = 0; a < (1u << k); ++a) w.symbols[a] = static_cast<Symbol>(parity(msg & a));
    return w;
}

// Distance from w to the Hadamard code along with the nearest message.
std::pair<uint32_t, uint32_t> hadamard_nearest(uint32_t k, const Word& w) {
    uint32_t best = w.n() + 1, best_msg = 0;
    for (uint32_t msg = 0; msg < (1u << k); ++msg) {
        uint32_t d = hamming_abs(w, hadamard_codeword(k, msg));
        if (d < best) {
            best = d;
            best_msg = msg;
        }
    }
    return {best, best_msg};
}

// Distance from w to the 3-repetition code along with the nearest message
// (per-block majority).
std::pair<uint32_t, uint32_t> rep3_nearest(const Word& w) {
    uint32_t d = 0, msg = 0;
    for (uint32_t i = 0; i * 3 < w.n(); ++i) {
        uint32_t ones = 0;
        for (uint32_t j = 0; j < 3; ++j) ones += w[3 * i + j];
        d += std::min(ones, 3 - ones);
        if (ones >= 2) msg |= 1u << i;
    }
    return {d, msg};
}

uint32_t constant_dist(const Word& w, Symbol c) {
    uint32_t d = 0;
    for (uint32_t i = 0; i < w.n(); ++i)
        if (w[i] != c) ++d;
    return d;
}

// ----- problem specs -----

std::shared_ptr<const ProblemSpec> make_tester_spec(const std::string& property,
                                                    const Rational& epsilon, uint32_t n) {
    auto spec = std::make_shared<ProblemSpec>();
    spec->n = n;
    spec->alphabet = Alphabet{2};
    spec->z_count = 1;
    const Rational far = epsilon * 2;
    if (property == "all-equal") {
        spec->membership = [n, far](uint32_t, const Word& x) {
            uint32_t d = std::min(constant_dist(x, 0), constant_dist(x, 1));
            if (d == 0) return Label::one;
            if (Rational(d, n) > far) return Label::zero;
            return Label::outside;
        };
    } else if (property == "rep-code") {
        spec->membership = [n, far](uint32_t, const Word& x) {
            uint32_t d = rep3_nearest(x).first;
            if (d == 0) return Label::one;
            if (Rational(d, n) > far) return Label::zero;
            return Label::outside;
        };
    } else if (property == "all") {
        spec->membership = [](uint32_t, const Word&) { return Label::one; };
    } else {
        fail(Errc::precondition, "unknown tester property: " + property);
    }
    json desc{{"kind", "tester"},
              {"property", property},
              {"epsilon", rational_json(epsilon)},
              {"n", n}};
    spec->descriptor = desc.dump();
    return spec;
}

std::shared_ptr<const ProblemSpec> make_decoder_spec(const std::string& code, uint32_t k,
                                                     const Rational& delta, bool relaxed) {
    auto spec = std::make_shared<ProblemSpec>();
    spec->alphabet = Alphabet{2};
    spec->z_count = k;
    const uint32_t n = code == "hadamard" ? (1u << k) : 3 * k;
    spec->n = n;
    const Rational reach = delta / 2;
    if (code == "hadamard") {
        spec->membership = [k, n, reach](uint32_t z, const Word& w) {
            auto [d, msg] = hadamard_nearest(k, w);
            if (Rational(d, n) > reach) return Label::outside;
            return ((msg >> z) & 1u) ? Label::one : Label::zero;
        };
        if (relaxed)
            spec->valid = [k](const Word& w) { return hadamard_nearest(k, w).first == 0; };
    } else if (code == "rep3") {
        spec->membership = [n, reach](uint32_t z, const Word& w) {
            auto [d, msg] = rep3_nearest(w);
            if (Rational(d, n) > reach) return Label::outside;
            return ((msg >> z) & 1u) ? Label::one : Label::zero;
        };
        if (relaxed) spec->valid = [](const Word& w) { return rep3_nearest(w).first == 0; };
    } else {
        fail(Errc::precondition, "unknown code: " + code);
    }
    json desc{{"kind", relaxed ? "relaxed-decoder" : "decoder"},
              {"code", code},
              {"k", k},
              {"delta", rational_json(delta)}};
    spec->descriptor = desc.dump();
    return spec;
}

// Map-style partial tester spec: 1 exactly on one target word, 0 far from the
// whole property.
std::shared_ptr<const ProblemSpec> make_partial_spec(const std::string& family,
                                                     uint32_t proof_index,
                                                     const Rational& epsilon, uint32_t n) {
    auto spec = std::make_shared<ProblemSpec>();
    spec->n = n;
    spec->alphabet = Alphabet{2};
    spec->z_count = 1;
    const Rational far = epsilon * 2;
    if (family == "all-equal-map") {
        Symbol pi = static_cast<Symbol>(proof_index);
        spec->membership = [n, far, pi](uint32_t, const Word& x) {
            if (constant_dist(x, pi) == 0) return Label::one;
            uint32_t d = std::min(constant_dist(x, 0), constant_dist(x, 1));
            if (Rational(d, n) > far) return Label::zero;
            return Label::outside;
        };
    } else if (family == "rep-code-map") {
        Word target;
        target.symbols.resize(n);
        for (uint32_t i = 0; i * 3 < n; ++i)
            for (uint32_t j = 0; j < 3; ++j)
                target.symbols[3 * i + j] = static_cast<Symbol>((proof_index >> i) & 1u);
        spec->membership = [n, far, target](uint32_t, const Word& x) {
            if (x == target) return Label::one;
            if (Rational(rep3_nearest(x).first, n) > far) return Label::zero;
            return Label::outside;
        };
    } else {
        fail(Errc::precondition, "unknown partial tester family: " + family);
    }
    json desc{{"kind", "partial-tester"},
              {"family", family},
              {"proof", proof_index},
              {"epsilon", rational_json(epsilon)},
              {"n", n}};
    spec->descriptor = desc.dump();
    return spec;
}

} // namespace

Word encode_hadamard(const Word& message) {
    if (message.n() == 0 || message.n() > 4)
        fail(Errc::precondition, "hadamard messages carry 1 to 4 bits");
    uint32_t msg = 0;
    for (uint32_t i = 0; i < message.n(); ++i)
        if (message[i]) msg |= 1u << i;
    return hadamard_codeword(message.n(), msg);
}

Word encode_rep3(const Word& message) {
    Word w;
    w.symbols.resize(3 * message.n());
    for (uint32_t i = 0; i < message.n(); ++i)
        for (uint32_t j = 0; j < 3; ++j) w.symbols[3 * i + j] = message[i];
    return w;
}

ZooInstance make_tester_instance(const std::string& property, const Rational& epsilon,
                                 uint32_t n) {
    if (!(epsilon > Rational(0))) fail(Errc::precondition, "epsilon must be positive");
    ZooInstance inst;
    LocalAlgorithm& alg = inst.alg;
    alg.n = n;
    alg.alphabet = Alphabet{2};
    alg.spec = make_tester_spec(property, epsilon, n);
    alg.trees.resize(1);

    if (property == "all-equal") {
        if (n < 2) fail(Errc::precondition, "all-equal needs n >= 2");
        alg.q = 2;
        for (Coord i = 0; i + 1 < n; ++i)
            alg.trees[0].push_back(seq_tree({i, i + 1}, alg.alphabet,
                                            [](const std::vector<Symbol>& s) {
                                                return s[0] == s[1] ? Out::one : Out::zero;
                                            }));
        alg.rho0 = epsilon;
        alg.rho1 = Rational(0);
        alg.normalized = true;
        inst.notes = "adjacent-pair equality tester for the two constant words";
    } else if (property == "rep-code") {
        if (n < 3 || n % 3 != 0) fail(Errc::precondition, "rep-code needs n divisible by 3");
        alg.q = 3;
        for (Coord b = 0; b * 3 < n; ++b)
            alg.trees[0].push_back(seq_tree({3 * b, 3 * b + 1, 3 * b + 2}, alg.alphabet,
                                            [](const std::vector<Symbol>& s) {
                                                return (s[0] == s[1] && s[1] == s[2])
                                                           ? Out::one
                                                           : Out::zero;
                                            }));
        alg.rho0 = epsilon;
        alg.rho1 = Rational(0);
        alg.normalized = true;
        inst.notes = "per-block constancy tester for the 3-repetition code";
    } else if (property == "all") {
        if (n < 1) fail(Errc::precondition, "n must be positive");
        alg.q = 1;
        alg.trees[0].push_back(tree_of(leaf_node(Out::one)));
        alg.rho0 = Rational(1);
        alg.rho1 = Rational(1);
        alg.normalized = false; // the bare leaf queries nothing
        inst.notes = "constant accepter; every word has the trivial property";
    } else {
        fail(Errc::precondition, "unknown tester property: " + property);
    }
    alg.sigma = Rational(1, 16LL * alg.q);
    inst.name = property + "-" + std::to_string(n);
    alg.name = inst.name;
    validate(alg);
    return inst;
}

ZooInstance make_decoder_instance(const std::string& code, uint32_t k, const Rational& delta) {
    if (!(delta > Rational(0))) fail(Errc::precondition, "delta must be positive");
    ZooInstance inst;
    LocalAlgorithm& alg = inst.alg;
    alg.alphabet = Alphabet{2};
    alg.spec = make_decoder_spec(code, k, delta, false);
    alg.n = alg.spec->n;
    alg.trees.resize(k);
    alg.rho0 = delta / 2;
    alg.rho1 = delta / 2;

    const Rational reach_rel = delta / 2;
    const long long reach =
        (reach_rel * Rational(static_cast<long long>(alg.n))).num() /
        (reach_rel * Rational(static_cast<long long>(alg.n))).den();

    if (code == "hadamard") {
        if (k < 1 || k > 4) fail(Errc::precondition, "hadamard decoders carry 1 to 4 bits");
        if (reach > 1)
            fail(Errc::precondition, "hadamard decoder domain reaches past one corruption");
        alg.q = 2;
        for (uint32_t z = 0; z < k; ++z)
            for (Coord a = 0; a < alg.n; ++a)
                alg.trees[z].push_back(seq_tree({a, a ^ (1u << z)}, alg.alphabet,
                                                [](const std::vector<Symbol>& s) {
                                                    return (s[0] ^ s[1]) ? Out::one : Out::zero;
                                                }));
        // Worst credited error: both the domain corruption and the ball radius
        // spend `reach` flips, each flip kills two of the n trees.
        alg.sigma = std::max(Rational(1, 32), Rational(4 * reach, alg.n));
        inst.notes = "two-point parity decoder for the Hadamard code";
    } else if (code == "rep3") {
        if (k < 1 || k > 5) fail(Errc::precondition, "rep3 decoders carry 1 to 5 bits");
        if (reach > 0)
            fail(Errc::precondition,
                 "the strict rep3 decoder needs the domain at the code itself");
        alg.q = 3;
        for (uint32_t z = 0; z < k; ++z)
            alg.trees[z].push_back(seq_tree({3 * z, 3 * z + 1, 3 * z + 2}, alg.alphabet,
                                            [](const std::vector<Symbol>& s) {
                                                uint32_t ones = s[0] + s[1] + s[2];
                                                return ones >= 2 ? Out::one : Out::zero;
                                            }));
        alg.sigma = Rational(1, 48);
        inst.notes = "per-block majority decoder for the 3-repetition code";
    } else {
        fail(Errc::precondition, "unknown code: " + code);
    }
    alg.normalized = true;
    inst.name = code + "-" + std::to_string(k);
    alg.name = inst.name;
    validate(alg);
    return inst;
}

ZooInstance make_relaxed_decoder_instance(const std::string& code, uint32_t k,
                                          const Rational& delta) {
    if (code != "rep3") fail(Errc::precondition, "relaxed decoding ships for rep3 only");
    if (k < 1 || k > 5) fail(Errc::precondition, "rep3 decoders carry 1 to 5 bits");
    if (!(delta > Rational(0))) fail(Errc::precondition, "delta must be positive");

    ZooInstance inst;
    LocalAlgorithm& alg = inst.alg;
    alg.alphabet = Alphabet{2};
    alg.spec = make_decoder_spec(code, k, delta, true);
    alg.n = alg.spec->n;
    alg.relaxed = true;
    alg.rho0 = delta / 2;
    alg.rho1 = delta / 2;
    alg.q = 3;
    alg.sigma = Rational(1, 48);

    const Rational reach_rel = delta / 2;
    const long long reach =
        (reach_rel * Rational(static_cast<long long>(alg.n))).num() /
        (reach_rel * Rational(static_cast<long long>(alg.n))).den();
    // Never-wrong needs every reachable word to corrupt each block at most
    // twice: one flip from the domain plus one from the ball.
    if (reach > 1)
        fail(Errc::precondition, "relaxed rep3 decoding needs at most one corruption each way");

    alg.trees.resize(k);
    for (uint32_t z = 0; z < k; ++z)
        alg.trees[z].push_back(seq_tree({3 * z, 3 * z + 1, 3 * z + 2}, alg.alphabet,
                                        [](const std::vector<Symbol>& s) {
                                            if (s[0] == s[1] && s[1] == s[2])
                                                return s[0] ? Out::one : Out::zero;
                                            return Out::bot;
                                        }));
    alg.normalized = true;
    inst.name = "rep3-relaxed-" + std::to_string(k);
    alg.name = inst.name;
    inst.notes = "per-block decoder answering only on constant blocks; valid set is the code";
    validate(alg);
    return inst;
}

std::vector<std::string> zoo_names() {
    return {"all-equal-8",  "rep-code-6",     "trivial-all-4", "hadamard-3",
            "hadamard-4",   "rep3-decoder-2", "rep3-relaxed-2", "rep3-relaxed-5"};
}

ZooInstance zoo_get(const std::string& name) {
    if (name == "all-equal-8") return make_tester_instance("all-equal", Rational(1, 4), 8);
    if (name == "rep-code-6") return make_tester_instance("rep-code", Rational(1, 12), 6);
    if (name == "trivial-all-4") {
        ZooInstance inst = make_tester_instance("all", Rational(1, 4), 4);
        inst.name = "trivial-all-4";
        inst.alg.name = inst.name;
        return inst;
    }
    if (name == "hadamard-3") return make_decoder_instance("hadamard", 3, Rational(1, 8));
    if (name == "hadamard-4") return make_decoder_instance("hadamard", 4, Rational(1, 8));
    if (name == "rep3-decoder-2") {
        ZooInstance inst = make_decoder_instance("rep3", 2, Rational(1, 6));
        inst.name = "rep3-decoder-2";
        inst.alg.name = inst.name;
        return inst;
    }
    if (name == "rep3-relaxed-2") return make_relaxed_decoder_instance("rep3", 2, Rational(1, 3));
    if (name == "rep3-relaxed-5") return make_relaxed_decoder_instance("rep3", 5, Rational(2, 15));
    fail(Errc::precondition, "unknown instance: " + name);
}

std::shared_ptr<const ProblemSpec> spec_from_descriptor(const std::string& descriptor) {
    json j;
    try {
        j = json::parse(descriptor);
    } catch (const json::exception& e) {
        fail(Errc::parse, std::string("bad descriptor: ") + e.what());
    }
    const std::string kind = j.value("kind", "none");
    if (kind == "tester")
        return make_tester_spec(j.at("property").get<std::string>(),
                                rational_from(j.at("epsilon")), j.at("n").get<uint32_t>());
    if (kind == "decoder" || kind == "relaxed-decoder")
        return make_decoder_spec(j.at("code").get<std::string>(), j.at("k").get<uint32_t>(),
                                 rational_from(j.at("delta")), kind == "relaxed-decoder");
    if (kind == "partial-tester")
        return make_partial_spec(j.at("family").get<std::string>(), j.at("proof").get<uint32_t>(),
                                 rational_from(j.at("epsilon")), j.at("n").get<uint32_t>());
    fail(Errc::parse, "descriptor carries no reconstructible spec: " + kind);
}

InstanceVerification verify_instance(const ZooInstance& instance) {
    const LocalAlgorithm& alg = instance.alg;
    validate(alg);
    InstanceVerification out;
    json rep;

    // Robustness at the declared radii.
    RobustnessReport rob = check_robustness(alg, alg.rho0, alg.rho1);
    rep["robustness"] = {{"pass0", rob.pass0},
                         {"pass1", rob.pass1},
                         {"exhaustive", rob.exhaustive},
                         {"certified0", rob.certified0.str()},
                         {"certified1", rob.certified1.str()},
                         {"detail", rob.detail}};
    out.pass = out.pass && rob.pass0 && rob.pass1;
    out.exhaustive = out.exhaustive && rob.exhaustive;

    // Normalization must not move any output distribution.
    LocalAlgorithm norm = normalize(alg);
    bool norm_ok = true;
    for (uint32_t z = 0; z < alg.z_count() && norm_ok; ++z) {
        for_each_word(alg.n, alg.alphabet, [&](const Word& w) {
            if (!norm_ok) return;
            OutputDist a = exact_output_dist(alg, z, w);
            OutputDist b = exact_output_dist(norm, z, w);
            for (int o = 0; o < 3; ++o)
                if (a.p[o] != b.p[o]) norm_ok = false;
        });
    }
    rep["normalize_equivalence"] = norm_ok;
    out.pass = out.pass && norm_ok;

    // Partition invariants over each explicit input's description sets.
    bool part_ok = true;
    std::string part_detail;
    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        std::vector<DescriptionTuple> tuples = extract_tuples(norm, z);
        std::set<std::vector<Coord>> distinct;
        for (const auto& t : tuples) distinct.insert(t.coords);
        std::vector<std::vector<Coord>> sets(distinct.begin(), distinct.end());
        DaisyPartition part = daisy_partition(sets, alg.n, norm.q);
        DaisyCheckReport c1 = check_partition_invariants(sets, part);
        DaisyCheckReport c2 = check_petal_overlap_bound(sets, part);
        if (!c1.ok || !c2.ok) {
            part_ok = false;
            part_detail = !c1.ok ? c1.detail : c2.detail;
        }
    }
    rep["partition_invariants"] = part_ok;
    if (!part_ok) rep["partition_detail"] = part_detail;
    out.pass = out.pass && part_ok;

    // Volume lemma spot checks wherever a labeled pair exists.
    json volumes = json::array();
    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        std::optional<Word> x0, x1;
        for_each_word(alg.n, alg.alphabet, [&](const Word& w) {
            Label l = alg.spec->membership(z, w);
            if (l == Label::zero && !x0) x0 = w;
            if (l == Label::one && !x1) x1 = w;
        });
        if (!x0 || !x1) continue;
        // x on one side, the witness on the other, radius of the witness side.
        for (int side = 0; side < 2; ++side) {
            const Word& x = side == 0 ? *x0 : *x1;
            const Word& y = side == 0 ? *x1 : *x0;
            const Rational rho = side == 0 ? alg.rho1 : alg.rho0;
            if (!(rho > Rational(0))) continue;
            VolumeLemmaReport v = check_volume_lemma(alg, z, x, y, rho);
            volumes.push_back({{"z", z},
                               {"side", side},
                               {"pass", v.pass},
                               {"exhaustive", v.exhaustive},
                               {"worst", v.worst_weight.str()},
                               {"bound", v.bound.str()}});
            out.pass = out.pass && v.pass;
            out.exhaustive = out.exhaustive && v.exhaustive;
        }
    }
    rep["volume_checks"] = volumes;

    out.report_json = rep.dump();
    return out;
}

MapTester make_map_tester(const std::string& name) {
    MapTester map;
    map.name = name;
    if (name == "all-equal-map-2") {
        map.m = 1;
        const uint32_t n = 8;
        const Rational eps(1, 4);
        for (uint32_t proof = 0; proof < 2; ++proof) {
            ZooInstance inst;
            LocalAlgorithm& alg = inst.alg;
            alg.n = n;
            alg.alphabet = Alphabet{2};
            alg.q = 2;
            alg.sigma = Rational(1, 32);
            alg.rho0 = eps;
            alg.rho1 = Rational(0);
            alg.spec = make_partial_spec("all-equal-map", proof, eps, n);
            alg.trees.resize(1);
            const Symbol pi = static_cast<Symbol>(proof);
            for (Coord i = 0; i + 1 < n; ++i)
                alg.trees[0].push_back(seq_tree({i, i + 1}, alg.alphabet,
                                                [pi](const std::vector<Symbol>& s) {
                                                    return (s[0] == pi && s[1] == pi)
                                                               ? Out::one
                                                               : Out::zero;
                                                }));
            alg.normalized = true;
            inst.name = name + "/proof-" + std::to_string(proof);
            alg.name = inst.name;
            inst.notes = "accepts only the constant word named by the proof";
            validate(alg);
            map.partial.push_back(std::move(inst));
        }
    } else if (name == "rep-code-map-4") {
        map.m = 2;
        const uint32_t n = 6;
        const Rational eps(1, 12);
        for (uint32_t proof = 0; proof < 4; ++proof) {
            ZooInstance inst;
            LocalAlgorithm& alg = inst.alg;
            alg.n = n;
            alg.alphabet = Alphabet{2};
            alg.q = 6;
            alg.sigma = Rational(1, 96);
            alg.rho0 = eps;
            alg.rho1 = Rational(0);
            alg.spec = make_partial_spec("rep-code-map", proof, eps, n);
            alg.trees.resize(1);
            Word target;
            target.symbols.resize(n);
            for (uint32_t i = 0; i < 2; ++i)
                for (uint32_t j = 0; j < 3; ++j)
                    target.symbols[3 * i + j] = static_cast<Symbol>((proof >> i) & 1u);
            alg.trees[0].push_back(
                seq_tree({0, 1, 2, 3, 4, 5}, alg.alphabet,
                         [target](const std::vector<Symbol>& s) {
                             return s == target.symbols ? Out::one : Out::zero;
                         }));
            alg.normalized = true;
            inst.name = name + "/proof-" + std::to_string(proof);
            alg.name = inst.name;
            inst.notes = "accepts only the codeword named by the proof";
            validate(alg);
            map.partial.push_back(std::move(inst));
        }
    } else {
        fail(Errc::precondition, "unknown map tester: " + name);
    }
    const uint64_t proofs = 1ull << map.m;
    map.k = params::repetition_count(map.partial[0].alg.sigma,
                                     Rational(1, static_cast<long long>(3 * proofs)));
    return map;
}

std::vector<std::string> map_tester_names() { return {"all-equal-map-2", "rep-code-map-4"}; }

PreparedMapTester prepare_map_tester(const MapTester& map, uint64_t seed,
                                     const PreprocessOptions& opts) {
    PreparedMapTester out;
    out.name = map.name;
    out.k = map.k;
    for (uint32_t i = 0; i < map.partial.size(); ++i) {
        PrepareResult prep =
            prepare(map.partial[i].alg, split_seed(seed, 0x6d617070ULL /* "mapp" */, i));
        out.testers.push_back(preprocess(prep.alg, 0, false, opts));
    }
    return out;
}

MapRunResult run_map_tester(const PreparedMapTester& map, const Word& x, uint64_t seed) {
    if (map.testers.empty()) fail(Errc::precondition, "map tester carries no partial testers");
    std::vector<const PreparedSampler*> ptrs;
    for (const auto& t : map.testers) ptrs.push_back(&t);

    MapRunResult res;
    std::vector<uint64_t> accepts(map.testers.size(), 0);
    for (uint64_t rep = 0; rep < map.k; ++rep) {
        MultiRunResult mr =
            shared_sample_multirun(ptrs, x, split_seed(seed, 0x6d617072ULL /* "mapr" */, rep));
        res.samplings += mr.samplings;
        res.work += mr.work;
        for (size_t i = 0; i < mr.results.size(); ++i)
            if (mr.results[i].output == Out::one) ++accepts[i];
    }
    res.output = Out::zero;
    for (uint64_t a : accepts)
        if (2 * a > map.k) res.output = Out::one;
    return res;
}

} // namespace rla
