#pragma once

// Shared fixture builders for the test suites.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "rla/core.hpp"
#include "rla/util.hpp"

namespace fx {

using rla::Alphabet;
using rla::Coord;
using rla::LocalAlgorithm;
using rla::Out;
using rla::Rational;
using rla::Symbol;
using rla::TreeNode;
using rla::TreePtr;
using rla::Word;

inline TreeNode leaf(Out o) {
    TreeNode t;
    t.leaf = o;
    return t;
}

inline TreeNode leaf(int bit) { return leaf(bit ? Out::one : Out::zero); }

inline TreeNode node(Coord c, std::vector<TreeNode> children) {
    TreeNode t;
    t.query = c;
    t.children = std::move(children);
    return t;
}

// Binary inner node: child 0 for symbol 0, child 1 for symbol 1.
inline TreeNode bnode(Coord c, TreeNode on0, TreeNode on1) {
    return node(c, {std::move(on0), std::move(on1)});
}

inline TreePtr tree(TreeNode root) {
    auto t = std::make_shared<rla::DecisionTree>();
    t->root = std::move(root);
    return t;
}

inline TreePtr leaf_tree(Out o) { return tree(leaf(o)); }
inline TreePtr leaf_tree(int bit) { return tree(leaf(bit)); }

inline Word bw(const std::string& digits) { return rla::word_from_string(digits, Alphabet{2}); }

inline LocalAlgorithm make_alg(uint32_t n, uint32_t q, const Rational& sigma,
                               std::vector<std::vector<TreePtr>> trees, bool relaxed = false) {
    LocalAlgorithm alg;
    alg.n = n;
    alg.alphabet = Alphabet{2};
    alg.q = q;
    alg.sigma = sigma;
    alg.relaxed = relaxed;
    alg.name = "fixture";
    alg.trees = std::move(trees);
    return alg;
}

inline Word random_word(rla::Splitmix64& rng, uint32_t n, const Alphabet& alphabet) {
    Word w;
    w.symbols.resize(n);
    for (uint32_t i = 0; i < n; ++i)
        w.symbols[i] = static_cast<Symbol>(rng.next_below(alphabet.size));
    return w;
}

// Random adaptive binary tree. Branches may repeat coordinates (normalize
// fodder) but keep at most q distinct ones.
inline TreeNode random_tree_node(rla::Splitmix64& rng, uint32_t n, uint32_t q,
                                 std::vector<Coord> used, uint32_t depth) {
    bool must_stop = used.size() >= q && rng.next_below(3) > 0;
    if (depth > 0 && (must_stop || rng.next_below(3) == 0))
        return leaf(static_cast<int>(rng.next_below(2)));
    Coord c;
    if (!used.empty() && (used.size() >= q || rng.next_below(4) == 0)) {
        c = used[rng.next_below(used.size())]; // repeat a coordinate on purpose
    } else {
        c = static_cast<Coord>(rng.next_below(n));
    }
    if (std::find(used.begin(), used.end(), c) == used.end()) used.push_back(c);
    if (used.size() > q || depth > 2 * q)
        return leaf(static_cast<int>(rng.next_below(2)));
    TreeNode a = random_tree_node(rng, n, q, used, depth + 1);
    TreeNode b = random_tree_node(rng, n, q, used, depth + 1);
    return bnode(c, std::move(a), std::move(b));
}

inline LocalAlgorithm random_algorithm(rla::Splitmix64& rng, uint32_t n, uint32_t q,
                                       size_t support, uint32_t z_count) {
    std::vector<std::vector<TreePtr>> trees(z_count);
    for (uint32_t z = 0; z < z_count; ++z)
        for (size_t i = 0; i < support; ++i)
            trees[z].push_back(tree(random_tree_node(rng, n, q, {}, 0)));
    return make_alg(n, q, Rational(1, 16), std::move(trees));
}

// Exact output-distribution equality on every (z, word); exhaustive, so n must
// stay small.
inline bool same_dist(const LocalAlgorithm& a, const LocalAlgorithm& b) {
    if (a.n != b.n || a.alphabet.size != b.alphabet.size || a.z_count() != b.z_count())
        return false;
    bool same = true;
    for (uint32_t z = 0; z < a.z_count() && same; ++z) {
        rla::for_each_word(a.n, a.alphabet, [&](const Word& w) {
            if (!same) return;
            rla::OutputDist da = rla::exact_output_dist(a, z, w);
            rla::OutputDist db = rla::exact_output_dist(b, z, w);
            for (int o = 0; o < 3; ++o)
                if (da.p[o] != db.p[o]) same = false;
        });
    }
    return same;
}

// Random multi-collection of exact q-sets. Clustered collections draw from a
// small coordinate pool so kernels actually form.
inline std::vector<std::vector<Coord>> random_multicollection(rla::Splitmix64& rng, uint32_t n,
                                                              uint32_t q, size_t count,
                                                              bool clustered) {
    uint32_t pool = clustered ? std::min(n, q + 1 + static_cast<uint32_t>(rng.next_below(3))) : n;
    std::vector<std::vector<Coord>> sets;
    sets.reserve(count);
    for (size_t s = 0; s < count; ++s) {
        std::set<Coord> pick;
        while (pick.size() < q) pick.insert(static_cast<Coord>(rng.next_below(pool)));
        sets.emplace_back(pick.begin(), pick.end());
    }
    return sets;
}

// Random graph honoring a degree cap; adjacency lists are symmetric.
inline std::vector<std::vector<uint32_t>> random_graph(rla::Splitmix64& rng, uint32_t vertices,
                                                       uint32_t max_degree) {
    std::vector<std::vector<uint32_t>> adj(vertices);
    if (vertices < 2) return adj;
    uint64_t attempts = static_cast<uint64_t>(vertices) * (max_degree + 1);
    for (uint64_t i = 0; i < attempts; ++i) {
        uint32_t a = static_cast<uint32_t>(rng.next_below(vertices));
        uint32_t b = static_cast<uint32_t>(rng.next_below(vertices));
        if (a == b) continue;
        if (adj[a].size() >= max_degree || adj[b].size() >= max_degree) continue;
        if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

// Code of the rla::Error thrown by fn, or 0 when it does not throw.
template <typename Fn> rla::Errc thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const rla::Error& e) {
        return e.code();
    }
    return static_cast<rla::Errc>(0);
}

} // namespace fx
