#include "rla/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace rla {

const char* library_version() { return "0.1.0"; }

Interval wilson_interval(uint64_t successes, uint64_t trials, double z) {
    if (trials == 0) fail(Errc::precondition, "wilson_interval with zero trials");
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = phat + z2 / (2.0 * n);
    double margin = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    double lo = (center - margin) / denom;
    double hi = (center + margin) / denom;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

Word word_from_string(const std::string& digits, const Alphabet& alphabet) {
    Word w;
    w.symbols.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9') fail(Errc::parse, "word digit out of range: " + digits);
        int v = c - '0';
        if (static_cast<uint32_t>(v) >= alphabet.size)
            fail(Errc::parse, "word symbol exceeds alphabet: " + digits);
        w.symbols.push_back(static_cast<Symbol>(v));
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.symbols.size());
    for (Symbol v : w.symbols) s.push_back(static_cast<char>('0' + v));
    return s;
}

Rational distance(const Word& a, const Word& b) {
    if (a.n() != b.n()) fail(Errc::precondition, "distance between words of different length");
    if (a.n() == 0) fail(Errc::precondition, "distance between empty words");
    long long mismatches = 0;
    for (uint32_t i = 0; i < a.n(); ++i)
        if (a.symbols[i] != b.symbols[i]) ++mismatches;
    return Rational(mismatches, a.n());
}

Word replace(const Word& x, const std::vector<Coord>& K, const std::vector<Symbol>& kappa) {
    if (K.size() != kappa.size()) fail(Errc::precondition, "replace: K and kappa differ in length");
    Word out = x;
    for (size_t i = 0; i < K.size(); ++i) {
        if (K[i] >= x.n()) fail(Errc::precondition, "replace: coordinate out of range");
        out.symbols[K[i]] = kappa[i];
    }
    return out;
}

DecisionTree make_leaf_tree(Out value) {
    DecisionTree t;
    t.root.leaf = value;
    return t;
}

EvalResult eval_tree(const DecisionTree& tree, const Word& x) {
    EvalResult r;
    const TreeNode* node = &tree.root;
    while (!node->is_leaf()) {
        if (node->query >= x.n()) fail(Errc::structural, "tree queries coordinate out of range");
        Symbol v = x.symbols[node->query];
        if (v >= node->children.size()) fail(Errc::structural, "tree node missing child for symbol");
        r.coords.push_back(node->query);
        r.assign.push_back(v);
        node = &node->children[v];
    }
    r.output = node->leaf;
    return r;
}

namespace {

uint32_t depth_rec(const TreeNode& node, std::set<Coord>& on_branch) {
    if (node.is_leaf()) return static_cast<uint32_t>(on_branch.size());
    bool inserted = on_branch.insert(node.query).second;
    uint32_t best = 0;
    for (const TreeNode& c : node.children) best = std::max(best, depth_rec(c, on_branch));
    if (inserted) on_branch.erase(node.query);
    return best;
}

void validate_node(const TreeNode& node, const LocalAlgorithm& alg) {
    if (node.is_leaf()) {
        if (node.leaf == Out::bot && !alg.relaxed)
            fail(Errc::structural, "bot leaf in non-relaxed algorithm");
        return;
    }
    if (node.query >= alg.n) fail(Errc::structural, "tree queries coordinate out of range");
    if (node.children.size() != alg.alphabet.size)
        fail(Errc::structural, "inner node child count differs from alphabet size");
    for (const TreeNode& c : node.children) validate_node(c, alg);
}

} // namespace

uint32_t tree_depth(const DecisionTree& tree) {
    std::set<Coord> on_branch;
    return depth_rec(tree.root, on_branch);
}

void validate(const LocalAlgorithm& alg) {
    if (alg.alphabet.size < 2 || alg.alphabet.size > 255)
        fail(Errc::structural, "alphabet size must be in [2,255]");
    if (alg.n == 0) fail(Errc::structural, "n must be positive");
    if (alg.trees.empty()) fail(Errc::structural, "algorithm has no explicit-input slot");
    if (alg.sigma < Rational(0) || alg.sigma >= Rational(1))
        fail(Errc::structural, "sigma outside [0,1)");
    size_t support = alg.trees[0].size();
    if (support == 0) fail(Errc::structural, "empty tree multi-collection");
    for (const auto& collection : alg.trees) {
        if (collection.size() != support)
            fail(Errc::structural, "tree multi-collections differ in size across z");
        for (const TreePtr& t : collection) {
            if (!t) fail(Errc::structural, "null tree");
            validate_node(t->root, alg);
            if (tree_depth(*t) > alg.q) fail(Errc::structural, "tree deeper than q");
        }
    }
    if (alg.spec) {
        if (alg.spec->n != alg.n || alg.spec->alphabet.size != alg.alphabet.size ||
            alg.spec->z_count != alg.z_count())
            fail(Errc::structural, "problem spec dimensions do not match algorithm");
    }
}

Out run_algorithm(const LocalAlgorithm& alg, uint32_t z, const Word& x, uint64_t seed) {
    if (z >= alg.z_count()) fail(Errc::precondition, "explicit input out of range");
    if (x.n() != alg.n) fail(Errc::precondition, "input word has wrong length");
    Splitmix64 rng(split_seed(seed, 0x72756e /* "run" */));
    uint64_t idx = rng.next_below(alg.trees[z].size());
    return eval_tree(*alg.trees[z][idx], x).output;
}

namespace {

// Rebuilds a tree so every branch queries exactly q distinct coordinates.
// `assigned[c]` holds the symbol already read at coordinate c on this branch.
TreeNode normalize_node(const TreeNode& node, std::map<Coord, Symbol>& assigned, uint32_t q,
                        uint32_t n, uint32_t sigma_size) {
    if (!node.is_leaf()) {
        auto it = assigned.find(node.query);
        if (it != assigned.end())
            return normalize_node(node.children[it->second], assigned, q, n, sigma_size);
        TreeNode out;
        out.query = node.query;
        out.children.reserve(sigma_size);
        for (uint32_t v = 0; v < sigma_size; ++v) {
            assigned[node.query] = static_cast<Symbol>(v);
            out.children.push_back(normalize_node(node.children[v], assigned, q, n, sigma_size));
            assigned.erase(node.query);
        }
        return out;
    }
    if (assigned.size() == q) {
        TreeNode out;
        out.leaf = node.leaf;
        return out;
    }
    // Pad with the smallest coordinate unused on this branch.
    Coord pad = 0;
    while (assigned.count(pad)) ++pad;
    if (pad >= n) fail(Errc::structural, "normalize: q exceeds n, cannot pad");
    TreeNode out;
    out.query = pad;
    out.children.reserve(sigma_size);
    for (uint32_t v = 0; v < sigma_size; ++v) {
        assigned[pad] = static_cast<Symbol>(v);
        out.children.push_back(normalize_node(node, assigned, q, n, sigma_size));
        assigned.erase(pad);
    }
    return out;
}

} // namespace

LocalAlgorithm normalize(const LocalAlgorithm& alg) {
    validate(alg);
    if (alg.q > alg.n) fail(Errc::structural, "normalize: q exceeds n");
    LocalAlgorithm out = alg;
    if (alg.normalized) return out;
    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        for (size_t i = 0; i < alg.trees[z].size(); ++i) {
            std::map<Coord, Symbol> assigned;
            auto tree = std::make_shared<DecisionTree>();
            tree->root =
                normalize_node(alg.trees[z][i]->root, assigned, alg.q, alg.n, alg.alphabet.size);
            out.trees[z][i] = tree;
        }
    }
    out.normalized = true;
    return out;
}

namespace {

void extract_rec(const TreeNode& node, std::vector<Coord>& coords, std::vector<Symbol>& assign,
                 uint32_t& branch_index, uint32_t tree_index, uint32_t q,
                 std::vector<DescriptionTuple>& out) {
    if (node.is_leaf()) {
        if (coords.size() != q) fail(Errc::precondition, "extract_tuples requires normalized trees");
        DescriptionTuple tup;
        tup.coords = coords;
        tup.assign = assign;
        // sort the pair (coords, assign) by coordinate
        std::vector<size_t> order(coords.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return coords[a] < coords[b]; });
        for (size_t i = 0; i < order.size(); ++i) {
            tup.coords[i] = coords[order[i]];
            tup.assign[i] = assign[order[i]];
        }
        tup.b = node.leaf;
        tup.s = tree_index;
        tup.t = branch_index++;
        out.push_back(std::move(tup));
        return;
    }
    for (uint32_t v = 0; v < node.children.size(); ++v) {
        coords.push_back(node.query);
        assign.push_back(static_cast<Symbol>(v));
        extract_rec(node.children[v], coords, assign, branch_index, tree_index, q, out);
        coords.pop_back();
        assign.pop_back();
    }
}

} // namespace

std::vector<DescriptionTuple> extract_tuples(const LocalAlgorithm& alg, uint32_t z) {
    if (!alg.normalized) fail(Errc::precondition, "extract_tuples requires a normalized algorithm");
    if (z >= alg.z_count()) fail(Errc::precondition, "explicit input out of range");
    std::vector<DescriptionTuple> out;
    out.reserve(alg.trees[z].size());
    for (uint32_t s = 0; s < alg.trees[z].size(); ++s) {
        std::vector<Coord> coords;
        std::vector<Symbol> assign;
        uint32_t branch = 0;
        extract_rec(alg.trees[z][s]->root, coords, assign, branch, s, alg.q, out);
    }
    return out;
}

std::vector<std::vector<Coord>> induced_distribution(const LocalAlgorithm& alg, uint32_t z,
                                                     const Word& x) {
    if (!alg.normalized)
        fail(Errc::precondition, "induced_distribution requires a normalized algorithm");
    if (z >= alg.z_count()) fail(Errc::precondition, "explicit input out of range");
    if (x.n() != alg.n) fail(Errc::precondition, "input word has wrong length");
    std::vector<std::vector<Coord>> out;
    out.reserve(alg.trees[z].size());
    for (const TreePtr& t : alg.trees[z]) {
        EvalResult r = eval_tree(*t, x);
        std::sort(r.coords.begin(), r.coords.end());
        out.push_back(std::move(r.coords));
    }
    return out;
}

OutputDist exact_output_dist(const LocalAlgorithm& alg, uint32_t z, const Word& x) {
    if (z >= alg.z_count()) fail(Errc::precondition, "explicit input out of range");
    if (x.n() != alg.n) fail(Errc::precondition, "input word has wrong length");
    // Trees are often shared pointers to a few distinct objects; evaluate each
    // distinct tree once and weight by multiplicity.
    std::map<const DecisionTree*, long long> mult;
    for (const TreePtr& t : alg.trees[z]) mult[t.get()] += 1;
    long long counts[3] = {0, 0, 0};
    for (const auto& [tree, m] : mult)
        counts[static_cast<size_t>(eval_tree(*tree, x).output)] += m;
    long long total = static_cast<long long>(alg.trees[z].size());
    OutputDist dist;
    for (size_t i = 0; i < 3; ++i) dist.p[i] = Rational(counts[i], total);
    return dist;
}

void for_each_word(uint32_t n, const Alphabet& alphabet,
                   const std::function<void(const Word&)>& fn) {
    Word w;
    w.symbols.assign(n, 0);
    for (;;) {
        fn(w);
        uint32_t i = n;
        while (i > 0) {
            --i;
            if (++w.symbols[i] < alphabet.size) break;
            w.symbols[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

} // namespace rla
