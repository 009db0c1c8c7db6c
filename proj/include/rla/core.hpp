#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rla/util.hpp"

namespace rla {

using Symbol = uint8_t;
using Coord = uint32_t;

struct Alphabet {
    uint32_t size = 2; // >= 2
};

// A word over the alphabet; coordinates are 0-based.
struct Word {
    std::vector<Symbol> symbols;

    uint32_t n() const { return static_cast<uint32_t>(symbols.size()); }
    Symbol operator[](size_t i) const { return symbols[i]; }

    friend bool operator==(const Word& a, const Word& b) { return a.symbols == b.symbols; }
    friend bool operator<(const Word& a, const Word& b) { return a.symbols < b.symbols; }
};

Word word_from_string(const std::string& digits, const Alphabet& alphabet);
std::string word_to_string(const Word& w);

// Relative Hamming distance, exact.
Rational distance(const Word& a, const Word& b);

// x with the coordinates in K overwritten by kappa (aligned with K).
Word replace(const Word& x, const std::vector<Coord>& K, const std::vector<Symbol>& kappa);

// Algorithm output alphabet. Bot is the "don't know" symbol of relaxed decoders.
enum class Out : int8_t { zero = 0, one = 1, bot = 2 };

inline int out_bit(Out o) { return o == Out::one ? 1 : 0; }

// Membership of (z, x) in the partial function's domain.
enum class Label : int8_t { zero = 0, one = 1, outside = 2 };

// A partial function f : Z x Sigma^n -> {0,1}. Built-in families are constructed
// from a descriptor (see spec_from_descriptor) so they can be serialized by name.
struct ProblemSpec {
    uint32_t n = 0;
    Alphabet alphabet;
    uint32_t z_count = 1;
    std::function<Label(uint32_t z, const Word& x)> membership;
    std::function<bool(const Word& x)> valid; // valid-input set V; empty when absent
    std::string descriptor;                   // JSON, "{\"kind\":\"none\"}" when opaque
};

// |Sigma|-ary decision tree. A node with children queries a coordinate; a node
// without children is a leaf carrying the output.
struct TreeNode {
    Coord query = 0;
    Out leaf = Out::zero;
    std::vector<TreeNode> children; // size alphabet.size for inner nodes, empty for leaves

    bool is_leaf() const { return children.empty(); }
};

struct DecisionTree {
    TreeNode root;
};

using TreePtr = std::shared_ptr<const DecisionTree>;

DecisionTree make_leaf_tree(Out value);

// Description of one branch: the coordinate set S (sorted), the assignment a_S
// aligned with S, the leaf output b, and the identifying pair (tree s, branch t).
struct DescriptionTuple {
    std::vector<Coord> coords;
    std::vector<Symbol> assign;
    Out b = Out::zero;
    uint32_t s = 0;
    uint32_t t = 0;
};

struct EvalResult {
    Out output;
    std::vector<Coord> coords;   // queried coordinates in query order
    std::vector<Symbol> assign;  // symbols read, aligned with coords
};

EvalResult eval_tree(const DecisionTree& tree, const Word& x);

// Number of distinct coordinates on the deepest branch.
uint32_t tree_depth(const DecisionTree& tree);

// A q-query algorithm given as one tree multi-collection per explicit input z.
// The multi-collection is uniform: running the algorithm on (z, x) draws a tree
// uniformly and evaluates it. Collections are never deduplicated; shared TreePtr
// values only save memory.
struct LocalAlgorithm {
    uint32_t n = 0;
    Alphabet alphabet;
    uint32_t q = 0;
    Rational sigma;          // error rate
    Rational rho0, rho1;     // declared robustness radii
    bool relaxed = false;    // outputs may include bot
    bool normalized = false; // every branch queries exactly q distinct coordinates
    std::shared_ptr<const ProblemSpec> spec; // may be null
    std::string name;
    std::vector<std::vector<TreePtr>> trees; // [z][tree index]

    uint32_t z_count() const { return static_cast<uint32_t>(trees.size()); }
    size_t support_size() const { return trees.empty() ? 0 : trees[0].size(); }
};

// Structural checks: alphabet >= 2, equal support sizes across z, branch depth
// and distinct-coordinate count <= q, leaf outputs within the declared range.
void validate(const LocalAlgorithm& alg);

Out run_algorithm(const LocalAlgorithm& alg, uint32_t z, const Word& x, uint64_t seed);

// Every branch made to query exactly q distinct coordinates: repeated queries are
// collapsed onto the already-known symbol and short branches are padded with the
// smallest coordinates unused on that branch. Output distribution is unchanged
// on every input.
LocalAlgorithm normalize(const LocalAlgorithm& alg);

// All description tuples of a normalized algorithm, tree by tree, branches in
// symbol-lexicographic order. Total count is support * |Sigma|^q.
std::vector<DescriptionTuple> extract_tuples(const LocalAlgorithm& alg, uint32_t z);

// mu_x: the multi-collection of query sets induced by x (one sorted q-set per tree).
std::vector<std::vector<Coord>> induced_distribution(const LocalAlgorithm& alg, uint32_t z,
                                                     const Word& x);

// Exact output distribution over the uniform tree choice.
struct OutputDist {
    std::array<Rational, 3> p; // indexed by Out

    const Rational& operator[](Out o) const { return p[static_cast<size_t>(o)]; }
    Rational& operator[](Out o) { return p[static_cast<size_t>(o)]; }
};

OutputDist exact_output_dist(const LocalAlgorithm& alg, uint32_t z, const Word& x);

// Enumerates all words of length n, lexicographically, calling fn on each.
void for_each_word(uint32_t n, const Alphabet& alphabet, const std::function<void(const Word&)>& fn);

} // namespace rla
