#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rla/core.hpp"

namespace rla {

// h(k) = n^(max{1,k-1}/q).
double h_bound(uint32_t k, uint32_t n, uint32_t q);

// Exact integer-power comparisons against h, avoiding pow() rounding at
// integer boundaries: d >= h(k) iff d^q >= n^(max{1,k-1}).
bool degree_at_least_h(uint64_t d, uint32_t k, uint32_t n, uint32_t q);
// c <= 2 h(j) - 1 iff (c+1)^q <= 2^q * n^(max{1,j-1}).
bool within_overlap_bound(uint64_t c, uint32_t j, uint32_t n, uint32_t q);

struct DaisyPartition {
    uint32_t n = 0;
    uint32_t q = 0;
    // kernels[j] = K_j for j = 0..q, sorted ascending; K_q is empty, K_0 = K_1.
    std::vector<std::vector<Coord>> kernels;
    // daisies[j] = indices into the input collection; together a disjoint cover.
    std::vector<std::vector<uint32_t>> daisies;
};

// Kernel degrees count distinct set values: at desk scale the support of a
// prepared distribution holds many copies of few sets, and multiplicity
// counting would park everything in the never-consulted D_0.
uint64_t distinct_degree(const std::vector<std::vector<Coord>>& sets, Coord i);

// Partition of a q-set multi-collection into daisies D_0..D_q with the kernel
// chain K_q = {} <= ... <= K_1 = K_0. Every member lands in the smallest j
// with |S \ K_j| = j; duplicates land together.
DaisyPartition daisy_partition(const std::vector<std::vector<Coord>>& sets, uint32_t n,
                               uint32_t q);

struct DaisyCheckReport {
    bool ok = true;
    std::string detail;                // first violation, empty when ok
    std::vector<uint64_t> overlap_max; // per petal size j = 0..q
};

// Verifies the partition conclusions: disjoint cover, kernel chain, kernel
// size bound |K_j| <= q*|distinct sets|*n^(-max{1,j}/q), petal sizes, and the
// degree criterion (k-th smallest petal degree <= h(k)). Violations are
// implementation bugs, never data errors.
DaisyCheckReport check_partition_invariants(const std::vector<std::vector<Coord>>& sets,
                                            const DaisyPartition& partition);

// Verifies that for j >= 1 and each S in D_j, at most 2h(j)-1 distinct member
// values of D_j (S included) have petals meeting S's petal.
DaisyCheckReport check_petal_overlap_bound(const std::vector<std::vector<Coord>>& sets,
                                           const DaisyPartition& partition);

struct EquitableColoringOptions {
    uint64_t seed = 0;
    uint32_t restarts = 64;
    uint64_t max_moves = 1u << 20;
};

// Proper k-coloring with class sizes floor(m/k) or ceil(m/k). Requires
// k >= Delta+1 (precondition error otherwise). Greedy coloring plus
// augmenting-move rebalancing with randomized restarts; raises a budget error
// if the move budget runs out (the coloring always exists).
std::vector<uint32_t> equitable_color(const std::vector<std::vector<uint32_t>>& adjacency,
                                      uint32_t k, const EquitableColoringOptions& opts = {});

struct SimpleDaisyFamily {
    // classes[c] = indices into the input collection; within a class petals are
    // pairwise disjoint; sizes differ by at most 1.
    std::vector<std::vector<uint32_t>> classes;
};

// Splits a daisy into t+1 simple daisies by equitably coloring the
// petal-intersection graph (edge when (S intersect S') \ kernel is nonempty;
// identical members are distinct vertices). Requires every petal to meet at
// most t other petals.
SimpleDaisyFamily simplify(const std::vector<std::vector<Coord>>& sets,
                           const std::vector<Coord>& kernel, uint32_t t,
                           const EquitableColoringOptions& opts = {});

} // namespace rla
