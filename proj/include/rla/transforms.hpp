#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rla/core.hpp"

namespace rla {

struct ErrorReduceOptions {
    // Materialized tree count cap: t-fold products explode quickly.
    uint64_t max_support = 1ull << 20;
};

struct ErrorReduceReport {
    bool applied = false; // false: target already met, algorithm returned unchanged
    uint64_t t = 1;       // majority repetitions
};

struct ErrorReduceResult {
    LocalAlgorithm alg;
    ErrorReduceReport report;
};

// Majority vote over t independent runs, t = 108*log2(1/target)/sigma. The tree
// multi-collection becomes all ordered t-tuples of input trees composed
// sequentially, with the leaf holding the plurality output (ties resolved in
// the order 0, 1, bot). No-op (flagged) when target_sigma >= alg.sigma.
ErrorReduceResult error_reduce(const LocalAlgorithm& alg, const Rational& target_sigma,
                               const ErrorReduceOptions& opts = {});

// Same construction with an explicit repetition count; declared_sigma is the
// error bound the caller attributes to the result.
ErrorReduceResult error_reduce_repetitions(const LocalAlgorithm& alg, uint64_t t,
                                           const Rational& declared_sigma,
                                           const ErrorReduceOptions& opts = {});

struct RandomnessReduceOptions {
    // Verify over all of Sigma^n when |Sigma|^n is at most this; otherwise over
    // the caller-supplied witness words.
    uint64_t exhaustive_limit = 1ull << 16;
    uint32_t max_attempts = 16;
    std::vector<Word> witnesses;
};

struct RandomnessReduceReport {
    uint32_t attempts = 0;
    bool exhaustive = true;
    uint64_t support = 0;
};

struct RandomnessReduceResult {
    LocalAlgorithm alg;
    RandomnessReduceReport report;
};

// Resamples the tree distribution down to support 3n ln|Sigma|/sigma_param
// (per explicit input z, independently seeded) and verifies: wherever the
// input algorithm has a (1 - sigma_param)-majority output, the resampled one
// keeps that output with probability >= 1 - 2*sigma_param. Declared error rate
// doubles. Retries with fresh samples up to max_attempts, then raises a
// derandomization error naming the worst offending (z, x).
RandomnessReduceResult randomness_reduce(const LocalAlgorithm& alg, const Rational& sigma_param,
                                         uint64_t seed,
                                         const RandomnessReduceOptions& opts = {});

struct PrepareOptions {
    ErrorReduceOptions amplify;
    RandomnessReduceOptions derand;
};

struct PrepareReport {
    bool amplified = false;
    uint64_t t = 1;
    uint32_t q_prime = 0;
    Rational sigma;        // final error rate, 1/(8 q')
    uint64_t support = 0;  // final |mu|, 48 q' n ln|Sigma|
    uint32_t derand_attempts = 0;
    bool exhaustive = true;
};

struct PrepareResult {
    LocalAlgorithm alg;
    PrepareReport report;
};

// Full preparation: amplify error to sigma'' = 1/(16 q') (no-op when already
// there), normalize, then reduce randomness at sigma'', landing on error
// 1/(8 q') with support 48 q' n ln|Sigma|. Robustness radii carry through.
PrepareResult prepare(const LocalAlgorithm& alg, uint64_t seed, const PrepareOptions& opts = {});

} // namespace rla
