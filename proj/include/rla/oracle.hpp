#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rla/core.hpp"

namespace rla {

struct RobustnessOptions {
    // Domain enumeration cap on |Sigma|^n; past it the report is non-exhaustive.
    uint64_t max_words = 1ull << 16;
    // Cap on (center, ball word) pairs examined per side.
    uint64_t max_ball_words = 1ull << 24;
    // Also report the largest certifiable shell radius per side (scans beyond
    // the declared radii until a violation or the budget).
    bool extend_to_maximal = true;
};

struct RobustnessReport {
    bool pass0 = true, pass1 = true;
    bool exhaustive = true;
    // Largest certified shell radius per side as absolute distance / n;
    // 1 when vacuous (no domain points on that side).
    Rational certified0, certified1;
    std::optional<uint32_t> counterexample_z;
    std::optional<Word> counterexample_center;
    std::optional<Word> counterexample;
    std::string detail;
};

// Exhaustively checks the robustness contract: for every z, every domain point
// x with f(z,x) = b, and every w within relative distance rho_b of x, the
// algorithm outputs b on w with probability >= 1 - sigma (exact rationals).
// Relaxed algorithms get credit for bot everywhere except on the valid set,
// where the output must equal f outright.
RobustnessReport check_robustness(const LocalAlgorithm& alg, const Rational& rho0,
                                  const Rational& rho1, const RobustnessOptions& opts = {});

struct VolumeLemmaOptions {
    // Exhaustive subset search up to this many distinct supports; beyond it a
    // randomized heavy-packing search runs and the report is flagged heuristic.
    uint32_t exhaustive_supports = 12;
    uint32_t heuristic_rounds = 2000;
    uint64_t seed = 1;
    bool check_witness = true; // certify the witness via check_robustness first
};

struct VolumeLemmaReport {
    bool pass = true;
    bool exhaustive = true;
    Rational worst_weight;      // heaviest sub-collection weight found under the cap
    Rational bound;             // 2 sigma
    uint64_t subcollections = 0;
    std::string detail;
};

// Volume lemma check at one domain point x with an opposite-valued rho-robust
// witness y: every sub-collection of supp(mu_x) covering fewer than rho*n
// coordinates must carry weight <= 2 sigma.
VolumeLemmaReport check_volume_lemma(const LocalAlgorithm& alg, uint32_t z, const Word& x,
                                     const Word& y_witness, const Rational& rho,
                                     const VolumeLemmaOptions& opts = {});

// Direct evaluation of the problem spec's membership predicate.
Label brute_force_label(const ProblemSpec& spec, uint32_t z, const Word& x);

} // namespace rla
