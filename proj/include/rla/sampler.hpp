#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rla/core.hpp"
#include "rla/daisy.hpp"

namespace rla {

struct SamplerConfig {
    uint32_t n = 0;
    uint32_t q = 0;
    Alphabet alphabet;
    uint64_t support = 0; // |mu| of the prepared algorithm
    double gamma = 0.0;
    double p = 1.0;
    bool p_clamped = false;
    bool overridden = false; // gamma or p replaced by caller; guarantees void
    Rational tau_base;       // |mu| / 4q; tau_j = tau_base * p^j, exact when p = 1
    double alpha1 = 0.0;     // capping parameter for the b=1 count (uses rho0)
    double alpha0 = 0.0;     // capping parameter for the b=0 count (uses rho1); relaxed only
    uint64_t enum_budget = 1ull << 20; // max kernel assignments per petal size
};

// One side's consultable material: the b-valued tuples deduplicated by
// (S, a_S) with multiplicities, the daisy partition of their distinct sets,
// and the petal data the enumeration consumes.
struct TupleGroup {
    std::vector<Coord> coords;  // sorted q-set S
    std::vector<Symbol> assign; // a_S aligned with coords
    uint64_t mult = 0;          // tuples collapsed into this group
    uint32_t set_index = 0;     // into SideData::distinct_sets
};

struct SideData {
    std::vector<std::vector<Coord>> distinct_sets;
    DaisyPartition partition; // over distinct_sets
    std::vector<TupleGroup> groups;
    // groups_by_daisy[j] = indices into groups whose set lies in daisy j.
    std::vector<std::vector<uint32_t>> groups_by_daisy;
};

struct PreprocessOptions {
    uint64_t enum_budget = 1ull << 20;
    std::optional<double> override_gamma;
    std::optional<double> override_p;
};

struct PreparedSampler {
    std::string instance; // carried into reports
    uint32_t z = 0;
    bool relaxed = false;
    SamplerConfig config;
    Rational sigma, rho0, rho1;
    SideData side1;
    SideData side0; // populated only in relaxed mode
    std::shared_ptr<const ProblemSpec> spec; // may be null
};

// Builds the execution tables for one explicit input of a prepared algorithm:
// extracts tuples, splits by output value, partitions distinct sets into
// daisies, computes gamma/p/thresholds/alpha, and asserts the kernel size
// bound |K_i| <= gamma q^2 n^(1-max{1,i}/q). Budget error when a consulted
// kernel has |Sigma|^|K_j| above the enumeration budget.
PreparedSampler preprocess(const LocalAlgorithm& alg, uint32_t z, bool relaxed,
                           const PreprocessOptions& opts = {});

struct SampleDraw {
    std::vector<Coord> Q;    // sorted
    std::vector<bool> in_Q;  // size n membership mask
    bool aborted = false;    // |Q| >= 2pn
};

// Includes each coordinate independently with probability p.
SampleDraw sample_coords(uint32_t n, double p, uint64_t seed);

// Read guard for sample-based honesty: the enumeration may only open
// coordinates inside Q; any other access is an invariant error.
struct SampledWord {
    const Word* x = nullptr;
    const std::vector<bool>* in_Q = nullptr;

    Symbol at(Coord i) const {
        if (!(*in_Q)[i]) fail(Errc::invariant, "read outside the sampled coordinate set");
        return (*x)[i];
    }
};

// Votes for output b at petal size j under kernel assignment kappa: counts
// tuple multiplicity over groups with S in D_j^(b), S inside Q union K_j, and
// a_S matching kappa on K_j and the sampled word off it. For j = 1, a petal
// coordinate carried by >= alpha distinct counted sets drops all its votes.
// work, when given, accrues one unit per group inspected.
uint64_t count_votes(const PreparedSampler& pre, int side_b, uint32_t j,
                     const std::vector<Symbol>& kappa, const SampledWord& xw,
                     uint64_t* work = nullptr);

struct RunResult {
    Out output = Out::zero;
    bool aborted = false;
    int32_t triggering_j = -1; // petal size whose threshold was crossed; -1 none
    std::vector<Symbol> triggering_kappa;
    uint64_t votes = 0; // vote count at the trigger, 0 when none
    uint64_t seed = 0;
    uint64_t q_size = 0;    // |Q|
    uint64_t work = 0;      // deterministic enumeration work units
    uint64_t samplings = 0; // sampling steps consumed (shared runs report 0)
};

// The sample-based execution: sampling step (abort -> 0), then for j = 1..q
// ascending and kappa over Sigma^K_j in lexicographic order, output 1 on the
// first v >= tau_j; otherwise 0. D_0 is never consulted.
RunResult run_sample_based(const PreparedSampler& pre, const Word& x, uint64_t seed);

// Relaxed execution: one sampling step (abort -> bot), both sides enumerated
// on the same Q; outputs b when exactly side b crosses, bot when neither or
// both cross.
RunResult run_relaxed(const PreparedSampler& pre, const Word& x, uint64_t seed);

struct MultiRunResult {
    std::vector<RunResult> results;
    bool aborted = false;
    uint64_t samplings = 0; // always 1: the sampling step is shared
    uint64_t work = 0;
};

// Runs several samplers over one shared sampling step. All must agree on n,
// alphabet and p. Standard samplers take the 0-on-abort path, relaxed ones bot.
MultiRunResult shared_sample_multirun(const std::vector<const PreparedSampler*>& pres,
                                      const Word& x, uint64_t seed);

struct GlobalDecodeResult {
    std::vector<Out> outputs; // one per index
    bool aborted = false;
    uint64_t samplings = 0;
    uint64_t work = 0;
};

// Decodes every message index with a single shared sampling step. Callers are
// expected to have reduced per-index error to 1/(3k) beforehand.
GlobalDecodeResult global_decode(const std::vector<PreparedSampler>& per_index, const Word& w,
                                 uint64_t seed);

} // namespace rla
