#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rla/core.hpp"
#include "rla/sampler.hpp"

namespace rla {

struct ZooInstance {
    std::string name;
    std::string notes;
    LocalAlgorithm alg; // carries spec, sigma, radii
};

// Testers: property in {"all-equal", "rep-code", "all"}. The attached label
// spec maps x to 1 on the property, 0 at distance > 2*epsilon from it,
// outside otherwise.
ZooInstance make_tester_instance(const std::string& property, const Rational& epsilon,
                                 uint32_t n);

// Decoders: code in {"hadamard" (k <= 4), "rep3" (k <= 5)}. The attached
// label spec maps (z, w) to bit z of the decoded message for w within
// delta/2 of the code.
ZooInstance make_decoder_instance(const std::string& code, uint32_t k, const Rational& delta);

// Relaxed decoder over the 3-repetition code: conflicting blocks yield bot.
// Valid set V = the code itself.
ZooInstance make_relaxed_decoder_instance(const std::string& code, uint32_t k,
                                          const Rational& delta);

// Encoders for the built-in codes (message as a word of length k).
Word encode_hadamard(const Word& message);
Word encode_rep3(const Word& message);

// Shipped instances, addressable by name.
std::vector<std::string> zoo_names();
ZooInstance zoo_get(const std::string& name);

// Rebuilds a ProblemSpec from its JSON descriptor (kind + parameters).
std::shared_ptr<const ProblemSpec> spec_from_descriptor(const std::string& descriptor);

struct InstanceVerification {
    bool pass = true;
    bool exhaustive = true;
    std::string report_json; // per-suite results
};

// The build gate: robustness at declared radii, normalize equivalence,
// partition invariants on the induced sets, and volume-lemma spot checks.
InstanceVerification verify_instance(const ZooInstance& instance);

// A property covered by partial testers indexed by proof strings of length m.
struct MapTester {
    std::string name;
    uint32_t m = 0;                  // proof length; |Sigma|^m partial testers
    uint64_t k = 0;                  // repetitions: 108*log2(3*|Sigma|^m)/sigma
    std::vector<ZooInstance> partial;
};

// Built-ins: "all-equal-map-2" (two constant-word testers, n=8) and
// "rep-code-map-4" (four exact-match testers, n=6).
MapTester make_map_tester(const std::string& name);
std::vector<std::string> map_tester_names();

struct PreparedMapTester {
    std::string name;
    uint64_t k = 0;
    std::vector<PreparedSampler> testers;
};

// prepare + preprocess every partial tester.
PreparedMapTester prepare_map_tester(const MapTester& map, uint64_t seed,
                                     const PreprocessOptions& opts = {});

struct MapRunResult {
    Out output = Out::zero;
    uint64_t samplings = 0; // exactly k when no abort path hits
    uint64_t work = 0;
};

// k repetitions, each one shared sampling step across all partial testers;
// accepts iff some tester's majority over the repetitions accepts.
MapRunResult run_map_tester(const PreparedMapTester& map, const Word& x, uint64_t seed);

} // namespace rla
