#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "rla/oracle.hpp"
#include "rla/zoo.hpp"

using namespace rla;
using namespace fx;

namespace {

Out bit_out(Symbol s) { return s ? Out::one : Out::zero; }

void check_spec_roundtrip(const LocalAlgorithm& alg, bool full) {
    REQUIRE(alg.spec != nullptr);
    std::shared_ptr<const ProblemSpec> back = spec_from_descriptor(alg.spec->descriptor);
    REQUIRE(back != nullptr);
    CHECK(back->n == alg.spec->n);
    CHECK(back->z_count == alg.spec->z_count);
    CHECK(static_cast<bool>(back->valid) == static_cast<bool>(alg.spec->valid));

    auto compare = [&](const Word& w) {
        for (uint32_t z = 0; z < alg.spec->z_count; ++z)
            CHECK(alg.spec->membership(z, w) == back->membership(z, w));
        if (alg.spec->valid) CHECK(alg.spec->valid(w) == back->valid(w));
    };
    if (full) {
        for_each_word(alg.n, alg.alphabet, compare);
    } else {
        Splitmix64 rng(7);
        for (int i = 0; i < 500; ++i) compare(random_word(rng, alg.n, alg.alphabet));
    }
}

} // namespace

TEST_CASE("the zoo ships eight instances with frozen parameters") {
    std::vector<std::string> names = zoo_names();
    REQUIRE(names.size() == 8);

    struct Row {
        const char* name;
        uint32_t n, q, z;
        uint64_t support;
        Rational sigma, rho0, rho1;
        bool relaxed, normalized;
    };
    const Row rows[] = {
        {"all-equal-8", 8, 2, 1, 7, {1, 32}, {1, 4}, {0}, false, true},
        {"rep-code-6", 6, 3, 1, 2, {1, 48}, {1, 12}, {0}, false, true},
        {"trivial-all-4", 4, 1, 1, 1, {1, 16}, {1}, {1}, false, false},
        {"hadamard-3", 8, 2, 3, 8, {1, 32}, {1, 16}, {1, 16}, false, true},
        {"hadamard-4", 16, 2, 4, 16, {1, 4}, {1, 16}, {1, 16}, false, true},
        {"rep3-decoder-2", 6, 3, 2, 1, {1, 48}, {1, 12}, {1, 12}, false, true},
        {"rep3-relaxed-2", 6, 3, 2, 1, {1, 48}, {1, 6}, {1, 6}, true, true},
        {"rep3-relaxed-5", 15, 3, 5, 1, {1, 48}, {1, 15}, {1, 15}, true, true},
    };
    for (const Row& row : rows) {
        CAPTURE(row.name);
        CHECK(std::find(names.begin(), names.end(), row.name) != names.end());
        ZooInstance inst = zoo_get(row.name);
        CHECK(inst.name == row.name);
        CHECK(inst.alg.name == row.name);
        CHECK(inst.alg.n == row.n);
        CHECK(inst.alg.q == row.q);
        CHECK(inst.alg.z_count() == row.z);
        CHECK(inst.alg.support_size() == row.support);
        CHECK(inst.alg.sigma == row.sigma);
        CHECK(inst.alg.rho0 == row.rho0);
        CHECK(inst.alg.rho1 == row.rho1);
        CHECK(inst.alg.relaxed == row.relaxed);
        CHECK(inst.alg.normalized == row.normalized);
        CHECK(inst.alg.alphabet.size == 2);
        CHECK(inst.alg.spec != nullptr);
        CHECK_FALSE(inst.notes.empty());
    }
    CHECK(thrown_code([] { zoo_get("nope"); }) == Errc::precondition);
}

TEST_CASE("every shipped instance passes its own verification gate") {
    for (const std::string& name : zoo_names()) {
        CAPTURE(name);
        InstanceVerification v = verify_instance(zoo_get(name));
        CHECK(v.pass);
        CHECK(v.exhaustive);
        CHECK_FALSE(v.report_json.empty());
    }
}

TEST_CASE("encoders produce the expected codewords") {
    CHECK(encode_rep3(bw("01")) == bw("000111"));
    CHECK(encode_rep3(bw("10")) == bw("111000"));
    CHECK(encode_rep3(bw("11")) == bw("111111"));
    CHECK(encode_hadamard(bw("000")) == bw("00000000"));
    // The all-ones message grades every position by the parity of its index.
    CHECK(encode_hadamard(bw("111")) == bw("01101001"));
    CHECK(thrown_code([] { encode_hadamard(Word{}); }) == Errc::precondition);
    CHECK(thrown_code([] { encode_hadamard(bw("00000")); }) == Errc::precondition);
}

TEST_CASE("decoders are exact on codewords") {
    ZooInstance h3 = zoo_get("hadamard-3");
    for_each_word(3, Alphabet{2}, [&](const Word& msg) {
        Word cw = encode_hadamard(msg);
        for (uint32_t z = 0; z < 3; ++z) {
            CHECK(exact_output_dist(h3.alg, z, cw)[bit_out(msg[z])] == Rational(1));
            CHECK(brute_force_label(*h3.alg.spec, z, cw) ==
                  (msg[z] ? Label::one : Label::zero));
        }
    });

    ZooInstance rd = zoo_get("rep3-decoder-2");
    ZooInstance rr = zoo_get("rep3-relaxed-2");
    for_each_word(2, Alphabet{2}, [&](const Word& msg) {
        Word cw = encode_rep3(msg);
        for (uint32_t z = 0; z < 2; ++z) {
            CHECK(exact_output_dist(rd.alg, z, cw)[bit_out(msg[z])] == Rational(1));
            CHECK(exact_output_dist(rr.alg, z, cw)[bit_out(msg[z])] == Rational(1));
        }
        // One corruption: the plain decoder majority-corrects it; the relaxed
        // decoder may answer bot but never the wrong bit.
        for (Coord c = 0; c < 6; ++c) {
            Word w = cw;
            w.symbols[c] ^= 1;
            for (uint32_t z = 0; z < 2; ++z) {
                Out good = bit_out(msg[z]);
                Out bad = bit_out(1 ^ msg[z]);
                CHECK(exact_output_dist(rd.alg, z, w)[good] == Rational(1));
                OutputDist rel = exact_output_dist(rr.alg, z, w);
                CHECK(rel[bad] == Rational(0));
                CHECK(rel[good] + rel[Out::bot] == Rational(1));
            }
        }
    });

    ZooInstance r5 = zoo_get("rep3-relaxed-5");
    for_each_word(5, Alphabet{2}, [&](const Word& msg) {
        Word cw = encode_rep3(msg);
        for (uint32_t z = 0; z < 5; ++z)
            CHECK(exact_output_dist(r5.alg, z, cw)[bit_out(msg[z])] == Rational(1));
    });
}

TEST_CASE("problem specs rebuild from their descriptors") {
    for (const std::string& name : zoo_names()) {
        CAPTURE(name);
        ZooInstance inst = zoo_get(name);
        check_spec_roundtrip(inst.alg, inst.alg.n <= 8);
    }
    CHECK(thrown_code([] { spec_from_descriptor("not json"); }) == Errc::parse);
    CHECK(thrown_code([] { spec_from_descriptor("{\"kind\":\"none\"}"); }) == Errc::parse);
    CHECK(thrown_code([] { spec_from_descriptor("{}"); }) == Errc::parse);
}

TEST_CASE("instance constructors reject bad parameters") {
    CHECK(thrown_code([] { make_tester_instance("all-equal", Rational(0), 8); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_tester_instance("all-equal", Rational(1, 4), 1); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_tester_instance("rep-code", Rational(1, 12), 7); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_tester_instance("bogus", Rational(1, 4), 8); }) ==
          Errc::precondition);

    CHECK(thrown_code([] { make_decoder_instance("hadamard", 5, Rational(1, 8)); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_decoder_instance("hadamard", 2, Rational(1)); }) ==
          Errc::precondition); // two corruptions in reach
    CHECK(thrown_code([] { make_decoder_instance("rep3", 2, Rational(1, 2)); }) ==
          Errc::precondition); // plain rep3 decoding tolerates none
    CHECK(thrown_code([] { make_decoder_instance("bogus", 2, Rational(1, 8)); }) ==
          Errc::precondition);

    CHECK(thrown_code([] { make_relaxed_decoder_instance("hadamard", 2, Rational(1, 6)); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_relaxed_decoder_instance("rep3", 6, Rational(1, 3)); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_relaxed_decoder_instance("rep3", 2, Rational(2, 3)); }) ==
          Errc::precondition);
    CHECK(thrown_code([] { make_relaxed_decoder_instance("rep3", 2, Rational(0)); }) ==
          Errc::precondition);
}

TEST_CASE("map testers carry one partial tester per proof string") {
    CHECK(map_tester_names() == std::vector<std::string>{"all-equal-map-2", "rep-code-map-4"});
    CHECK(thrown_code([] { make_map_tester("nope"); }) == Errc::precondition);

    MapTester eq = make_map_tester("all-equal-map-2");
    CHECK(eq.m == 1);
    CHECK(eq.k == 8934); // repetitions at sigma 1/32 against error 1/6
    REQUIRE(eq.partial.size() == 2);
    for (uint32_t i = 0; i < 2; ++i) {
        CAPTURE(i);
        const LocalAlgorithm& alg = eq.partial[i].alg;
        CHECK(eq.partial[i].name == "all-equal-map-2/proof-" + std::to_string(i));
        CHECK(alg.n == 8);
        CHECK(alg.q == 2);
        CHECK(alg.sigma == Rational(1, 32));
        CHECK(alg.support_size() == 7);
        CHECK(alg.rho0 == Rational(1, 4));
        CHECK(alg.spec != nullptr);
        check_spec_roundtrip(alg, true);
    }

    MapTester rep = make_map_tester("rep-code-map-4");
    CHECK(rep.m == 2);
    CHECK(rep.k == 37169); // repetitions at sigma 1/96 against error 1/12
    REQUIRE(rep.partial.size() == 4);
    for (uint32_t i = 0; i < 4; ++i) {
        const LocalAlgorithm& alg = rep.partial[i].alg;
        CHECK(alg.n == 6);
        CHECK(alg.q == 6);
        CHECK(alg.sigma == Rational(1, 96));
        CHECK(alg.support_size() == 1);
    }
}

TEST_CASE("prepared map testers accept the covered words and reject far ones") {
    PreparedMapTester eq = prepare_map_tester(make_map_tester("all-equal-map-2"), 1);
    CHECK(eq.k == 8934);
    REQUIRE(eq.testers.size() == 2);
    for (const PreparedSampler& t : eq.testers) CHECK(t.config.p == 1.0);

    MapRunResult zeros = run_map_tester(eq, bw("00000000"), 1);
    CHECK(zeros.output == Out::one);
    CHECK(zeros.samplings == eq.k); // one shared sampling step per repetition
    CHECK(run_map_tester(eq, bw("11111111"), 2).output == Out::one);
    MapRunResult far = run_map_tester(eq, bw("01010101"), 3);
    CHECK(far.output == Out::zero);
    CHECK(far.samplings == eq.k);

    PreparedMapTester rep = prepare_map_tester(make_map_tester("rep-code-map-4"), 1);
    REQUIRE(rep.testers.size() == 4);
    MapRunResult code = run_map_tester(rep, bw("000111"), 1);
    CHECK(code.output == Out::one);
    CHECK(code.samplings == rep.k);
    CHECK(run_map_tester(rep, bw("010010"), 2).output == Out::zero);
}
