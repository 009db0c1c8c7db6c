#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "rla.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    rla_string_free(s);
    return out;
}

struct Alg {
    rla_algorithm* p = nullptr;
    ~Alg() { rla_algorithm_free(p); }
};

struct Sam {
    rla_sampler* p = nullptr;
    ~Sam() { rla_sampler_free(p); }
};

void get_zoo(const char* name, Alg& a) { REQUIRE(rla_zoo_get(name, &a.p) == RLA_OK); }

} // namespace

TEST_CASE("version, error text, and null handling") {
    REQUIRE(rla_version() != nullptr);
    CHECK(std::string(rla_version()) == "0.1.0");

    CHECK(rla_zoo_list(nullptr) == RLA_ERR_PRECONDITION);
    CHECK(std::string(rla_last_error()).find("null") != std::string::npos);

    char* out = nullptr;
    CHECK(rla_zoo_list(&out) == RLA_OK);
    take(out);
    CHECK(std::string(rla_last_error()).empty()); // success clears the slot

    CHECK(rla_zoo_get(nullptr, nullptr) == RLA_ERR_PRECONDITION);
    Alg a;
    CHECK(rla_zoo_get("nope", &a.p) == RLA_ERR_PRECONDITION);
    CHECK(std::string(rla_last_error()).find("unknown instance") != std::string::npos);

    rla_string_free(nullptr);
    rla_algorithm_free(nullptr);
    rla_sampler_free(nullptr);
}

TEST_CASE("zoo list is an eight-entry JSON array") {
    char* out = nullptr;
    REQUIRE(rla_zoo_list(&out) == RLA_OK);
    json list = json::parse(take(out));
    REQUIRE(list.is_array());
    REQUIRE(list.size() == 8);
    CHECK(list[0].at("name") == "all-equal-8");
    for (const json& row : list) {
        CHECK(row.contains("n"));
        CHECK(row.contains("q"));
        CHECK(row.contains("relaxed"));
        CHECK(row.contains("spec_kind"));
        CHECK(row.contains("notes"));
    }
    CHECK(list[0].at("n") == 8);
    CHECK(list[0].at("spec_kind") == "tester");
}

TEST_CASE("algorithm JSON round trips byte for byte") {
    Alg a;
    get_zoo("all-equal-8", a);
    char* out = nullptr;
    REQUIRE(rla_algorithm_to_json(a.p, &out) == RLA_OK);
    std::string first = take(out);

    Alg b;
    REQUIRE(rla_algorithm_from_json(first.c_str(), &b.p) == RLA_OK);
    REQUIRE(rla_algorithm_to_json(b.p, &out) == RLA_OK);
    CHECK(take(out) == first);

    Alg bad;
    CHECK(rla_algorithm_from_json("not json", &bad.p) == RLA_ERR_PARSE);
    CHECK(std::string(rla_last_error()).find("bad JSON") != std::string::npos);

    REQUIRE(rla_algorithm_info(a.p, &out) == RLA_OK);
    json info = json::parse(take(out));
    CHECK(info.at("name") == "all-equal-8");
    CHECK(info.at("n") == 8);
    CHECK(info.at("q") == 2);
    CHECK(info.at("support") == 7);
    CHECK(info.at("sigma") == json{{"num", 1}, {"den", 32}});
    CHECK(info.at("normalized") == true);
    CHECK(info.at("spec_kind") == "tester");
}

TEST_CASE("run and label answer through the boundary") {
    Alg a;
    get_zoo("all-equal-8", a);
    int v = -1;
    REQUIRE(rla_algorithm_run(a.p, 0, "00000000", 5, &v) == RLA_OK);
    CHECK(v == 1);
    REQUIRE(rla_algorithm_run(a.p, 0, "01010101", 5, &v) == RLA_OK);
    CHECK(v == 0);
    REQUIRE(rla_algorithm_label(a.p, 0, "00000000", &v) == RLA_OK);
    CHECK(v == 1);
    REQUIRE(rla_algorithm_label(a.p, 0, "11110000", &v) == RLA_OK);
    CHECK(v == 2); // neither the property nor far from it

    Alg r;
    get_zoo("rep-code-6", r);
    REQUIRE(rla_algorithm_label(r.p, 0, "000000", &v) == RLA_OK);
    CHECK(v == 1);
    REQUIRE(rla_algorithm_label(r.p, 0, "010010", &v) == RLA_OK);
    CHECK(v == 0);
    REQUIRE(rla_algorithm_label(r.p, 0, "100111", &v) == RLA_OK);
    CHECK(v == 2);

    CHECK(rla_algorithm_run(a.p, 0, "0000000x", 5, &v) == RLA_ERR_PARSE);
    CHECK(rla_algorithm_run(a.p, 0, "00000007", 5, &v) == RLA_ERR_PARSE);
    CHECK(rla_algorithm_run(a.p, 0, nullptr, 5, &v) == RLA_ERR_PRECONDITION);
}

TEST_CASE("normalize flips the info flag") {
    Alg a;
    get_zoo("trivial-all-4", a);
    char* out = nullptr;
    REQUIRE(rla_algorithm_info(a.p, &out) == RLA_OK);
    CHECK(json::parse(take(out)).at("normalized") == false);

    Alg norm;
    REQUIRE(rla_normalize(a.p, &norm.p) == RLA_OK);
    REQUIRE(rla_algorithm_info(norm.p, &out) == RLA_OK);
    json info = json::parse(take(out));
    CHECK(info.at("normalized") == true);
    CHECK(info.at("n") == 4);

    int v = -1;
    REQUIRE(rla_algorithm_run(norm.p, 0, "0110", 9, &v) == RLA_OK);
    CHECK(v == 1);
}

TEST_CASE("prepare reports the achieved parameters") {
    Alg a;
    get_zoo("all-equal-8", a);
    Alg prepared;
    char* report = nullptr;
    REQUIRE(rla_prepare(a.p, 1, &prepared.p, &report) == RLA_OK);
    json rep = json::parse(take(report));
    CHECK(rep.at("amplified") == false);
    CHECK(rep.at("q_prime") == 2);
    CHECK(rep.at("sigma") == json{{"num", 1}, {"den", 16}});
    CHECK(rep.at("support") == 532);
    CHECK(rep.at("exhaustive") == true);

    char* out = nullptr;
    REQUIRE(rla_algorithm_info(prepared.p, &out) == RLA_OK);
    json info = json::parse(take(out));
    CHECK(info.at("support") == 532);
    CHECK(info.at("sigma") == json{{"num", 1}, {"den", 16}});

    Alg big;
    get_zoo("hadamard-4", big);
    Alg none;
    CHECK(rla_prepare(big.p, 1, &none.p, nullptr) == RLA_ERR_BUDGET);
    CHECK(none.p == nullptr);
}

TEST_CASE("preprocess honors the options JSON") {
    Alg a;
    get_zoo("all-equal-8", a);

    Sam s;
    REQUIRE(rla_preprocess(a.p, 0, 0, "{\"override_p\":0.5}", &s.p) == RLA_OK);
    char* out = nullptr;
    REQUIRE(rla_sampler_info(s.p, &out) == RLA_OK);
    json info = json::parse(take(out));
    CHECK(info.at("p") == 0.5);
    CHECK(info.at("overridden") == true);
    CHECK(info.at("p_clamped") == false);
    CHECK(info.at("n") == 8);
    CHECK(info.at("q") == 2);
    CHECK(info.at("support") == 7); // raw zoo algorithm, not the prepared one
    CHECK(info.at("z") == 0);
    CHECK(info.at("relaxed") == false);

    Sam bad;
    CHECK(rla_preprocess(a.p, 0, 0, "{", &bad.p) == RLA_ERR_PARSE);
    CHECK(std::string(rla_last_error()).find("bad options JSON") != std::string::npos);

    Alg t;
    get_zoo("trivial-all-4", t);
    Sam un;
    CHECK(rla_preprocess(t.p, 0, 0, nullptr, &un.p) == RLA_ERR_PRECONDITION);
}

TEST_CASE("sampler JSON round trips and replays identically") {
    Alg a;
    get_zoo("all-equal-8", a);
    Alg prepared;
    REQUIRE(rla_prepare(a.p, 1, &prepared.p, nullptr) == RLA_OK);

    Sam s;
    REQUIRE(rla_preprocess(prepared.p, 0, 0, nullptr, &s.p) == RLA_OK);
    char* out = nullptr;
    REQUIRE(rla_sampler_to_json(s.p, &out) == RLA_OK);
    std::string first = take(out);

    Sam s2;
    REQUIRE(rla_sampler_from_json(first.c_str(), &s2.p) == RLA_OK);
    REQUIRE(rla_sampler_to_json(s2.p, &out) == RLA_OK);
    CHECK(take(out) == first);

    REQUIRE(rla_sampler_run(s.p, "00000000", 42, &out) == RLA_OK);
    std::string run1 = take(out);
    REQUIRE(rla_sampler_run(s2.p, "00000000", 42, &out) == RLA_OK);
    CHECK(take(out) == run1);

    json r = json::parse(run1);
    CHECK(r.at("output") == 1);
    CHECK(r.at("aborted") == false);
    CHECK(r.at("samplings") == 1);

    Sam bad;
    CHECK(rla_sampler_from_json("[1,2", &bad.p) == RLA_ERR_PARSE);
}

TEST_CASE("shared runs return one result per sampler") {
    Alg a;
    get_zoo("all-equal-8", a);
    Alg prepared;
    REQUIRE(rla_prepare(a.p, 1, &prepared.p, nullptr) == RLA_OK);
    Sam s;
    REQUIRE(rla_preprocess(prepared.p, 0, 0, nullptr, &s.p) == RLA_OK);

    const rla_sampler* pair[2] = {s.p, s.p};
    char* out = nullptr;
    REQUIRE(rla_run_shared(pair, 2, "11111111", 7, &out) == RLA_OK);
    json multi = json::parse(take(out));
    CHECK(multi.at("aborted") == false);
    CHECK(multi.at("samplings") == 1);
    REQUIRE(multi.at("results").size() == 2);
    for (const json& r : multi.at("results")) {
        CHECK(r.at("output") == 1);
        CHECK(r.at("samplings") == 0); // the shared step is counted once, above
    }

    CHECK(rla_run_shared(nullptr, 2, "11111111", 7, &out) == RLA_ERR_PRECONDITION);
    CHECK(rla_run_shared(pair, 0, "11111111", 7, &out) == RLA_ERR_PRECONDITION);
}

TEST_CASE("global decode recovers both message bits") {
    Alg a;
    get_zoo("rep3-relaxed-2", a);
    Alg prepared;
    REQUIRE(rla_prepare(a.p, 1, &prepared.p, nullptr) == RLA_OK);

    Sam s0, s1;
    REQUIRE(rla_preprocess(prepared.p, 0, 1, nullptr, &s0.p) == RLA_OK);
    REQUIRE(rla_preprocess(prepared.p, 1, 1, nullptr, &s1.p) == RLA_OK);

    const rla_sampler* both[2] = {s0.p, s1.p};
    char* out = nullptr;
    REQUIRE(rla_global_decode(both, 2, "000111", 3, &out) == RLA_OK);
    json res = json::parse(take(out));
    CHECK(res.at("outputs") == json::array({0, 1}));
    CHECK(res.at("aborted") == false);
    CHECK(res.at("samplings") == 1);
}

TEST_CASE("partition JSON carries the checks block") {
    const char* coll = "{\"format\":1,\"n\":4,\"q\":2,\"sets\":[[0,1],[0,2],[0,3]]}";
    char* out = nullptr;
    REQUIRE(rla_partition_json(coll, &out) == RLA_OK);
    json part = json::parse(take(out));
    CHECK(part.at("n") == 4);
    CHECK(part.at("q") == 2);
    REQUIRE(part.contains("kernels"));
    CHECK(part.at("kernels").size() == 3); // petal sizes 0..q
    json checks = part.at("checks");
    CHECK(checks.at("invariants") == true);
    CHECK(checks.at("overlap") == true);
    CHECK(checks.at("overlap_max").is_array()); // one bound per petal size

    CHECK(rla_partition_json("not json", &out) == RLA_ERR_PARSE);
    CHECK(rla_partition_json("{\"format\":9}", &out) == RLA_ERR_PARSE);
}

TEST_CASE("verify instance reports pass through the boundary") {
    char* out = nullptr;
    REQUIRE(rla_verify_instance("rep-code-6", &out) == RLA_OK);
    json rep = json::parse(take(out));
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("exhaustive") == true);
    CHECK(rep.at("instance") == "rep-code-6");
    CHECK(rep.at("normalize_equivalence") == true);
    CHECK(rep.at("partition_invariants") == true);
    CHECK(rep.at("robustness").at("pass0") == true);
    CHECK(rep.at("robustness").at("pass1") == true);

    CHECK(rla_verify_instance("nope", &out) == RLA_ERR_PRECONDITION);
}

TEST_CASE("wilson intervals cross the boundary") {
    double lo = -1, hi = -1;
    REQUIRE(rla_wilson(50, 100, 1.96, &lo, &hi) == RLA_OK);
    CHECK(lo == doctest::Approx(0.4038).epsilon(0.01));
    CHECK(hi == doctest::Approx(0.5962).epsilon(0.01));
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);

    REQUIRE(rla_wilson(0, 10, 2.0, &lo, &hi) == RLA_OK);
    CHECK(lo >= 0.0);
    CHECK(lo < 1e-12);
    CHECK(hi > 0.28);
    CHECK(hi < 0.29);

    CHECK(rla_wilson(1, 0, 1.96, &lo, &hi) == RLA_ERR_PRECONDITION);
    CHECK(rla_wilson(1, 2, 1.96, nullptr, &hi) == RLA_ERR_PRECONDITION);
}
