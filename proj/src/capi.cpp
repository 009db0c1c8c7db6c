#include "rla.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "rla/core.hpp"
#include "rla/daisy.hpp"
#include "rla/json_io.hpp"
#include "rla/oracle.hpp"
#include "rla/sampler.hpp"
#include "rla/transforms.hpp"
#include "rla/zoo.hpp"

using nlohmann::json;

struct rla_algorithm {
    rla::LocalAlgorithm alg;
};

struct rla_sampler {
    rla::PreparedSampler pre;
};

namespace {

thread_local std::string g_last_error;

int code_of(const rla::Error& e) { return static_cast<int>(e.code()); }

template <typename Fn> int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RLA_OK;
    } catch (const rla::Error& e) {
        g_last_error = e.what();
        return code_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RLA_ERR_RUN;
    }
}

char* copy_out(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) rla::fail(rla::Errc::run, "out of memory");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(bool cond, const char* what) {
    if (!cond) rla::fail(rla::Errc::precondition, what);
}

rla::Word parse_word(const char* word, const rla::Alphabet& alphabet) {
    need(word != nullptr, "word is null");
    return rla::word_from_string(word, alphabet);
}

json info_of(const rla::LocalAlgorithm& alg) {
    std::string kind = "none";
    if (alg.spec) kind = json::parse(alg.spec->descriptor).value("kind", "none");
    return json{{"name", alg.name},
                {"n", alg.n},
                {"alphabet", alg.alphabet.size},
                {"q", alg.q},
                {"z_count", alg.z_count()},
                {"support", alg.support_size()},
                {"sigma", rla::rational_to_json(alg.sigma)},
                {"rho0", rla::rational_to_json(alg.rho0)},
                {"rho1", rla::rational_to_json(alg.rho1)},
                {"relaxed", alg.relaxed},
                {"normalized", alg.normalized},
                {"spec_kind", kind}};
}

json multi_to_json(const rla::MultiRunResult& multi) {
    json results = json::array();
    for (const auto& r : multi.results) results.push_back(rla::run_result_to_json(r));
    return json{{"aborted", multi.aborted},
                {"samplings", multi.samplings},
                {"work", multi.work},
                {"results", std::move(results)}};
}

} // namespace

extern "C" {

const char* rla_version(void) { return rla::library_version(); }

const char* rla_last_error(void) { return g_last_error.c_str(); }

void rla_string_free(char* s) { std::free(s); }

int rla_zoo_list(char** json_out) {
    return guarded([&] {
        need(json_out != nullptr, "output pointer is null");
        json list = json::array();
        for (const std::string& name : rla::zoo_names()) {
            rla::ZooInstance inst = rla::zoo_get(name);
            json row = info_of(inst.alg);
            row["notes"] = inst.notes;
            list.push_back(std::move(row));
        }
        *json_out = copy_out(list.dump());
    });
}

int rla_zoo_get(const char* name, rla_algorithm** out) {
    return guarded([&] {
        need(name != nullptr && out != nullptr, "null argument");
        *out = new rla_algorithm{rla::zoo_get(name).alg};
    });
}

int rla_algorithm_from_json(const char* text, rla_algorithm** out) {
    return guarded([&] {
        need(text != nullptr && out != nullptr, "null argument");
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            rla::fail(rla::Errc::parse, std::string("bad JSON: ") + e.what());
        }
        *out = new rla_algorithm{rla::algorithm_from_json(j)};
    });
}

int rla_algorithm_to_json(const rla_algorithm* alg, char** json_out) {
    return guarded([&] {
        need(alg != nullptr && json_out != nullptr, "null argument");
        *json_out = copy_out(rla::algorithm_to_json(alg->alg).dump());
    });
}

int rla_algorithm_info(const rla_algorithm* alg, char** json_out) {
    return guarded([&] {
        need(alg != nullptr && json_out != nullptr, "null argument");
        *json_out = copy_out(info_of(alg->alg).dump());
    });
}

int rla_algorithm_run(const rla_algorithm* alg, uint32_t z, const char* word, uint64_t seed,
                      int* out) {
    return guarded([&] {
        need(alg != nullptr && out != nullptr, "null argument");
        rla::Word x = parse_word(word, alg->alg.alphabet);
        *out = static_cast<int>(rla::run_algorithm(alg->alg, z, x, seed));
    });
}

int rla_algorithm_label(const rla_algorithm* alg, uint32_t z, const char* word, int* label) {
    return guarded([&] {
        need(alg != nullptr && label != nullptr, "null argument");
        need(alg->alg.spec != nullptr, "algorithm carries no problem spec");
        rla::Word x = parse_word(word, alg->alg.alphabet);
        *label = static_cast<int>(rla::brute_force_label(*alg->alg.spec, z, x));
    });
}

int rla_normalize(const rla_algorithm* alg, rla_algorithm** out) {
    return guarded([&] {
        need(alg != nullptr && out != nullptr, "null argument");
        *out = new rla_algorithm{rla::normalize(alg->alg)};
    });
}

int rla_prepare(const rla_algorithm* alg, uint64_t seed, rla_algorithm** out,
                char** report_json) {
    return guarded([&] {
        need(alg != nullptr && out != nullptr, "null argument");
        rla::PrepareResult res = rla::prepare(alg->alg, seed);
        if (report_json) *report_json = copy_out(rla::prepare_report_to_json(res.report).dump());
        *out = new rla_algorithm{std::move(res.alg)};
    });
}

void rla_algorithm_free(rla_algorithm* alg) { delete alg; }

int rla_preprocess(const rla_algorithm* alg, uint32_t z, int relaxed, const char* options_json,
                   rla_sampler** out) {
    return guarded([&] {
        need(alg != nullptr && out != nullptr, "null argument");
        rla::PreprocessOptions opts;
        if (options_json) {
            json j;
            try {
                j = json::parse(options_json);
            } catch (const json::exception& e) {
                rla::fail(rla::Errc::parse, std::string("bad options JSON: ") + e.what());
            }
            if (j.contains("override_p")) opts.override_p = j.at("override_p").get<double>();
            if (j.contains("override_gamma"))
                opts.override_gamma = j.at("override_gamma").get<double>();
            if (j.contains("enum_budget")) opts.enum_budget = j.at("enum_budget").get<uint64_t>();
        }
        *out = new rla_sampler{rla::preprocess(alg->alg, z, relaxed != 0, opts)};
    });
}

int rla_sampler_to_json(const rla_sampler* s, char** json_out) {
    return guarded([&] {
        need(s != nullptr && json_out != nullptr, "null argument");
        *json_out = copy_out(rla::sampler_to_json(s->pre).dump());
    });
}

int rla_sampler_from_json(const char* text, rla_sampler** out) {
    return guarded([&] {
        need(text != nullptr && out != nullptr, "null argument");
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            rla::fail(rla::Errc::parse, std::string("bad JSON: ") + e.what());
        }
        *out = new rla_sampler{rla::sampler_from_json(j)};
    });
}

int rla_sampler_info(const rla_sampler* s, char** json_out) {
    return guarded([&] {
        need(s != nullptr && json_out != nullptr, "null argument");
        const rla::SamplerConfig& c = s->pre.config;
        json j{{"instance", s->pre.instance},
               {"z", s->pre.z},
               {"relaxed", s->pre.relaxed},
               {"n", c.n},
               {"q", c.q},
               {"alphabet", c.alphabet.size},
               {"support", c.support},
               {"gamma", c.gamma},
               {"p", c.p},
               {"p_clamped", c.p_clamped},
               {"overridden", c.overridden},
               {"tau_base", rla::rational_to_json(c.tau_base)},
               {"alpha1", c.alpha1},
               {"alpha0", c.alpha0}};
        *json_out = copy_out(j.dump());
    });
}

int rla_sampler_run(const rla_sampler* s, const char* word, uint64_t seed, char** result_json) {
    return guarded([&] {
        need(s != nullptr && result_json != nullptr, "null argument");
        rla::Word x = parse_word(word, s->pre.config.alphabet);
        rla::RunResult r = s->pre.relaxed ? rla::run_relaxed(s->pre, x, seed)
                                          : rla::run_sample_based(s->pre, x, seed);
        *result_json = copy_out(rla::run_result_to_json(r).dump());
    });
}

int rla_run_shared(const rla_sampler* const* samplers, size_t count, const char* word,
                   uint64_t seed, char** results_json) {
    return guarded([&] {
        need(samplers != nullptr && results_json != nullptr && count > 0, "null argument");
        std::vector<const rla::PreparedSampler*> ptrs;
        for (size_t i = 0; i < count; ++i) {
            need(samplers[i] != nullptr, "null sampler");
            ptrs.push_back(&samplers[i]->pre);
        }
        rla::Word x = parse_word(word, ptrs[0]->config.alphabet);
        *results_json = copy_out(multi_to_json(rla::shared_sample_multirun(ptrs, x, seed)).dump());
    });
}

int rla_global_decode(const rla_sampler* const* samplers, size_t count, const char* word,
                      uint64_t seed, char** result_json) {
    return guarded([&] {
        need(samplers != nullptr && result_json != nullptr && count > 0, "null argument");
        std::vector<rla::PreparedSampler> pres;
        for (size_t i = 0; i < count; ++i) {
            need(samplers[i] != nullptr, "null sampler");
            pres.push_back(samplers[i]->pre);
        }
        rla::Word x = parse_word(word, pres[0].config.alphabet);
        rla::GlobalDecodeResult res = rla::global_decode(pres, x, seed);
        json outputs = json::array();
        for (rla::Out o : res.outputs) outputs.push_back(static_cast<int>(o));
        json j{{"outputs", std::move(outputs)},
               {"aborted", res.aborted},
               {"samplings", res.samplings},
               {"work", res.work}};
        *result_json = copy_out(j.dump());
    });
}

void rla_sampler_free(rla_sampler* s) { delete s; }

int rla_partition_json(const char* sets_json, char** json_out) {
    return guarded([&] {
        need(sets_json != nullptr && json_out != nullptr, "null argument");
        json j;
        try {
            j = json::parse(sets_json);
        } catch (const json::exception& e) {
            rla::fail(rla::Errc::parse, std::string("bad JSON: ") + e.what());
        }
        rla::SetCollection coll = rla::set_collection_from_json(j);
        rla::DaisyPartition part = rla::daisy_partition(coll.sets, coll.n, coll.q);
        rla::DaisyCheckReport inv = rla::check_partition_invariants(coll.sets, part);
        rla::DaisyCheckReport ovl = rla::check_petal_overlap_bound(coll.sets, part);
        json out = rla::partition_to_json(part);
        out["checks"] = json{{"invariants", inv.ok},
                             {"invariants_detail", inv.detail},
                             {"overlap", ovl.ok},
                             {"overlap_detail", ovl.detail},
                             {"overlap_max", ovl.overlap_max}};
        *json_out = copy_out(out.dump());
    });
}

int rla_verify_instance(const char* name, char** report_json) {
    return guarded([&] {
        need(name != nullptr && report_json != nullptr, "null argument");
        rla::ZooInstance inst = rla::zoo_get(name);
        rla::InstanceVerification v = rla::verify_instance(inst);
        json j = json::parse(v.report_json);
        j["pass"] = v.pass;
        j["exhaustive"] = v.exhaustive;
        j["instance"] = inst.name;
        *report_json = copy_out(j.dump());
    });
}

int rla_wilson(uint64_t successes, uint64_t trials, double z, double* lo, double* hi) {
    return guarded([&] {
        need(lo != nullptr && hi != nullptr, "null argument");
        rla::Interval iv = rla::wilson_interval(successes, trials, z);
        *lo = iv.lo;
        *hi = iv.hi;
    });
}

} // extern "C"
