// Command-line front end over the C API.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rla.h"

namespace {

using nlohmann::json;

constexpr double kWilsonZ99 = 2.5758293035489004;

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

int exit_code_of(int status) {
    switch (status) {
        case RLA_OK: return 0;
        case RLA_ERR_PARSE:
        case RLA_ERR_STRUCTURAL: return 2;
        case RLA_ERR_BUDGET: return 3;
        case RLA_ERR_DERAND: return 4;
        default: return 1; // run, precondition, invariant
    }
}

[[noreturn]] void die(int status) {
    std::cerr << "error: " << rla_last_error() << "\n";
    std::exit(exit_code_of(status));
}

void check(int status) {
    if (status != RLA_OK) die(status);
}

std::string take(char* s) {
    std::string out = s ? s : "";
    rla_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(1);
    }
    out << content;
}

struct Overrides {
    std::optional<double> p, gamma;
    std::optional<uint64_t> budget;
};

uint64_t env_budget(std::optional<uint64_t> flag) {
    if (flag) return *flag;
    if (const char* e = std::getenv("RLA_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        std::cerr << "error: RLA_BUDGET must be a positive integer\n";
        std::exit(2);
    }
    return 0; // library default
}

std::vector<std::string> all_words(uint32_t n, uint32_t alphabet) {
    std::vector<std::string> out;
    std::string w(n, '0');
    for (;;) {
        out.push_back(w);
        int i = static_cast<int>(n) - 1;
        while (i >= 0) {
            if (static_cast<uint32_t>(++w[i] - '0') < alphabet) break;
            w[i] = '0';
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

rla_algorithm* load_algorithm(const std::string& name, const std::string& in_path) {
    rla_algorithm* alg = nullptr;
    if (!name.empty()) {
        check(rla_zoo_get(name.c_str(), &alg));
    } else if (!in_path.empty()) {
        check(rla_algorithm_from_json(read_file(in_path).c_str(), &alg));
    } else {
        std::cerr << "error: give an instance name or --in\n";
        std::exit(2);
    }
    return alg;
}

// Full pipeline: prepare the algorithm, then preprocess it into a sampler.
rla_sampler* build_sampler(const std::string& name, const std::string& in_path, uint32_t z,
                           bool relaxed_flag, uint64_t seed, const Overrides& ov,
                           std::string* prepare_report) {
    rla_algorithm* raw = load_algorithm(name, in_path);
    char* info_c = nullptr;
    check(rla_algorithm_info(raw, &info_c));
    const bool relaxed = relaxed_flag || json::parse(take(info_c)).at("relaxed").get<bool>();

    rla_algorithm* prepared = nullptr;
    char* rep_c = nullptr;
    check(rla_prepare(raw, seed, &prepared, prepare_report ? &rep_c : nullptr));
    if (prepare_report) *prepare_report = take(rep_c);

    json opts = json::object();
    if (ov.p) opts["override_p"] = *ov.p;
    if (ov.gamma) opts["override_gamma"] = *ov.gamma;
    if (uint64_t b = env_budget(ov.budget)) opts["enum_budget"] = b;
    rla_sampler* sampler = nullptr;
    check(rla_preprocess(prepared, z, relaxed ? 1 : 0, opts.dump().c_str(), &sampler));
    rla_algorithm_free(prepared);
    rla_algorithm_free(raw);
    return sampler;
}

// ----- zoo -----

int cmd_zoo_list(bool as_json) {
    char* listing = nullptr;
    check(rla_zoo_list(&listing));
    const std::string text = take(listing);
    if (as_json) {
        std::cout << text << "\n";
        return 0;
    }
    json rows = json::parse(text);
    std::printf("%-16s %4s %3s %3s %8s %8s %-8s %s\n", "name", "n", "q", "z", "support",
                "sigma", "relaxed", "notes");
    for (const auto& r : rows) {
        const auto& sig = r.at("sigma");
        std::string sigma =
            std::to_string(sig.at("num").get<long long>()) + "/" +
            std::to_string(sig.at("den").get<long long>());
        std::printf("%-16s %4u %3u %3u %8llu %8s %-8s %s\n",
                    r.at("name").get<std::string>().c_str(), r.at("n").get<uint32_t>(),
                    r.at("q").get<uint32_t>(), r.at("z_count").get<uint32_t>(),
                    static_cast<unsigned long long>(r.at("support").get<uint64_t>()),
                    sigma.c_str(), r.at("relaxed").get<bool>() ? "yes" : "no",
                    r.at("notes").get<std::string>().c_str());
    }
    return 0;
}

// ----- partition -----

int cmd_partition(const std::string& in_path, const std::string& out_path) {
    char* result = nullptr;
    check(rla_partition_json(read_file(in_path).c_str(), &result));
    const std::string text = take(result);
    write_output(out_path, text);
    json j = json::parse(text);
    if (!j.at("checks").at("invariants").get<bool>() ||
        !j.at("checks").at("overlap").get<bool>()) {
        std::cerr << "error: partition failed its own invariants\n";
        return 1;
    }
    return 0;
}

// ----- transform -----

struct TransformArgs {
    std::string name, in_path, out_path, report_path;
    bool normalize_only = false;
    uint32_t z = 0;
    bool relaxed = false;
    uint64_t seed = 1;
    Overrides ov;
};

int cmd_transform(const TransformArgs& a) {
    if (a.normalize_only) {
        rla_algorithm* alg = load_algorithm(a.name, a.in_path);
        rla_algorithm* result = nullptr;
        check(rla_normalize(alg, &result));
        char* out_json = nullptr;
        check(rla_algorithm_to_json(result, &out_json));
        write_output(a.out_path, take(out_json));
        rla_algorithm_free(result);
        rla_algorithm_free(alg);
        return 0;
    }

    std::string prep_report;
    rla_sampler* sampler =
        build_sampler(a.name, a.in_path, a.z, a.relaxed, a.seed, a.ov, &prep_report);
    char* sampler_c = nullptr;
    check(rla_sampler_to_json(sampler, &sampler_c));
    const std::string sampler_json = take(sampler_c);
    write_output(a.out_path, sampler_json);

    char* info_c = nullptr;
    check(rla_sampler_info(sampler, &info_c));
    json report{{"version", rla_version()},
                {"seed", a.seed},
                {"config_hash", hex64(fnv1a64(sampler_json))},
                {"preparation", json::parse(prep_report)},
                {"sampler", json::parse(take(info_c))}};
    const std::string report_text = report.dump();
    if (a.report_path.empty()) std::cerr << report_text << "\n";
    else write_output(a.report_path, report_text);
    rla_sampler_free(sampler);
    return 0;
}

// ----- verify -----

int cmd_verify(const std::string& name, const std::string& out_path) {
    char* rep = nullptr;
    check(rla_verify_instance(name.c_str(), &rep));
    const std::string text = take(rep);
    write_output(out_path, text);
    json j = json::parse(text);
    if (!j.at("exhaustive").get<bool>())
        std::cerr << "warning: verification was not exhaustive\n";
    if (!j.at("pass").get<bool>()) {
        std::cerr << "error: verification failed\n";
        return 1;
    }
    std::cerr << "verified: " << name << "\n";
    return 0;
}

// ----- run -----

struct RunArgs {
    std::string name, in_path, sampler_path;
    uint32_t z = 0;
    bool relaxed = false;
    std::vector<std::string> words;
    std::string words_file;
    bool all_domain = false;
    uint64_t seed = 1;
    uint64_t seeds = 1;
    Overrides ov;
    std::string out_path;
    std::string format = "csv";
};

int cmd_run(const RunArgs& a) {
    rla_sampler* sampler = nullptr;
    if (!a.sampler_path.empty()) {
        check(rla_sampler_from_json(read_file(a.sampler_path).c_str(), &sampler));
    } else {
        sampler = build_sampler(a.name, a.in_path, a.z, a.relaxed, a.seed, a.ov, nullptr);
    }

    char* cfg_c = nullptr;
    check(rla_sampler_to_json(sampler, &cfg_c));
    const std::string config_hash = hex64(fnv1a64(take(cfg_c)));
    char* info_c = nullptr;
    check(rla_sampler_info(sampler, &info_c));
    json info = json::parse(take(info_c));
    const std::string instance = info.at("instance").get<std::string>();
    const double p = info.at("p").get<double>();

    std::vector<std::string> words = a.words;
    if (!a.words_file.empty()) {
        std::istringstream in(read_file(a.words_file));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#') words.push_back(line);
        }
    }
    if (a.all_domain) {
        auto domain = all_words(info.at("n").get<uint32_t>(), info.at("alphabet").get<uint32_t>());
        words.insert(words.end(), domain.begin(), domain.end());
    }
    if (words.empty()) {
        std::cerr << "error: no input words (use --word, --words-file or --all-domain)\n";
        return 2;
    }

    std::ostringstream out;
    const char* version = rla_version();
    if (a.format == "csv") {
        out << "# version=" << version << "\n# instance=" << instance
            << "\n# config_hash=" << config_hash << "\n# seed=" << a.seed << "\n# p=" << p
            << "\n";
        out << "instance,seed,p,output,aborted,triggering_j,votes,elapsed\n";
    } else {
        json header{{"kind", "header"}, {"version", version},      {"instance", instance},
                    {"config_hash", config_hash}, {"seed", a.seed}, {"p", p}};
        out << header.dump() << "\n";
    }

    uint64_t ones = 0, zeros = 0, bots = 0, aborted = 0, total = 0;
    for (const std::string& w : words) {
        if (a.format == "csv" && words.size() > 1) out << "# word=" << w << "\n";
        for (uint64_t i = 0; i < a.seeds; ++i) {
            const uint64_t run_seed = a.seed + i;
            char* res_c = nullptr;
            check(rla_sampler_run(sampler, w.c_str(), run_seed, &res_c));
            json r = json::parse(take(res_c));
            const int output = r.at("output").get<int>();
            const bool was_aborted = r.at("aborted").get<bool>();
            ++total;
            if (was_aborted) ++aborted;
            if (output == 0) ++zeros;
            else if (output == 1) ++ones;
            else ++bots;
            if (a.format == "csv") {
                out << instance << "," << run_seed << "," << p << "," << output << ","
                    << (was_aborted ? 1 : 0) << "," << r.at("triggering_j").get<int64_t>() << ","
                    << r.at("votes").get<uint64_t>() << "," << r.at("work").get<uint64_t>()
                    << "\n";
            } else {
                r["kind"] = "row";
                r["word"] = w;
                r["instance"] = instance;
                r["elapsed"] = r.at("work");
                out << r.dump() << "\n";
            }
        }
    }
    write_output(a.out_path, out.str());

    double lo = 0, hi = 0;
    check(rla_wilson(ones, total, kWilsonZ99, &lo, &hi));
    std::cerr << "runs=" << total << " ones=" << ones << " zeros=" << zeros << " bots=" << bots
              << " aborted=" << aborted << "; P[output=1] within [" << lo << ", " << hi
              << "] (Wilson 99%)\n";
    rla_sampler_free(sampler);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sample-based execution toolkit for robust local algorithms"};
    app.require_subcommand(1);

    // zoo
    auto* zoo = app.add_subcommand("zoo", "built-in instances");
    zoo->require_subcommand(1);
    auto* zoo_list = zoo->add_subcommand("list", "list shipped instances");
    bool zoo_json = false;
    zoo_list->add_flag("--json", zoo_json, "raw JSON instead of a table");

    // partition
    auto* partition = app.add_subcommand("partition", "daisy-partition a set collection");
    std::string part_in, part_out;
    partition->add_option("--in", part_in, "input JSON ('-' for stdin)")->required();
    partition->add_option("--out", part_out, "output path (default stdout)");

    // transform
    auto* transform =
        app.add_subcommand("transform", "prepare an algorithm and persist its sampler");
    TransformArgs ta;
    double t_p = -1, t_gamma = -1;
    int64_t t_budget = -1;
    transform->add_option("name", ta.name, "zoo instance name");
    transform->add_option("--in", ta.in_path, "algorithm JSON path");
    transform->add_flag("--normalize", ta.normalize_only, "normalize only, emit algorithm JSON");
    transform->add_option("--seed", ta.seed, "preparation seed");
    transform->add_option("--z", ta.z, "explicit input index for preprocessing");
    transform->add_flag("--relaxed", ta.relaxed, "force the relaxed execution");
    transform->add_option("--override-p", t_p, "replace the sampling probability");
    transform->add_option("--override-gamma", t_gamma, "replace gamma");
    transform->add_option("--budget", t_budget, "enumeration budget (or env RLA_BUDGET)");
    transform->add_option("--out", ta.out_path, "sampler output path (default stdout)");
    transform->add_option("--report", ta.report_path, "write the preparation report here");

    // run
    auto* run = app.add_subcommand("run", "sample-based execution");
    RunArgs ra;
    double run_p = -1, run_gamma = -1;
    int64_t run_budget = -1;
    run->add_option("name", ra.name, "zoo instance name");
    run->add_option("--in", ra.in_path, "algorithm JSON path");
    run->add_option("--sampler", ra.sampler_path, "prepared sampler JSON path");
    run->add_option("--z", ra.z, "explicit input index");
    run->add_flag("--relaxed", ra.relaxed, "force the relaxed execution");
    run->add_option("--word", ra.words, "input word (repeatable)");
    run->add_option("--words-file", ra.words_file, "file with one word per line");
    run->add_flag("--all-domain", ra.all_domain, "run every word of Sigma^n");
    run->add_option("--seed", ra.seed, "base seed");
    run->add_option("--seeds", ra.seeds, "number of consecutive seeds per word");
    run->add_option("--override-p", run_p, "replace the sampling probability");
    run->add_option("--override-gamma", run_gamma, "replace gamma");
    run->add_option("--budget", run_budget, "enumeration budget (or env RLA_BUDGET)");
    run->add_option("--out", ra.out_path, "output path (default stdout)");
    run->add_option("--format", ra.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    // verify
    auto* verify = app.add_subcommand("verify", "run an instance's verification suites");
    std::string ver_name, ver_out;
    verify->add_option("name", ver_name, "zoo instance name")->required();
    verify->add_option("--out", ver_out, "report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (zoo_list->parsed()) return cmd_zoo_list(zoo_json);
    if (partition->parsed()) return cmd_partition(part_in, part_out);
    if (transform->parsed()) {
        if (t_p >= 0) ta.ov.p = t_p;
        if (t_gamma >= 0) ta.ov.gamma = t_gamma;
        if (t_budget >= 0) ta.ov.budget = static_cast<uint64_t>(t_budget);
        return cmd_transform(ta);
    }
    if (run->parsed()) {
        if (run_p >= 0) ra.ov.p = run_p;
        if (run_gamma >= 0) ra.ov.gamma = run_gamma;
        if (run_budget >= 0) ra.ov.budget = static_cast<uint64_t>(run_budget);
        return cmd_run(ra);
    }
    if (verify->parsed()) return cmd_verify(ver_name, ver_out);
    return 0;
}
