// Drives the installed binary as a subprocess; the harness passes its path in
// RLA_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* bin = std::getenv("RLA_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = env_prefix + std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    CliResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = std::move(out);
    return res;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("zoo list prints a table and raw JSON") {
    CliResult table = run_cli("zoo list");
    CHECK(table.code == 0);
    std::vector<std::string> lines = lines_of(table.out);
    REQUIRE(!lines.empty());
    CHECK(lines[0].rfind("name", 0) == 0);
    CHECK(table.out.find("all-equal-8") != std::string::npos);
    CHECK(table.out.find("rep3-relaxed-5") != std::string::npos);

    CliResult raw = run_cli("zoo list --json");
    CHECK(raw.code == 0);
    json list = json::parse(raw.out);
    REQUIRE(list.is_array());
    CHECK(list.size() == 8);
}

TEST_CASE("partition reads a collection file and reports its checks") {
    std::string path = write_temp("rla_cli_coll.json",
                                  "{\"format\":1,\"n\":4,\"q\":2,\"sets\":[[0,1],[0,2],[0,3]]}");
    CliResult res = run_cli("partition --in " + path);
    CHECK(res.code == 0);
    json part = json::parse(res.out);
    CHECK(part.at("n") == 4);
    CHECK(part.at("kernels").size() == 3);
    CHECK(part.at("daisies")[1].size() == 3); // every set lands in the 1-petal daisy
    CHECK(part.at("checks").at("invariants") == true);
    CHECK(part.at("checks").at("overlap") == true);

    std::string bad = write_temp("rla_cli_bad.json", "not json");
    CHECK(run_cli("partition --in " + bad).code == 2);
    CHECK(run_cli("partition --in /tmp/rla_cli_missing_file.json").code == 2);
}

TEST_CASE("transform writes a sampler and a preparation report") {
    CliResult res = run_cli("transform all-equal-8 --seed 1 --out /tmp/rla_cli_sampler.json "
                            "--report /tmp/rla_cli_report.json");
    CHECK(res.code == 0);

    json sampler = json::parse(slurp("/tmp/rla_cli_sampler.json"));
    CHECK(sampler.is_object());

    json report = json::parse(slurp("/tmp/rla_cli_report.json"));
    CHECK(report.at("version") == "0.1.0");
    CHECK(report.at("seed") == 1);
    CHECK(report.at("config_hash").get<std::string>().size() == 16);
    CHECK(report.at("preparation").at("support") == 532);
    CHECK(report.at("preparation").at("amplified") == false);
    CHECK(report.at("sampler").at("p") == 1.0);
    CHECK(report.at("sampler").at("q") == 2);
}

TEST_CASE("transform can stop after normalization") {
    CliResult res = run_cli("transform trivial-all-4 --normalize");
    CHECK(res.code == 0);
    CHECK(json::parse(res.out).is_object());
}

TEST_CASE("run emits deterministic CSV") {
    const std::string args = "run all-equal-8 --word 00000000 --seed 5";
    CliResult first = run_cli(args);
    CHECK(first.code == 0);
    std::vector<std::string> lines = lines_of(first.out);
    REQUIRE(lines.size() >= 7);
    CHECK(lines[0] == "# version=0.1.0");
    CHECK(lines[1] == "# instance=all-equal-8");
    CHECK(lines[5] == "instance,seed,p,output,aborted,triggering_j,votes,elapsed");
    CHECK(lines[6] == "all-equal-8,5,1,1,0,2,532,14");

    CliResult second = run_cli(args);
    CHECK(second.out == first.out); // replayable byte for byte
}

TEST_CASE("run emits jsonl with a header object") {
    CliResult res = run_cli("run all-equal-8 --word 01010101 --seed 2 --format jsonl");
    CHECK(res.code == 0);
    std::vector<std::string> lines = lines_of(res.out);
    REQUIRE(lines.size() == 2);
    json header = json::parse(lines[0]);
    CHECK(header.at("kind") == "header");
    CHECK(header.at("instance") == "all-equal-8");
    json row = json::parse(lines[1]);
    CHECK(row.at("kind") == "row");
    CHECK(row.at("word") == "01010101");
    CHECK(row.at("output") == 0);
    CHECK(row.at("elapsed") == row.at("work"));
}

TEST_CASE("run replays a persisted sampler byte for byte") {
    CHECK(run_cli("transform all-equal-8 --seed 1 --out /tmp/rla_cli_replay.json").code == 0);
    // The direct run prepares with the same base seed the transform used.
    CliResult direct = run_cli("run all-equal-8 --word 01010101 --seed 1");
    CliResult replay = run_cli("run --sampler /tmp/rla_cli_replay.json --word 01010101 --seed 1");
    CHECK(direct.code == 0);
    CHECK(replay.code == 0);
    CHECK(direct.out == replay.out);
}

TEST_CASE("exit codes surface the error classes") {
    CHECK(run_cli("transform hadamard-4").code == 3);
    CHECK(run_cli("run hadamard-4 --word 0000000000000000").code == 3);
    CHECK(run_cli("run nope --word 0").code == 1);
    CHECK(run_cli("run all-equal-8 --word 00000000", "RLA_BUDGET=abc ").code == 2);
    CHECK(run_cli("run --in /tmp/rla_cli_missing_file.json --word 0").code == 2);
    CHECK(run_cli("run all-equal-8").code == 2); // no input words
}

TEST_CASE("all-domain sweeps every word of the domain") {
    CliResult res = run_cli("run trivial-all-4 --all-domain --seeds 2 --seed 3");
    CHECK(res.code == 0);
    size_t data_rows = 0;
    bool all_ones = true;
    for (const std::string& line : lines_of(res.out)) {
        if (line.empty() || line[0] == '#' || line.rfind("instance,", 0) == 0) continue;
        ++data_rows;
        // output sits in the fourth CSV field
        std::istringstream in(line);
        std::string field;
        for (int i = 0; i < 4; ++i) std::getline(in, field, ',');
        if (field != "1") all_ones = false;
    }
    CHECK(data_rows == 32); // 16 words, two seeds each
    CHECK(all_ones);
}

TEST_CASE("verify reports a passing instance") {
    CliResult res = run_cli("verify rep-code-6 --out /tmp/rla_cli_verify.json");
    CHECK(res.code == 0);
    json rep = json::parse(slurp("/tmp/rla_cli_verify.json"));
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("instance") == "rep-code-6");
}
