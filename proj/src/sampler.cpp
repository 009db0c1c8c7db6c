#include "rla/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rla/params.hpp"

namespace rla {

namespace {

using u128 = unsigned __int128;

constexpr uint64_t kSampleTag = 0x73616d70ULL; // "samp"

u128 sat_pow(u128 base, uint64_t exp) {
    u128 r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (r > (~static_cast<u128>(0)) / base) return ~static_cast<u128>(0);
        r *= base;
    }
    return r;
}

SideData make_side(const std::map<std::pair<std::vector<Coord>, std::vector<Symbol>>, uint64_t>& raw,
                   const std::map<std::vector<Coord>, uint32_t>& set_ids,
                   const std::vector<std::vector<Coord>>& distinct, const DaisyPartition& part,
                   uint32_t q) {
    SideData side;
    side.distinct_sets = distinct;
    side.partition = part;
    std::vector<uint32_t> daisy_of(distinct.size(), 0);
    for (uint32_t j = 0; j <= q; ++j)
        for (uint32_t m : part.daisies[j]) daisy_of[m] = j;

    side.groups_by_daisy.assign(q + 1, {});
    for (const auto& [key, mult] : raw) {
        TupleGroup g;
        g.coords = key.first;
        g.assign = key.second;
        g.mult = mult;
        g.set_index = set_ids.at(key.first);
        side.groups_by_daisy[daisy_of[g.set_index]].push_back(
            static_cast<uint32_t>(side.groups.size()));
        side.groups.push_back(std::move(g));
    }
    return side;
}

void check_enum_budget(const SideData& side, const SamplerConfig& cfg) {
    for (uint32_t j = 1; j <= cfg.q; ++j) {
        if (side.groups_by_daisy[j].empty()) continue; // never consulted
        u128 space = sat_pow(cfg.alphabet.size, side.partition.kernels[j].size());
        if (space > static_cast<u128>(cfg.enum_budget))
            fail(Errc::budget, "kernel assignment space exceeds the enumeration budget at "
                               "petal size " +
                                   std::to_string(j));
    }
}

// v >= tau_j. Exact when p = 1; double arithmetic otherwise.
bool crossed(const SamplerConfig& cfg, uint64_t v, uint32_t j) {
    if (cfg.p == 1.0) return Rational(static_cast<long long>(v)) >= cfg.tau_base;
    return static_cast<double>(v) >=
           cfg.tau_base.to_double() * std::pow(cfg.p, static_cast<double>(j));
}

struct SideRun {
    bool hit = false;
    uint32_t j = 0;
    std::vector<Symbol> kappa;
    uint64_t votes = 0;
};

SideRun enumerate_side(const PreparedSampler& pre, int side_b, const SampledWord& xw,
                       uint64_t& work) {
    const SideData& side = side_b == 1 ? pre.side1 : pre.side0;
    SideRun run;
    for (uint32_t j = 1; j <= pre.config.q; ++j) {
        if (side.groups_by_daisy[j].empty()) continue;
        const std::vector<Coord>& kernel = side.partition.kernels[j];
        std::vector<Symbol> kappa(kernel.size(), 0);
        for (;;) {
            uint64_t v = count_votes(pre, side_b, j, kappa, xw, &work);
            if (crossed(pre.config, v, j)) {
                run.hit = true;
                run.j = j;
                run.kappa = kappa;
                run.votes = v;
                return run;
            }
            // Next assignment in lexicographic order, last position fastest.
            size_t pos = kappa.size();
            while (pos > 0) {
                if (static_cast<uint32_t>(++kappa[pos - 1]) < pre.config.alphabet.size) break;
                kappa[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }
    return run;
}

RunResult aborted_result(Out out, const SampleDraw& draw, uint64_t seed) {
    RunResult r;
    r.output = out;
    r.aborted = true;
    r.seed = seed;
    r.q_size = draw.Q.size();
    r.samplings = 1;
    return r;
}

} // namespace

PreparedSampler preprocess(const LocalAlgorithm& alg, uint32_t z, bool relaxed,
                           const PreprocessOptions& opts) {
    validate(alg);
    if (z >= alg.z_count()) fail(Errc::precondition, "explicit input out of range");
    if (!alg.normalized) fail(Errc::precondition, "sampler needs a normalized algorithm");
    if (!(alg.rho0 > Rational(0))) fail(Errc::precondition, "sampler requires rho0 > 0");
    if (relaxed && !(alg.rho1 > Rational(0)))
        fail(Errc::precondition, "relaxed sampler requires rho1 > 0");
    if (!(alg.sigma > Rational(0))) fail(Errc::precondition, "sampler requires sigma > 0");

    std::vector<DescriptionTuple> tuples = extract_tuples(alg, z);

    // The daisy partition covers the whole support, every output value included.
    std::map<std::vector<Coord>, uint32_t> set_ids;
    std::vector<std::vector<Coord>> distinct;
    for (const auto& t : tuples) {
        auto [it, inserted] = set_ids.emplace(t.coords, static_cast<uint32_t>(distinct.size()));
        if (inserted) distinct.push_back(t.coords);
    }
    DaisyPartition part = daisy_partition(distinct, alg.n, alg.q);

    std::map<std::pair<std::vector<Coord>, std::vector<Symbol>>, uint64_t> raw1, raw0;
    for (const auto& t : tuples) {
        if (t.b == Out::one) ++raw1[{t.coords, t.assign}];
        else if (t.b == Out::zero && relaxed) ++raw0[{t.coords, t.assign}];
    }

    PreparedSampler pre;
    pre.instance = alg.name;
    pre.z = z;
    pre.relaxed = relaxed;
    pre.sigma = alg.sigma;
    pre.rho0 = alg.rho0;
    pre.rho1 = alg.rho1;
    pre.spec = alg.spec;

    SamplerConfig& cfg = pre.config;
    cfg.n = alg.n;
    cfg.q = alg.q;
    cfg.alphabet = alg.alphabet;
    cfg.support = alg.support_size();
    cfg.enum_budget = opts.enum_budget;
    cfg.overridden = opts.override_gamma.has_value() || opts.override_p.has_value();
    cfg.gamma = opts.override_gamma.value_or(params::gamma_value(alg.q, alg.alphabet));
    if (opts.override_p) {
        cfg.p = *opts.override_p;
        cfg.p_clamped = false;
    } else {
        cfg.p = params::sampling_p(alg.n, alg.q, cfg.gamma);
        cfg.p_clamped = params::sampling_p_clamped(alg.n, alg.q, cfg.gamma);
    }
    if (!(cfg.p > 0.0) || cfg.p > 1.0)
        fail(Errc::precondition, "sampling probability must lie in (0, 1]");
    cfg.tau_base = params::threshold_base(cfg.support, cfg.q);
    cfg.alpha1 = params::capping_alpha(alg.alphabet, alg.rho0, alg.sigma);
    cfg.alpha0 = relaxed ? params::capping_alpha(alg.alphabet, alg.rho1, alg.sigma) : 0.0;

    // Kernel size theorem |K_i| <= gamma q^2 n^(1 - max{1,i}/q); meaningless
    // under caller overrides.
    if (!cfg.overridden) {
        for (uint32_t i = 0; i <= alg.q; ++i) {
            double e = 1.0 - static_cast<double>(std::max(1u, i)) / alg.q;
            double bound = cfg.gamma * alg.q * alg.q * std::pow(static_cast<double>(alg.n), e);
            if (static_cast<double>(part.kernels[i].size()) > bound + 1e-9)
                fail(Errc::invariant, "kernel size exceeds the gamma q^2 bound");
        }
    }

    pre.side1 = make_side(raw1, set_ids, distinct, part, alg.q);
    check_enum_budget(pre.side1, cfg);
    if (relaxed) {
        pre.side0 = make_side(raw0, set_ids, distinct, part, alg.q);
        check_enum_budget(pre.side0, cfg);
    }
    return pre;
}

SampleDraw sample_coords(uint32_t n, double p, uint64_t seed) {
    SampleDraw draw;
    draw.in_Q.assign(n, false);
    Splitmix64 rng(seed);
    for (Coord i = 0; i < n; ++i) {
        if (rng.next_double() < p) {
            draw.Q.push_back(i);
            draw.in_Q[i] = true;
        }
    }
    draw.aborted = static_cast<double>(draw.Q.size()) >= 2.0 * p * n;
    return draw;
}

uint64_t count_votes(const PreparedSampler& pre, int side_b, uint32_t j,
                     const std::vector<Symbol>& kappa, const SampledWord& xw, uint64_t* work) {
    const SideData& side = side_b == 1 ? pre.side1 : pre.side0;
    if (j < 1 || j > pre.config.q) fail(Errc::precondition, "petal size out of range");
    const std::vector<Coord>& kernel = side.partition.kernels[j];
    if (kappa.size() != kernel.size())
        fail(Errc::precondition, "kernel assignment length mismatch");

    std::vector<bool> in_kernel(pre.config.n, false);
    std::vector<uint32_t> kernel_pos(pre.config.n, 0);
    for (uint32_t i = 0; i < kernel.size(); ++i) {
        in_kernel[kernel[i]] = true;
        kernel_pos[kernel[i]] = i;
    }

    // j = 1 capping state: per petal coordinate, the distinct counted sets and
    // their accumulated votes.
    std::map<Coord, std::pair<std::set<uint32_t>, uint64_t>> petal_votes;

    uint64_t total = 0;
    for (uint32_t gi : side.groups_by_daisy[j]) {
        if (work) ++*work;
        const TupleGroup& g = side.groups[gi];
        bool match = true;
        Coord petal_coord = 0;
        for (size_t k = 0; k < g.coords.size() && match; ++k) {
            Coord i = g.coords[k];
            if (in_kernel[i]) {
                match = kappa[kernel_pos[i]] == g.assign[k];
            } else if (!(*xw.in_Q)[i]) {
                match = false; // S not inside Q union K_j
            } else {
                match = xw.at(i) == g.assign[k];
                petal_coord = i;
            }
        }
        if (!match) continue;
        if (j == 1) {
            auto& entry = petal_votes[petal_coord];
            entry.first.insert(g.set_index);
            entry.second += g.mult;
        } else {
            total += g.mult;
        }
    }
    if (j == 1) {
        const double alpha = side_b == 1 ? pre.config.alpha1 : pre.config.alpha0;
        for (const auto& [coord, entry] : petal_votes)
            if (static_cast<double>(entry.first.size()) < alpha) total += entry.second;
    }
    return total;
}

RunResult run_sample_based(const PreparedSampler& pre, const Word& x, uint64_t seed) {
    if (x.n() != pre.config.n) fail(Errc::precondition, "word length differs from n");
    SampleDraw draw = sample_coords(pre.config.n, pre.config.p, split_seed(seed, kSampleTag));
    if (draw.aborted) return aborted_result(Out::zero, draw, seed);

    RunResult r;
    r.seed = seed;
    r.q_size = draw.Q.size();
    r.samplings = 1;
    SampledWord xw{&x, &draw.in_Q};
    SideRun side = enumerate_side(pre, 1, xw, r.work);
    if (side.hit) {
        r.output = Out::one;
        r.triggering_j = static_cast<int32_t>(side.j);
        r.triggering_kappa = std::move(side.kappa);
        r.votes = side.votes;
    } else {
        r.output = Out::zero;
    }
    return r;
}

RunResult run_relaxed(const PreparedSampler& pre, const Word& x, uint64_t seed) {
    if (!pre.relaxed) fail(Errc::precondition, "sampler was prepared without the zero side");
    if (x.n() != pre.config.n) fail(Errc::precondition, "word length differs from n");
    SampleDraw draw = sample_coords(pre.config.n, pre.config.p, split_seed(seed, kSampleTag));
    if (draw.aborted) return aborted_result(Out::bot, draw, seed);

    RunResult r;
    r.seed = seed;
    r.q_size = draw.Q.size();
    r.samplings = 1;
    SampledWord xw{&x, &draw.in_Q};
    SideRun one = enumerate_side(pre, 1, xw, r.work);
    SideRun zero = enumerate_side(pre, 0, xw, r.work);
    if (one.hit != zero.hit) {
        const SideRun& hit = one.hit ? one : zero;
        r.output = one.hit ? Out::one : Out::zero;
        r.triggering_j = static_cast<int32_t>(hit.j);
        r.triggering_kappa = hit.kappa;
        r.votes = hit.votes;
    } else {
        r.output = Out::bot; // neither side crossed, or both did
    }
    return r;
}

MultiRunResult shared_sample_multirun(const std::vector<const PreparedSampler*>& pres,
                                      const Word& x, uint64_t seed) {
    if (pres.empty()) fail(Errc::precondition, "no samplers given");
    const SamplerConfig& first = pres[0]->config;
    for (const PreparedSampler* p : pres) {
        if (p->config.n != first.n || p->config.alphabet.size != first.alphabet.size ||
            p->config.p != first.p)
            fail(Errc::precondition, "shared sampling needs samplers agreeing on n, alphabet, p");
    }
    if (x.n() != first.n) fail(Errc::precondition, "word length differs from n");

    MultiRunResult multi;
    multi.samplings = 1;
    SampleDraw draw = sample_coords(first.n, first.p, split_seed(seed, kSampleTag));
    multi.aborted = draw.aborted;
    for (const PreparedSampler* p : pres) {
        RunResult r;
        r.seed = seed;
        r.q_size = draw.Q.size();
        r.samplings = 0; // the one sampling step belongs to the shared run
        r.aborted = draw.aborted;
        if (draw.aborted) {
            r.output = p->relaxed ? Out::bot : Out::zero;
        } else {
            SampledWord xw{&x, &draw.in_Q};
            SideRun one = enumerate_side(*p, 1, xw, r.work);
            if (p->relaxed) {
                SideRun zero = enumerate_side(*p, 0, xw, r.work);
                if (one.hit != zero.hit) {
                    const SideRun& hit = one.hit ? one : zero;
                    r.output = one.hit ? Out::one : Out::zero;
                    r.triggering_j = static_cast<int32_t>(hit.j);
                    r.triggering_kappa = hit.kappa;
                    r.votes = hit.votes;
                } else {
                    r.output = Out::bot;
                }
            } else {
                if (one.hit) {
                    r.output = Out::one;
                    r.triggering_j = static_cast<int32_t>(one.j);
                    r.triggering_kappa = one.kappa;
                    r.votes = one.votes;
                } else {
                    r.output = Out::zero;
                }
            }
        }
        multi.work += r.work;
        multi.results.push_back(std::move(r));
    }
    return multi;
}

GlobalDecodeResult global_decode(const std::vector<PreparedSampler>& per_index, const Word& w,
                                 uint64_t seed) {
    std::vector<const PreparedSampler*> ptrs;
    ptrs.reserve(per_index.size());
    for (const auto& p : per_index) ptrs.push_back(&p);
    MultiRunResult multi = shared_sample_multirun(ptrs, w, seed);

    GlobalDecodeResult res;
    res.aborted = multi.aborted;
    res.samplings = multi.samplings;
    res.work = multi.work;
    for (const RunResult& r : multi.results) res.outputs.push_back(r.output);
    return res;
}

} // namespace rla
