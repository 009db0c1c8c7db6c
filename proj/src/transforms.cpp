#include "rla/transforms.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "rla/params.hpp"

namespace rla {

namespace {

using u128 = unsigned __int128;

constexpr u128 kSaturated = ~static_cast<u128>(0);

u128 sat_mul(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

u128 sat_pow(u128 base, uint64_t exp) {
    u128 r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        r = sat_mul(r, base);
        if (r == kSaturated) return r;
    }
    return r;
}

uint64_t count_leaves(const TreeNode& node) {
    if (node.is_leaf()) return 1;
    uint64_t total = 0;
    for (const auto& c : node.children) total += count_leaves(c);
    return total;
}

Out plurality(const std::array<uint32_t, 3>& counts) {
    Out best = Out::zero;
    if (counts[1] > counts[static_cast<size_t>(best)]) best = Out::one;
    if (counts[2] > counts[static_cast<size_t>(best)]) best = Out::bot;
    return best;
}

// Sequential product of tuple[i..]: walk tree i, then continue with tree i+1
// from every leaf, tallying leaf outputs; the final leaf holds the plurality.
TreeNode compose_node(const TreeNode& node, const std::vector<const DecisionTree*>& tuple,
                      size_t i, std::array<uint32_t, 3>& counts) {
    if (!node.is_leaf()) {
        TreeNode out;
        out.query = node.query;
        out.children.reserve(node.children.size());
        for (const auto& c : node.children) out.children.push_back(compose_node(c, tuple, i, counts));
        return out;
    }
    ++counts[static_cast<size_t>(node.leaf)];
    TreeNode out;
    if (i + 1 == tuple.size()) {
        out.leaf = plurality(counts);
    } else {
        out = compose_node(tuple[i + 1]->root, tuple, i + 1, counts);
    }
    --counts[static_cast<size_t>(node.leaf)];
    return out;
}

OutputDist dist_of(const std::vector<TreePtr>& trees, const Word& x) {
    std::map<const DecisionTree*, long long> mult;
    for (const auto& t : trees) ++mult[t.get()];
    OutputDist d;
    const long long total = static_cast<long long>(trees.size());
    for (const auto& [tree, m] : mult) d[eval_tree(*tree, x).output] += Rational(m, total);
    return d;
}

} // namespace

ErrorReduceResult error_reduce_repetitions(const LocalAlgorithm& alg, uint64_t t,
                                           const Rational& declared_sigma,
                                           const ErrorReduceOptions& opts) {
    validate(alg);
    if (t == 0) fail(Errc::precondition, "error reduction needs t >= 1");

    ErrorReduceResult res;
    res.report.applied = true;
    res.report.t = t;
    if (t == 1) {
        res.alg = alg;
        res.alg.sigma = declared_sigma;
        return res;
    }

    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        uint64_t leaves = 0;
        for (const auto& tree : alg.trees[z]) leaves += count_leaves(tree->root);
        if (sat_pow(leaves, t) > opts.max_support)
            fail(Errc::budget, "error reduction: majority product exceeds the tree budget");
    }

    res.alg = alg;
    res.alg.q = alg.q * static_cast<uint32_t>(t);
    res.alg.sigma = declared_sigma;
    res.alg.normalized = false;
    res.alg.trees.clear();
    res.alg.trees.resize(alg.z_count());

    const uint64_t support = alg.support_size();
    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        std::vector<const DecisionTree*> tuple(t, nullptr);
        std::vector<uint64_t> idx(t, 0);
        for (;;) {
            for (uint64_t i = 0; i < t; ++i) tuple[i] = alg.trees[z][idx[i]].get();
            std::array<uint32_t, 3> counts{0, 0, 0};
            auto composed = std::make_shared<DecisionTree>();
            composed->root = compose_node(tuple[0]->root, tuple, 0, counts);
            res.alg.trees[z].push_back(std::move(composed));

            // Odometer over ordered t-tuples, last position fastest.
            uint64_t pos = t;
            while (pos > 0) {
                if (++idx[pos - 1] < support) break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }
    validate(res.alg);
    return res;
}

ErrorReduceResult error_reduce(const LocalAlgorithm& alg, const Rational& target_sigma,
                               const ErrorReduceOptions& opts) {
    validate(alg);
    if (target_sigma >= alg.sigma) {
        ErrorReduceResult res;
        res.alg = alg;
        res.report.applied = false;
        res.report.t = 1;
        return res;
    }
    uint64_t t = std::max<uint64_t>(1, params::repetition_count(alg.sigma, target_sigma));
    return error_reduce_repetitions(alg, t, target_sigma, opts);
}

RandomnessReduceResult randomness_reduce(const LocalAlgorithm& alg, const Rational& sigma_param,
                                         uint64_t seed, const RandomnessReduceOptions& opts) {
    validate(alg);
    const uint64_t m = params::derand_support(alg.n, alg.alphabet, sigma_param);
    if (m == 0) fail(Errc::precondition, "randomness reduction: support formula gives zero");

    const bool exhaustive =
        sat_pow(alg.alphabet.size, alg.n) <= static_cast<u128>(opts.exhaustive_limit);
    if (!exhaustive && opts.witnesses.empty())
        fail(Errc::precondition,
             "randomness reduction: domain too large for exhaustive verification and no "
             "witness words were given");

    RandomnessReduceResult res;
    res.alg = alg;
    res.alg.sigma = sigma_param * 2;
    res.alg.trees.assign(alg.z_count(), {});
    res.report.support = m;
    res.report.exhaustive = exhaustive;

    const Rational need_old = Rational(1) - sigma_param;
    const Rational need_new = Rational(1) - sigma_param * 2;
    const uint64_t old_support = alg.support_size();

    uint32_t attempts_max = 0;
    for (uint32_t z = 0; z < alg.z_count(); ++z) {
        // Majority-preservation obligations of this z: wherever the input puts
        // mass >= 1 - sigma on one output, the resample must keep >= 1 - 2 sigma.
        std::vector<std::pair<Word, Out>> duties;
        auto collect = [&](const Word& x) {
            OutputDist d = dist_of(alg.trees[z], x);
            for (int o = 0; o < 3; ++o)
                if (d.p[o] >= need_old) duties.emplace_back(x, static_cast<Out>(o));
        };
        if (exhaustive) {
            for_each_word(alg.n, alg.alphabet, collect);
        } else {
            for (const Word& w : opts.witnesses) {
                if (w.n() != alg.n)
                    fail(Errc::precondition, "witness word length differs from n");
                collect(w);
            }
        }

        const uint64_t z_seed = split_seed(seed, 0x64657264ULL /* "derd" */, z);
        bool ok = false;
        Word worst_x;
        Out worst_b = Out::zero;
        Rational worst_mass;
        bool have_worst = false;
        for (uint32_t attempt = 1; attempt <= std::max(1u, opts.max_attempts); ++attempt) {
            attempts_max = std::max(attempts_max, attempt);
            Splitmix64 rng(split_seed(z_seed, 0x61747470ULL /* "attp" */, attempt));
            std::vector<TreePtr> sample;
            sample.reserve(m);
            for (uint64_t i = 0; i < m; ++i)
                sample.push_back(alg.trees[z][rng.next_below(old_support)]);

            bool pass = true;
            for (const auto& [x, b] : duties) {
                Rational mass = dist_of(sample, x)[b];
                if (mass < need_new) {
                    pass = false;
                    if (!have_worst || mass < worst_mass) {
                        have_worst = true;
                        worst_x = x;
                        worst_b = b;
                        worst_mass = mass;
                    }
                }
            }
            if (pass) {
                res.alg.trees[z] = std::move(sample);
                ok = true;
                break;
            }
        }
        if (!ok) {
            std::string what = "derandomization failed at z=" + std::to_string(z);
            if (have_worst)
                what += " on input " + word_to_string(worst_x) + ": output " +
                        std::to_string(static_cast<int>(worst_b)) + " keeps only " +
                        worst_mass.str() + " of the required " + need_new.str();
            fail(Errc::derandomization, what);
        }
    }
    res.report.attempts = attempts_max;
    validate(res.alg);
    return res;
}

PrepareResult prepare(const LocalAlgorithm& alg, uint64_t seed, const PrepareOptions& opts) {
    validate(alg);
    const uint32_t q_prime = params::amplified_q(alg.q, alg.sigma);
    const Rational sigma_mid(1, 16LL * q_prime);

    PrepareResult res;
    res.report.q_prime = q_prime;

    LocalAlgorithm base;
    if (q_prime == alg.q) {
        base = alg;
        res.report.amplified = false;
        res.report.t = 1;
    } else {
        ErrorReduceResult amp = error_reduce(alg, sigma_mid, opts.amplify);
        if (!amp.report.applied || amp.alg.q != q_prime)
            fail(Errc::invariant, "amplification landed on an unexpected query complexity");
        base = std::move(amp.alg);
        res.report.amplified = true;
        res.report.t = amp.report.t;
    }
    if (base.q > base.n)
        fail(Errc::budget, "amplified query complexity exceeds the word length");
    base = normalize(base);

    RandomnessReduceResult rr = randomness_reduce(base, sigma_mid, seed, opts.derand);
    res.alg = std::move(rr.alg);
    res.report.derand_attempts = rr.report.attempts;
    res.report.exhaustive = rr.report.exhaustive;
    res.report.support = rr.report.support;
    res.report.sigma = params::prepared_sigma(q_prime);

    if (res.alg.sigma != res.report.sigma)
        fail(Errc::invariant, "prepared error rate differs from 1/(8q')");
    if (res.report.support != params::prepared_support(alg.n, alg.alphabet, q_prime))
        fail(Errc::invariant, "prepared support differs from 48 q' n ln|Sigma|");
    validate(res.alg);
    return res;
}

} // namespace rla
