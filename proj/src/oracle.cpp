#include "rla/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rla {

namespace {

using u128 = unsigned __int128;

u128 sat_pow(u128 base, uint64_t exp) {
    u128 r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (r > (~static_cast<u128>(0)) / base) return ~static_cast<u128>(0);
        r *= base;
    }
    return r;
}

// Words at exact absolute Hamming distance r from x, lexicographic in the
// flipped positions and symbols. fn returning false stops the walk early.
bool for_each_at_distance(const Word& x, const Alphabet& alphabet, uint32_t r,
                          const std::function<bool(const Word&)>& fn) {
    const uint32_t n = x.n();
    if (r > n) return true;
    std::vector<Coord> pos(r);
    Word w = x;

    std::function<bool(uint32_t, Coord)> rec = [&](uint32_t depth, Coord start) -> bool {
        if (depth == r) return fn(w);
        for (Coord i = start; i + (r - depth) <= n; ++i) {
            pos[depth] = i;
            const Symbol keep = w.symbols[i];
            for (uint32_t s = 0; s < alphabet.size; ++s) {
                if (static_cast<Symbol>(s) == keep) continue;
                w.symbols[i] = static_cast<Symbol>(s);
                if (!rec(depth + 1, i + 1)) {
                    w.symbols[i] = keep;
                    return false;
                }
            }
            w.symbols[i] = keep;
        }
        return true;
    };
    return rec(0, 0);
}

// Output mass credited toward the required value b: relaxed algorithms get
// credit for bot, except on the valid set where the answer must be exact.
Rational credited_mass(const LocalAlgorithm& alg, const OutputDist& dist, Out b, const Word& w) {
    Rational mass = dist[b];
    if (alg.relaxed) {
        const bool strict = alg.spec && alg.spec->valid && alg.spec->valid(w);
        if (!strict) mass += dist[Out::bot];
    }
    return mass;
}

} // namespace

Label brute_force_label(const ProblemSpec& spec, uint32_t z, const Word& x) {
    if (z >= spec.z_count) fail(Errc::precondition, "explicit input out of range");
    if (x.n() != spec.n) fail(Errc::precondition, "word length differs from n");
    if (!spec.membership) fail(Errc::precondition, "problem spec has no membership predicate");
    return spec.membership(z, x);
}

RobustnessReport check_robustness(const LocalAlgorithm& alg, const Rational& rho0,
                                  const Rational& rho1, const RobustnessOptions& opts) {
    validate(alg);
    if (!alg.spec) fail(Errc::precondition, "robustness check needs a problem spec");
    const ProblemSpec& spec = *alg.spec;

    RobustnessReport rep;
    rep.certified0 = Rational(1);
    rep.certified1 = Rational(1);

    // Centers: all labeled domain points, possibly a lexicographic prefix of
    // the domain when it is too large to enumerate.
    std::vector<std::pair<uint32_t, Word>> centers0, centers1;
    const bool domain_complete =
        sat_pow(alg.alphabet.size, alg.n) <= static_cast<u128>(opts.max_words);
    if (!domain_complete) rep.exhaustive = false;
    {
        uint64_t scanned = 0;
        bool stop = false;
        for_each_word(alg.n, alg.alphabet, [&](const Word& w) {
            if (stop || scanned++ >= opts.max_words) {
                stop = true;
                return;
            }
            for (uint32_t z = 0; z < spec.z_count; ++z) {
                Label l = spec.membership(z, w);
                if (l == Label::zero) centers0.emplace_back(z, w);
                else if (l == Label::one) centers1.emplace_back(z, w);
            }
        });
    }

    const Rational needed = Rational(1) - alg.sigma;
    auto run_side = [&](Out b, const Rational& rho,
                        const std::vector<std::pair<uint32_t, Word>>& centers, bool& pass,
                        Rational& certified) {
        if (centers.empty()) {
            certified = Rational(1); // vacuous
            return;
        }
        // floor(rho * n) in absolute distance.
        Rational reach = rho * Rational(static_cast<long long>(alg.n));
        long long declared_abs = reach.num() >= 0 ? reach.num() / reach.den() : 0;
        uint64_t pairs = 0;
        long long last_clean = -1;
        for (uint32_t r = 0; r <= alg.n; ++r) {
            if (static_cast<long long>(r) > declared_abs && !opts.extend_to_maximal) break;
            if (static_cast<long long>(r) > declared_abs && !pass) break;
            bool shell_clean = true;
            bool budget_hit = false;
            for (const auto& [z, x] : centers) {
                bool go_on = for_each_at_distance(x, alg.alphabet, r, [&](const Word& w) {
                    if (++pairs > opts.max_ball_words) {
                        budget_hit = true;
                        return false;
                    }
                    OutputDist dist = exact_output_dist(alg, z, w);
                    if (credited_mass(alg, dist, b, w) < needed) {
                        shell_clean = false;
                        if (static_cast<long long>(r) <= declared_abs) {
                            pass = false;
                            if (!rep.counterexample) {
                                rep.counterexample_z = z;
                                rep.counterexample_center = x;
                                rep.counterexample = w;
                                rep.detail = "output " + std::to_string(out_bit(b)) +
                                             " keeps mass " +
                                             credited_mass(alg, dist, b, w).str() +
                                             " < " + needed.str() + " at distance " +
                                             std::to_string(r) + "/" + std::to_string(alg.n);
                            }
                        }
                        return false;
                    }
                    return true;
                });
                if (!go_on) break;
            }
            if (budget_hit) {
                if (static_cast<long long>(r) <= declared_abs) rep.exhaustive = false;
                break;
            }
            if (!shell_clean) break;
            last_clean = r;
        }
        if (last_clean >= 0) certified = Rational(last_clean, alg.n);
        else certified = Rational(-1, alg.n); // even the centers themselves fail
    };

    run_side(Out::zero, rho0, centers0, rep.pass0, rep.certified0);
    run_side(Out::one, rho1, centers1, rep.pass1, rep.certified1);
    return rep;
}

VolumeLemmaReport check_volume_lemma(const LocalAlgorithm& alg, uint32_t z, const Word& x,
                                     const Word& y_witness, const Rational& rho,
                                     const VolumeLemmaOptions& opts) {
    validate(alg);
    VolumeLemmaReport rep;
    rep.bound = alg.sigma * 2;
    rep.worst_weight = Rational(0);

    if (opts.check_witness) {
        if (!alg.spec) fail(Errc::precondition, "witness certification needs a problem spec");
        Label lx = brute_force_label(*alg.spec, z, x);
        Label ly = brute_force_label(*alg.spec, z, y_witness);
        if (lx == Label::outside || ly == Label::outside || lx == ly) {
            rep.pass = false;
            rep.detail = "witness must carry the opposite label inside the domain";
            return rep;
        }
        const Out want = ly == Label::one ? Out::one : Out::zero;
        const Rational needed = Rational(1) - alg.sigma;
        Rational reach = rho * Rational(static_cast<long long>(alg.n));
        long long abs_r = reach.num() >= 0 ? reach.num() / reach.den() : 0;
        for (uint32_t r = 0; r <= static_cast<uint32_t>(abs_r); ++r) {
            bool clean = for_each_at_distance(y_witness, alg.alphabet, r, [&](const Word& w) {
                OutputDist dist = exact_output_dist(alg, z, w);
                return credited_mass(alg, dist, want, w) >= needed;
            });
            if (!clean) {
                rep.pass = false;
                rep.detail = "witness is not rho-robust";
                return rep;
            }
        }
    }

    // mu_x grouped by set value: identical sets never change a union.
    std::vector<std::vector<Coord>> sets = induced_distribution(alg, z, x);
    const long long total = static_cast<long long>(sets.size());
    std::map<std::vector<Coord>, long long> mult;
    for (const auto& s : sets) ++mult[s];
    std::vector<std::pair<std::vector<Coord>, long long>> distinct(mult.begin(), mult.end());
    const size_t d = distinct.size();

    const Rational cover_cap = rho * Rational(static_cast<long long>(alg.n));
    auto union_small_enough = [&](const std::set<Coord>& u) {
        return Rational(static_cast<long long>(u.size())) < cover_cap;
    };

    if (d <= opts.exhaustive_supports) {
        for (uint64_t mask = 0; mask < (1ull << d); ++mask) {
            std::set<Coord> u;
            long long count = 0;
            for (size_t i = 0; i < d; ++i)
                if (mask & (1ull << i)) {
                    u.insert(distinct[i].first.begin(), distinct[i].first.end());
                    count += distinct[i].second;
                }
            ++rep.subcollections;
            if (!union_small_enough(u)) continue;
            Rational weight(count, total);
            if (weight > rep.worst_weight) rep.worst_weight = weight;
        }
    } else {
        rep.exhaustive = false;
        Splitmix64 rng(opts.seed);
        std::vector<size_t> order(d);
        std::iota(order.begin(), order.end(), size_t{0});
        for (uint32_t round = 0; round < opts.heuristic_rounds; ++round) {
            for (size_t i = d; i > 1; --i)
                std::swap(order[i - 1], order[rng.next_below(i)]);
            std::set<Coord> u;
            long long count = 0;
            for (size_t i : order) {
                std::set<Coord> next = u;
                next.insert(distinct[i].first.begin(), distinct[i].first.end());
                if (!union_small_enough(next)) continue;
                u = std::move(next);
                count += distinct[i].second;
            }
            ++rep.subcollections;
            Rational weight(count, total);
            if (weight > rep.worst_weight) rep.worst_weight = weight;
        }
    }

    if (rep.worst_weight > rep.bound) {
        rep.pass = false;
        rep.detail = "a light sub-collection carries weight " + rep.worst_weight.str() +
                     " > " + rep.bound.str();
    }
    return rep;
}

} // namespace rla
