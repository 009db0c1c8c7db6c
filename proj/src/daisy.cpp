#include "rla/daisy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace rla {

namespace {

using u128 = unsigned __int128;

constexpr u128 kSaturated = ~static_cast<u128>(0);

u128 sat_mul(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    if (a == kSaturated || b == kSaturated) return kSaturated;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

u128 sat_pow(u128 base, uint32_t exp) {
    u128 r = 1;
    for (uint32_t i = 0; i < exp; ++i) r = sat_mul(r, base);
    return r;
}

std::vector<Coord> canonical_set(const std::vector<Coord>& s, uint32_t n, uint32_t q) {
    std::vector<Coord> c = s;
    std::sort(c.begin(), c.end());
    if (c.size() != q || std::adjacent_find(c.begin(), c.end()) != c.end())
        fail(Errc::structural, "daisy member is not a q-set of distinct coordinates");
    if (!c.empty() && c.back() >= n) fail(Errc::structural, "daisy member coordinate exceeds n");
    return c;
}

} // namespace

double h_bound(uint32_t k, uint32_t n, uint32_t q) {
    if (k < 1 || n < 1 || q < 1) fail(Errc::precondition, "h_bound requires k, n, q >= 1");
    uint32_t e = k >= 2 ? k - 1 : 1;
    return std::pow(static_cast<double>(n), static_cast<double>(e) / q);
}

bool degree_at_least_h(uint64_t d, uint32_t k, uint32_t n, uint32_t q) {
    uint32_t e = k >= 2 ? k - 1 : 1;
    return sat_pow(d, q) >= sat_pow(n, e);
}

bool within_overlap_bound(uint64_t c, uint32_t j, uint32_t n, uint32_t q) {
    uint32_t e = j >= 2 ? j - 1 : 1;
    return sat_pow(c + 1, q) <= sat_mul(sat_pow(2, q), sat_pow(n, e));
}

uint64_t distinct_degree(const std::vector<std::vector<Coord>>& sets, Coord i) {
    std::set<std::vector<Coord>> seen;
    uint64_t d = 0;
    for (const auto& s : sets) {
        std::vector<Coord> c = s;
        std::sort(c.begin(), c.end());
        if (std::find(c.begin(), c.end(), i) != c.end() && seen.insert(std::move(c)).second) ++d;
    }
    return d;
}

namespace {

struct CollectionView {
    std::vector<std::vector<Coord>> canon;      // canonical copy per member
    std::vector<std::vector<Coord>> distinct;   // sorted unique values
    std::vector<uint32_t> value_of;             // member -> distinct index
    std::vector<uint64_t> degree;               // coordinate -> distinct-value degree
};

CollectionView build_view(const std::vector<std::vector<Coord>>& sets, uint32_t n, uint32_t q) {
    CollectionView v;
    v.canon.reserve(sets.size());
    std::map<std::vector<Coord>, uint32_t> ids;
    v.value_of.reserve(sets.size());
    for (const auto& s : sets) {
        std::vector<Coord> c = canonical_set(s, n, q);
        auto [it, inserted] = ids.emplace(c, static_cast<uint32_t>(v.distinct.size()));
        if (inserted) v.distinct.push_back(c);
        v.value_of.push_back(it->second);
        v.canon.push_back(std::move(c));
    }
    v.degree.assign(n, 0);
    for (const auto& s : v.distinct)
        for (Coord i : s) ++v.degree[i];
    return v;
}

} // namespace

DaisyPartition daisy_partition(const std::vector<std::vector<Coord>>& sets, uint32_t n,
                               uint32_t q) {
    if (n < 1 || q < 1 || q > n) fail(Errc::precondition, "daisy_partition requires 1 <= q <= n");
    CollectionView view = build_view(sets, n, q);

    DaisyPartition part;
    part.n = n;
    part.q = q;
    part.kernels.assign(q + 1, {});
    part.daisies.assign(q + 1, {});

    std::vector<std::vector<bool>> in_kernel(q + 1, std::vector<bool>(n, false));
    for (uint32_t j = 0; j < q; ++j) {
        for (Coord i = 0; i < n; ++i) {
            if (view.degree[i] > 0 && degree_at_least_h(view.degree[i], j + 1, n, q)) {
                part.kernels[j].push_back(i);
                in_kernel[j][i] = true;
            }
        }
    }

    for (uint32_t m = 0; m < view.canon.size(); ++m) {
        bool placed = false;
        for (uint32_t j = 0; j <= q && !placed; ++j) {
            uint32_t outside = 0;
            for (Coord i : view.canon[m])
                if (!in_kernel[j][i]) ++outside;
            if (outside == j) {
                part.daisies[j].push_back(m);
                placed = true;
            }
        }
        if (!placed) fail(Errc::invariant, "daisy member matched no petal size");
    }
    return part;
}

namespace {

std::string coord_list(const std::vector<Coord>& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

} // namespace

DaisyCheckReport check_partition_invariants(const std::vector<std::vector<Coord>>& sets,
                                            const DaisyPartition& part) {
    DaisyCheckReport rep;
    auto violate = [&](const std::string& what) {
        if (rep.ok) {
            rep.ok = false;
            rep.detail = what;
        }
    };
    const uint32_t n = part.n, q = part.q;
    CollectionView view = build_view(sets, n, q);

    // Disjoint cover.
    std::vector<uint32_t> seen(sets.size(), 0);
    for (const auto& daisy : part.daisies)
        for (uint32_t m : daisy) {
            if (m >= sets.size()) {
                violate("daisy references a member out of range");
                continue;
            }
            ++seen[m];
        }
    for (uint32_t m = 0; m < seen.size(); ++m)
        if (seen[m] != 1) violate("member " + std::to_string(m) + " covered " +
                                  std::to_string(seen[m]) + " times");

    // Kernel chain: K_q empty, nested, K_1 = K_0.
    if (part.kernels.size() != q + 1 || part.daisies.size() != q + 1)
        violate("partition arity mismatch");
    if (!part.kernels[q].empty()) violate("K_q not empty");
    for (uint32_t j = 0; j + 1 <= q; ++j) {
        if (!std::includes(part.kernels[j].begin(), part.kernels[j].end(),
                           part.kernels[j + 1].begin(), part.kernels[j + 1].end()))
            violate("kernel chain broken at " + std::to_string(j));
    }
    if (q >= 1 && part.kernels[0] != part.kernels[1]) violate("K_0 differs from K_1");

    // Kernel size bound: |K_j|^q * n^max{1,j} <= (q * #distinct)^q.
    const uint64_t distinct = view.distinct.size();
    for (uint32_t j = 0; j <= q; ++j) {
        uint32_t e = j >= 1 ? j : 1;
        u128 lhs = sat_mul(sat_pow(part.kernels[j].size(), q), sat_pow(n, e));
        u128 rhs = sat_pow(static_cast<u128>(q) * distinct, q);
        if (lhs > rhs) violate("kernel size bound fails at " + std::to_string(j));
    }

    // Petal sizes and the degree criterion.
    for (uint32_t j = 0; j <= q; ++j) {
        std::vector<bool> in_k(n, false);
        for (Coord i : part.kernels[j]) in_k[i] = true;
        for (uint32_t m : part.daisies[j]) {
            std::vector<Coord> petal;
            for (Coord i : view.canon[m])
                if (!in_k[i]) petal.push_back(i);
            if (petal.size() != j) {
                violate("petal size of member " + std::to_string(m) + " in daisy " +
                        std::to_string(j) + " is " + std::to_string(petal.size()));
                continue;
            }
            std::vector<uint64_t> degs;
            for (Coord i : petal) degs.push_back(view.degree[i]);
            std::sort(degs.begin(), degs.end());
            for (uint32_t k = 1; k <= j; ++k) {
                // k-th smallest petal degree must be <= h(k): degree >= h(k)
                // may hold for at most j - k petal elements above it.
                uint32_t e = k >= 2 ? k - 1 : 1;
                if (sat_pow(degs[k - 1], q) > sat_pow(n, e))
                    violate("degree criterion fails for member " + std::to_string(m) +
                            " at k=" + std::to_string(k));
            }
        }
    }
    return rep;
}

DaisyCheckReport check_petal_overlap_bound(const std::vector<std::vector<Coord>>& sets,
                                           const DaisyPartition& part) {
    DaisyCheckReport rep;
    const uint32_t n = part.n, q = part.q;
    CollectionView view = build_view(sets, n, q);
    rep.overlap_max.assign(q + 1, 0);

    for (uint32_t j = 1; j <= q; ++j) {
        std::vector<bool> in_k(n, false);
        for (Coord i : part.kernels[j]) in_k[i] = true;

        // Distinct member values present in this daisy and their petals.
        std::set<uint32_t> values;
        for (uint32_t m : part.daisies[j]) values.insert(view.value_of[m]);
        std::vector<std::vector<uint32_t>> values_at(n);
        std::map<uint32_t, std::vector<Coord>> petal_of;
        for (uint32_t v : values) {
            std::vector<Coord> petal;
            for (Coord i : view.distinct[v])
                if (!in_k[i]) petal.push_back(i);
            for (Coord i : petal) values_at[i].push_back(v);
            petal_of.emplace(v, std::move(petal));
        }

        for (uint32_t v : values) {
            std::set<uint32_t> touching;
            for (Coord i : petal_of[v])
                touching.insert(values_at[i].begin(), values_at[i].end());
            uint64_t count = touching.size();
            rep.overlap_max[j] = std::max(rep.overlap_max[j], count);
            if (!within_overlap_bound(count, j, n, q) && rep.ok) {
                rep.ok = false;
                rep.detail = "overlap bound fails in daisy " + std::to_string(j) + " at set " +
                             coord_list(view.distinct[v]) + " with count " +
                             std::to_string(count);
            }
        }
    }
    return rep;
}

namespace {

struct Mover {
    const std::vector<std::vector<uint32_t>>& adj;
    uint32_t k;
    std::vector<uint32_t> color;                 // vertex -> class
    std::vector<std::vector<uint32_t>> members;  // class -> vertices

    // neighbor_count[v][c] = how many neighbors of v sit in class c.
    std::vector<std::vector<uint32_t>> neighbor_count;

    Mover(const std::vector<std::vector<uint32_t>>& a, uint32_t classes)
        : adj(a), k(classes), color(a.size(), 0), members(classes),
          neighbor_count(a.size(), std::vector<uint32_t>(classes, 0)) {}

    void place(uint32_t v, uint32_t c) {
        color[v] = c;
        members[c].push_back(v);
        for (uint32_t u : adj[v]) ++neighbor_count[u][c];
    }

    void move(uint32_t v, uint32_t to) {
        uint32_t from = color[v];
        auto& m = members[from];
        m.erase(std::find(m.begin(), m.end(), v));
        for (uint32_t u : adj[v]) --neighbor_count[u][from];
        place(v, to);
    }
};

} // namespace

std::vector<uint32_t> equitable_color(const std::vector<std::vector<uint32_t>>& adjacency,
                                      uint32_t k, const EquitableColoringOptions& opts) {
    const uint32_t m = static_cast<uint32_t>(adjacency.size());
    uint32_t delta = 0;
    for (const auto& nb : adjacency) delta = std::max<uint32_t>(delta, nb.size());
    if (k == 0 || k <= delta)
        fail(Errc::precondition, "equitable coloring needs k >= max degree + 1");
    if (m == 0) return {};

    for (uint32_t attempt = 0; attempt < std::max(1u, opts.restarts); ++attempt) {
        Splitmix64 rng(split_seed(opts.seed, 0x65636f6c /* "ecol" */, attempt));
        std::vector<uint32_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        for (uint32_t i = m; i > 1; --i)
            std::swap(order[i - 1], order[rng.next_below(i)]);

        Mover st(adjacency, k);
        // Greedy: smallest conflict-free class.
        for (uint32_t v : order) {
            uint32_t best = k, best_size = 0;
            for (uint32_t c = 0; c < k; ++c) {
                if (st.neighbor_count[v][c] != 0) continue;
                if (best == k || st.members[c].size() < best_size) {
                    best = c;
                    best_size = static_cast<uint32_t>(st.members[c].size());
                }
            }
            // k >= delta + 1 guarantees a free class.
            st.place(v, best);
        }

        // Rebalance: shift units from overfull classes to minimum classes along
        // chains of conflict-free moves.
        uint64_t moves = 0;
        bool stuck = false;
        for (;;) {
            uint32_t min_size = m, max_size = 0;
            for (uint32_t c = 0; c < k; ++c) {
                min_size = std::min<uint32_t>(min_size, st.members[c].size());
                max_size = std::max<uint32_t>(max_size, st.members[c].size());
            }
            if (max_size <= min_size + 1) {
                // Sizes are floor/ceil automatically: they sum to m.
                return st.color;
            }
            if (moves >= opts.max_moves) {
                stuck = true;
                break;
            }

            // BFS over classes; edge A -> B when some vertex of A has no
            // neighbor in B.
            std::vector<int32_t> parent_class(k, -1);
            std::vector<uint32_t> parent_vertex(k, 0);
            std::vector<uint32_t> queue;
            for (uint32_t c = 0; c < k; ++c)
                if (st.members[c].size() == max_size) {
                    parent_class[c] = static_cast<int32_t>(c);
                    queue.push_back(c);
                }
            int32_t goal = -1;
            for (size_t head = 0; head < queue.size() && goal < 0; ++head) {
                uint32_t a = queue[head];
                for (uint32_t v : st.members[a]) {
                    for (uint32_t b = 0; b < k; ++b) {
                        if (parent_class[b] >= 0 || b == a) continue;
                        if (st.neighbor_count[v][b] != 0) continue;
                        parent_class[b] = static_cast<int32_t>(a);
                        parent_vertex[b] = v;
                        if (st.members[b].size() == min_size) {
                            goal = static_cast<int32_t>(b);
                            break;
                        }
                        queue.push_back(b);
                    }
                    if (goal >= 0) break;
                }
            }
            if (goal < 0) {
                stuck = true;
                break;
            }
            // Execute the chain from the deficient end backward.
            uint32_t b = static_cast<uint32_t>(goal);
            while (parent_class[b] != static_cast<int32_t>(b)) {
                uint32_t a = static_cast<uint32_t>(parent_class[b]);
                st.move(parent_vertex[b], b);
                ++moves;
                b = a;
            }
        }
        if (stuck) continue;
    }
    fail(Errc::budget, "equitable coloring: move budget exhausted");
}

SimpleDaisyFamily simplify(const std::vector<std::vector<Coord>>& sets,
                           const std::vector<Coord>& kernel, uint32_t t,
                           const EquitableColoringOptions& opts) {
    const uint32_t m = static_cast<uint32_t>(sets.size());
    std::set<Coord> kern(kernel.begin(), kernel.end());
    std::vector<std::set<Coord>> petals(m);
    for (uint32_t i = 0; i < m; ++i)
        for (Coord c : sets[i])
            if (!kern.count(c)) petals[i].insert(c);

    std::vector<std::vector<uint32_t>> adj(m);
    for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = i + 1; j < m; ++j) {
            bool meet = std::any_of(petals[i].begin(), petals[i].end(),
                                    [&](Coord c) { return petals[j].count(c) != 0; });
            if (meet) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    for (uint32_t i = 0; i < m; ++i)
        if (adj[i].size() > t)
            fail(Errc::precondition, "petal intersects more than t others");

    std::vector<uint32_t> color = equitable_color(adj, t + 1, opts);
    SimpleDaisyFamily fam;
    fam.classes.assign(t + 1, {});
    for (uint32_t i = 0; i < m; ++i) fam.classes[color[i]].push_back(i);
    return fam;
}

} // namespace rla
