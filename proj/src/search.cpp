#include "mechkit/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>

#include "mechkit/checkers.hpp"

namespace mechkit {

void MechanismSet::insert(std::vector<AllocIndex> table) {
    auto it = std::ranges::lower_bound(tables, table);
    if (it == tables.end() || *it != table) tables.insert(it, std::move(table));
}

bool MechanismSet::contains(const std::vector<AllocIndex>& table) const {
    return std::ranges::binary_search(tables, table);
}

SetDiff set_equal(const MechanismSet& a, const MechanismSet& b) {
    SetDiff d;
    std::ranges::set_difference(a.tables, b.tables, std::back_inserter(d.only_a));
    std::ranges::set_difference(b.tables, a.tables, std::back_inserter(d.only_b));
    d.equal = d.only_a.empty() && d.only_b.empty();
    return d;
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    return (a > cap - b && b <= cap) ? cap : std::min(cap, a + b);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap;
    return a * b;
}

bool axioms_selected(const SearchSpec& s) {
    return s.sp || s.gsp || s.pe || s.pe_on_image || s.surjective;
}

}  // namespace

MechanismSet search(const SearchSpec& spec) {
    if (!spec.constraint) throw ArgumentError("search needs a constraint");
    if (!axioms_selected(spec)) throw ArgumentError("search needs at least one axiom");
    const Constraint& c = *spec.constraint;
    const int n = c.agents(), m = c.objects();
    const PrefPool& pool = pref_pool(m);
    const std::size_t P = pool.size();
    const std::size_t K = c.feasible_count();
    if (K > 64) throw ArgumentError("search supports at most 64 feasible allocations");
    const std::uint64_t nprofiles = checked_pow(P, n, spec.profile_limit);

    std::vector<std::uint64_t> pstride(static_cast<size_t>(n), 1);
    for (int i = n - 2; i >= 0; --i) pstride[static_cast<size_t>(i)] = pstride[static_cast<size_t>(i) + 1] * P;

    // object each feasible allocation gives each agent
    std::vector<ObjectId> obj_of(K * static_cast<size_t>(n));
    for (std::size_t k = 0; k < K; ++k)
        c.decode_into(c.feasible()[k], std::span<ObjectId>(obj_of.data() + k * n, static_cast<size_t>(n)));
    auto obj = [&](std::size_t k, AgentId i) { return obj_of[k * static_cast<size_t>(n) + static_cast<size_t>(i)]; };

    std::vector<PrefIndex> prefs_flat(nprofiles * static_cast<size_t>(n));
    {
        std::vector<PrefIndex> cur(static_cast<size_t>(n), 0);
        for (std::uint64_t v = 0; v < nprofiles; ++v) {
            std::copy(cur.begin(), cur.end(), prefs_flat.begin() + static_cast<std::ptrdiff_t>(v * n));
            for (int i = n - 1; i >= 0; --i) {
                if (static_cast<std::size_t>(++cur[static_cast<size_t>(i)]) < P) break;
                cur[static_cast<size_t>(i)] = 0;
            }
        }
    }
    auto pref_at = [&](std::uint64_t v, AgentId i) { return prefs_flat[v * static_cast<size_t>(n) + static_cast<size_t>(i)]; };

    const std::uint64_t full = K == 64 ? ~0ull : (1ull << K) - 1;
    std::vector<std::uint64_t> dom(nprofiles, full);

    if (spec.pe) {
        for (std::uint64_t v = 0; v < nprofiles; ++v) {
            std::uint64_t keep = 0;
            for (std::size_t k = 0; k < K; ++k) {
                bool dominated = false;
                for (std::size_t k2 = 0; k2 < K && !dominated; ++k2) {
                    if (k2 == k) continue;
                    bool dom_all = true;
                    for (AgentId i = 0; i < n && dom_all; ++i) {
                        const PrefIndex p = pref_at(v, i);
                        dom_all = pool.rank(p, obj(k2, i)) <= pool.rank(p, obj(k, i));
                    }
                    dominated = dom_all;
                }
                if (!dominated) keep |= 1ull << k;
            }
            dom[v] = keep;
            if (!keep) return {spec.constraint, {}};  // cannot happen: own top is undominated
        }
    }

    const bool arcs = spec.sp || spec.gsp;
    // allow[((i*P+p)*P+q)*m+x]: values the neighbor profile (agent i reporting
    // q instead of p) may still take once this profile hands agent i object x.
    // Covers both deviation directions of the pairwise constraint.
    std::vector<std::uint64_t> allow;
    if (arcs) {
        allow.assign(static_cast<size_t>(n) * P * P * static_cast<size_t>(m), 0);
        for (AgentId i = 0; i < n; ++i)
            for (std::size_t p = 0; p < P; ++p)
                for (std::size_t q = 0; q < P; ++q) {
                    if (q == p) continue;
                    for (ObjectId x = 0; x < m; ++x) {
                        std::uint64_t mask = 0;
                        for (std::size_t k = 0; k < K; ++k) {
                            const ObjectId y = obj(k, i);
                            if (pool.rank(static_cast<PrefIndex>(p), y) >= pool.rank(static_cast<PrefIndex>(p), x) &&
                                pool.rank(static_cast<PrefIndex>(q), y) <= pool.rank(static_cast<PrefIndex>(q), x))
                                mask |= 1ull << k;
                        }
                        allow[((static_cast<size_t>(i) * P + p) * P + q) * static_cast<size_t>(m) +
                              static_cast<size_t>(x)] = mask;
                    }
                }
    }

    std::vector<char> expanded(nprofiles, 0);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> trail;  // (var, old domain)
    std::vector<std::uint64_t> xtrail;                           // vars whose expansion must revert

    bool failed = false;
    std::vector<std::uint64_t> work;
    auto set_dom = [&](std::uint64_t v, std::uint64_t mask) {
        const std::uint64_t next = dom[v] & mask;
        if (next == dom[v]) return;
        trail.emplace_back(v, dom[v]);
        dom[v] = next;
        if (!next) { failed = true; return; }
        if (std::popcount(next) == 1 && !expanded[v]) work.push_back(v);
    };

    auto expand = [&](std::uint64_t v) {
        expanded[v] = 1;
        xtrail.push_back(v);
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(dom[v]));
        for (AgentId i = 0; i < n && !failed; ++i) {
            const PrefIndex p = pref_at(v, i);
            const ObjectId x = obj(k, i);
            const std::uint64_t base = v - p * pstride[static_cast<size_t>(i)];
            if (arcs) {
                const std::uint64_t* row =
                    allow.data() + ((static_cast<size_t>(i) * P + p) * P) * static_cast<size_t>(m);
                for (std::size_t q = 0; q < P && !failed; ++q) {
                    if (q == p) continue;
                    set_dom(base + q * pstride[static_cast<size_t>(i)],
                            row[q * static_cast<size_t>(m) + static_cast<size_t>(x)]);
                }
            }
            if (spec.gsp) {
                for (PrefIndex q : pool.monotone_at(p, x)) {
                    if (q == p) continue;
                    set_dom(base + q * pstride[static_cast<size_t>(i)], 1ull << k);
                    if (failed) break;
                }
            }
        }
    };

    auto propagate = [&]() {
        while (!work.empty() && !failed) {
            const std::uint64_t v = work.back();
            work.pop_back();
            if (!expanded[v]) expand(v);
        }
        work.clear();
        return !failed;
    };

    MechanismSet out{spec.constraint, {}};
    std::uint64_t nodes = 0;
    const auto start = std::chrono::steady_clock::now();
    auto over_time = [&]() {
        if (spec.budget_seconds <= 0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
               spec.budget_seconds;
    };

    auto emit = [&]() {
        std::vector<AllocIndex> table(nprofiles);
        for (std::uint64_t v = 0; v < nprofiles; ++v)
            table[v] = c.feasible()[static_cast<std::size_t>(std::countr_zero(dom[v]))];
        if (spec.surjective) {
            std::uint64_t seen = 0;
            for (AllocIndex a : table)
                seen |= 1ull << (std::ranges::lower_bound(c.feasible(), a) - c.feasible().begin());
            if (seen != full) return;
        }
        TabulatedMechanism t{spec.constraint, table};
        if (spec.gsp && check_nonbossy(t)) return;  // arcs already enforce SP exactly
        if (spec.pe_on_image && check_pe_on_image(t)) return;
        out.insert(std::move(table));
    };

    std::function<void()> dfs = [&]() {
        std::uint64_t var = nprofiles;
        for (std::uint64_t v = 0; v < nprofiles; ++v)
            if (std::popcount(dom[v]) > 1) { var = v; break; }
        if (var == nprofiles) { emit(); return; }
        std::uint64_t choices = dom[var];
        while (choices) {
            const std::uint64_t bit = choices & (~choices + 1);
            choices ^= bit;
            if (++nodes > spec.node_budget)
                throw BudgetError("search node budget exhausted; results incomplete", nodes);
            if ((nodes & 1023) == 0 && over_time())
                throw BudgetError("search time budget exhausted; results incomplete", nodes);
            const std::size_t mark = trail.size();
            const std::size_t xmark = xtrail.size();
            set_dom(var, bit);
            if (propagate()) dfs();
            failed = false;
            while (trail.size() > mark) {
                dom[trail.back().first] = trail.back().second;
                trail.pop_back();
            }
            while (xtrail.size() > xmark) {
                expanded[xtrail.back()] = 0;
                xtrail.pop_back();
            }
        }
    };

    for (std::uint64_t v = 0; v < nprofiles; ++v)
        if (std::popcount(dom[v]) == 1) work.push_back(v);
    if (propagate()) dfs();
    return out;
}

MechanismSet search_brute(const SearchSpec& spec, std::uint64_t assignment_limit) {
    if (!spec.constraint) throw ArgumentError("search needs a constraint");
    if (!axioms_selected(spec)) throw ArgumentError("search needs at least one axiom");
    const Constraint& c = *spec.constraint;
    const std::size_t K = c.feasible_count();
    const std::uint64_t nprofiles = checked_pow(pref_pool(c.objects()).size(), c.agents(), spec.profile_limit);
    const std::uint64_t total = checked_pow(K, static_cast<int>(nprofiles), assignment_limit);

    MechanismSet out{spec.constraint, {}};
    std::vector<std::size_t> digit(nprofiles, 0);
    std::vector<AllocIndex> table(nprofiles);
    for (std::uint64_t t = 0; t < total; ++t) {
        for (std::uint64_t v = 0; v < nprofiles; ++v) table[v] = c.feasible()[digit[v]];
        TabulatedMechanism tm{spec.constraint, table};
        bool ok = true;
        if (ok && spec.surjective) {
            std::vector<AllocIndex> img = table;
            std::ranges::sort(img);
            img.erase(std::unique(img.begin(), img.end()), img.end());
            ok = img.size() == K;
        }
        if (ok && spec.sp) ok = !check_sp(tm);
        if (ok && spec.gsp) ok = !check_gsp_naive(tm);
        if (ok && spec.pe) ok = !check_pe(tm);
        if (ok && spec.pe_on_image) ok = !check_pe_on_image(tm);
        if (ok) out.insert(table);
        for (std::uint64_t v = nprofiles; v-- > 0;) {
            if (++digit[v] < K) break;
            digit[v] = 0;
        }
    }
    return out;
}

MechanismSet enumerate_local_dictatorships(const Constraint& c) {
    const BlockDecomposition d = decompose(c);
    const std::size_t p = d.blocks.size();
    if (p > 20) throw BudgetError("too many blocks to enumerate", 1ull << p);
    auto cp = std::make_shared<Constraint>(c);
    MechanismSet out{cp, {}};
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
        std::vector<AgentId> dictators(p);
        for (std::size_t b = 0; b < p; ++b) dictators[b] = (mask >> b) & 1;
        out.insert(tabulate(local_dictatorship(cp, d, dictators)).table);
    }
    return out;
}

namespace {

// Objects some feasible completion can still hand agent d.
std::vector<ObjectId> attainable(const Constraint& c, const Suballocation& mu, AgentId d,
                                 std::vector<std::uint64_t>& scratch) {
    feasible_extension_bits(c, mu, scratch);
    std::vector<ObjectId> out;
    for (ObjectId x = 0; x < c.objects(); ++x) {
        const auto msk = c.mask(d, x);
        for (std::size_t w = 0; w < msk.size(); ++w)
            if (scratch[w] & msk[w]) { out.push_back(x); break; }
    }
    return out;
}

}  // namespace

std::uint64_t gsd_policy_count(const Constraint& c, std::uint64_t limit) {
    std::map<std::vector<ObjectId>, std::uint64_t> memo;
    std::vector<std::uint64_t> scratch;
    const std::uint64_t cap = limit == UINT64_MAX ? limit : limit + 1;
    std::function<std::uint64_t(const Suballocation&)> cnt = [&](const Suballocation& mu) -> std::uint64_t {
        if (mu.complete()) return 1;
        auto it = memo.find(mu.slots());
        if (it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (AgentId d = 0; d < c.agents(); ++d) {
            if (mu.assigned(d)) continue;
            std::uint64_t prod = 1;
            for (ObjectId x : attainable(c, mu, d, scratch)) {
                Suballocation child = mu;
                child.assign(d, x);
                prod = sat_mul(prod, cnt(child), cap);
            }
            total = sat_add(total, prod, cap);
        }
        memo.emplace(mu.slots(), total);
        return total;
    };
    return cnt(Suballocation(c.agents()));
}

std::uint64_t for_each_gsd_policy(const Constraint& c,
                                  const std::function<bool(const GsdPolicy&)>& visit) {
    GsdPolicy pol;
    std::uint64_t emitted = 0;
    std::vector<Suballocation> frontier{Suballocation(c.agents())};
    std::vector<std::uint64_t> scratch;
    std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
        if (idx == frontier.size()) {
            ++emitted;
            return visit(pol);
        }
        const Suballocation mu = frontier[idx];
        for (AgentId d = 0; d < c.agents(); ++d) {
            if (mu.assigned(d)) continue;
            pol[mu.slots()] = d;
            const std::size_t old = frontier.size();
            for (ObjectId x : attainable(c, mu, d, scratch)) {
                Suballocation child = mu;
                child.assign(d, x);
                if (!child.complete()) frontier.push_back(std::move(child));
            }
            const bool go_on = rec(idx + 1);
            frontier.resize(old);
            if (!go_on) { pol.erase(mu.slots()); return false; }
        }
        pol.erase(mu.slots());
        return true;
    };
    rec(0);
    return emitted;
}

std::vector<AllocIndex> gsd_table(const Constraint& c, const GsdOrdering& zeta,
                                  std::uint64_t table_budget) {
    const int n = c.agents(), m = c.objects();
    const PrefPool& pool = pref_pool(m);
    const std::size_t P = pool.size();
    const std::uint64_t count = checked_pow(P, n, table_budget);
    std::vector<std::uint64_t> pstride(static_cast<size_t>(n), 1);
    for (int i = n - 2; i >= 0; --i) pstride[static_cast<size_t>(i)] = pstride[static_cast<size_t>(i) + 1] * P;

    std::vector<AllocIndex> table(count);
    // per path level: the stride of the deciding agent and the reports that
    // lead down this branch
    std::vector<std::uint64_t> strides(static_cast<size_t>(n));
    std::vector<std::vector<PrefIndex>> groups(static_cast<size_t>(n));
    std::vector<std::uint64_t> scratch;

    std::function<void(int, std::uint64_t, AllocIndex)> write =
        [&](int level, std::uint64_t base, AllocIndex a) {
            if (level == n) { table[base] = a; return; }
            for (PrefIndex p : groups[static_cast<size_t>(level)])
                write(level + 1, base + p * strides[static_cast<size_t>(level)], a);
        };

    std::function<void(Suballocation&, int)> rec = [&](Suballocation& mu, int level) {
        if (mu.complete()) {
            std::vector<ObjectId> slots(mu.slots());
            write(0, 0, c.encode(slots));
            return;
        }
        const AgentId d = zeta.next(mu);
        if (d < 0 || d >= n || mu.assigned(d))
            throw ArgumentError("zeta returned an invalid or already-matched agent");
        const std::vector<ObjectId> att = attainable(c, mu, d, scratch);
        strides[static_cast<size_t>(level)] = pstride[static_cast<size_t>(d)];
        for (ObjectId x : att) {
            // reports whose favorite attainable object is x
            auto& grp = groups[static_cast<size_t>(level)];
            grp.clear();
            for (std::size_t p = 0; p < P; ++p) {
                ObjectId best = att[0];
                for (ObjectId y : att)
                    if (pool.rank(static_cast<PrefIndex>(p), y) < pool.rank(static_cast<PrefIndex>(p), best))
                        best = y;
                if (best == x) grp.push_back(static_cast<PrefIndex>(p));
            }
            mu.assign(d, x);
            rec(mu, level + 1);
            mu.unassign(d);
        }
    };

    Suballocation mu(n);
    rec(mu, 0);
    return table;
}

MechanismSet enumerate_gsd(std::shared_ptr<const Constraint> c, std::uint64_t policy_budget,
                           std::uint64_t table_budget) {
    if (!c) throw ArgumentError("enumerate_gsd needs a constraint");
    const std::uint64_t count = gsd_policy_count(*c, policy_budget);
    if (count > policy_budget)
        throw BudgetError("decision policy count exceeds budget", count);
    std::vector<AgentId> order(static_cast<size_t>(c->agents()));
    std::iota(order.begin(), order.end(), 0);
    MechanismSet out{c, {}};
    for_each_gsd_policy(*c, [&](const GsdPolicy& pol) {
        out.insert(gsd_table(*c, GsdOrdering(order, pol), table_budget));
        return true;
    });
    return out;
}

std::uint64_t canonical_constraint_mask(int m, std::uint64_t mask) {
    if (m > 8) throw ArgumentError("canonical mask supports m <= 8");
    std::vector<ObjectId> perm(static_cast<size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = ~0ull;
    do {
        std::uint64_t relabeled = 0;
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                if ((mask >> (x * m + y)) & 1)
                    relabeled |= 1ull << (perm[static_cast<size_t>(x)] * m + perm[static_cast<size_t>(y)]);
        best = std::min(best, relabeled);
    } while (std::ranges::next_permutation(perm).found);
    return best;
}

}  // namespace mechkit
