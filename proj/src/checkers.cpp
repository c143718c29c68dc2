#include "mechkit/checkers.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>

#include "mechkit/parallel.hpp"

namespace mechkit {

namespace {

struct Ctx {
    const Constraint& c;
    const PrefPool& pool;
    int n, m;
    std::size_t nprefs;               // m!
    std::uint64_t nprofiles;          // (m!)^n
    std::vector<std::uint64_t> pstride;  // profile stride per agent
    std::vector<std::uint32_t> ostride;  // allocation stride per agent

    explicit Ctx(const TabulatedMechanism& f)
        : c(*f.constraint), pool(pref_pool(f.objects())), n(f.agents()), m(f.objects()) {
        nprefs = pool.size();
        pstride.assign(static_cast<size_t>(n), 1);
        ostride.assign(static_cast<size_t>(n), 1);
        for (int i = n - 2; i >= 0; --i) {
            pstride[static_cast<size_t>(i)] = pstride[static_cast<size_t>(i) + 1] * nprefs;
            ostride[static_cast<size_t>(i)] = ostride[static_cast<size_t>(i) + 1] * static_cast<std::uint32_t>(m);
        }
        nprofiles = pstride[0] * nprefs;
        if (f.table.size() != nprofiles)
            throw ArgumentError("mechanism table size does not match (m!)^n");
    }

    ObjectId obj(AllocIndex a, AgentId i) const {
        return static_cast<ObjectId>((a / ostride[static_cast<size_t>(i)]) % static_cast<std::uint32_t>(m));
    }
};

void advance(std::vector<PrefIndex>& prefs, std::size_t nprefs) {
    for (int i = static_cast<int>(prefs.size()) - 1; i >= 0; --i) {
        if (static_cast<std::size_t>(++prefs[static_cast<size_t>(i)]) < nprefs) return;
        prefs[static_cast<size_t>(i)] = 0;
    }
}

// Parallel sweep over the profile range; scan(lo, hi, offer) reports
// candidate witnesses and the one with the least profile index wins, which
// keeps the result independent of thread scheduling.
CheckResult parallel_min_witness(
    const Ctx& ctx, int threads,
    const std::function<void(std::uint64_t, std::uint64_t,
                             const std::function<bool(Witness)>&)>& scan) {
    std::mutex mtx;
    std::optional<Witness> best;
    std::atomic<std::uint64_t> bound{UINT64_MAX};
    parallel_chunks(ctx.nprofiles, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        if (lo >= bound.load(std::memory_order_relaxed)) return;
        scan(lo, hi, [&](Witness w) {
            std::lock_guard<std::mutex> g(mtx);
            if (!best || w.profile < best->profile) {
                best = std::move(w);
                bound.store(best->profile, std::memory_order_relaxed);
            }
            return true;  // a chunk scans ascending, its first hit is its least
        });
    });
    return best;
}

}  // namespace

std::string to_string(Axiom a) {
    switch (a) {
        case Axiom::sp: return "sp";
        case Axiom::gsp: return "gsp";
        case Axiom::weak_gsp: return "weak-gsp";
        case Axiom::pe: return "pe";
        case Axiom::pe_on_image: return "pe-on-image";
        case Axiom::nonbossy: return "nonbossy";
        case Axiom::maskin: return "maskin";
        case Axiom::irrelevant_objects: return "irrelevant-objects";
        case Axiom::mutually_best: return "mutually-best";
    }
    return "?";
}

std::optional<Axiom> axiom_from_string(const std::string& s) {
    std::string k = s;
    std::ranges::replace(k, '_', '-');
    if (k == "sp") return Axiom::sp;
    if (k == "gsp") return Axiom::gsp;
    if (k == "weak-gsp") return Axiom::weak_gsp;
    if (k == "pe") return Axiom::pe;
    if (k == "pe-on-image") return Axiom::pe_on_image;
    if (k == "nonbossy") return Axiom::nonbossy;
    if (k == "maskin") return Axiom::maskin;
    if (k == "irrelevant-objects") return Axiom::irrelevant_objects;
    if (k == "mutually-best") return Axiom::mutually_best;
    return std::nullopt;
}

CheckResult check_sp(const TabulatedMechanism& f) {
    Ctx ctx(f);
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            for (AgentId i = 0; i < ctx.n; ++i) {
                const PrefIndex p = prefs[static_cast<size_t>(i)];
                const int ra = ctx.pool.rank(p, ctx.obj(a, i));
                const std::uint64_t base = idx - p * ctx.pstride[static_cast<size_t>(i)];
                for (std::size_t q = 0; q < ctx.nprefs; ++q) {
                    if (q == p) continue;
                    const AllocIndex b = f.table[base + q * ctx.pstride[static_cast<size_t>(i)]];
                    if (ctx.pool.rank(p, ctx.obj(b, i)) < ra) {
                        if (offer({Axiom::sp, idx, {i}, {static_cast<PrefIndex>(q)}, a, b})) return;
                    }
                }
            }
        }
    });
}

CheckResult check_nonbossy(const TabulatedMechanism& f) {
    Ctx ctx(f);
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            for (AgentId i = 0; i < ctx.n; ++i) {
                const PrefIndex p = prefs[static_cast<size_t>(i)];
                const ObjectId own = ctx.obj(a, i);
                const std::uint64_t base = idx - p * ctx.pstride[static_cast<size_t>(i)];
                for (std::size_t q = 0; q < ctx.nprefs; ++q) {
                    if (q == p) continue;
                    const AllocIndex b = f.table[base + q * ctx.pstride[static_cast<size_t>(i)]];
                    if (b != a && ctx.obj(b, i) == own) {
                        if (offer({Axiom::nonbossy, idx, {i}, {static_cast<PrefIndex>(q)}, a, b})) return;
                    }
                }
            }
        }
    });
}

CheckResult check_maskin(const TabulatedMechanism& f) {
    Ctx ctx(f);
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            for (AgentId i = 0; i < ctx.n; ++i) {
                const PrefIndex p = prefs[static_cast<size_t>(i)];
                const std::uint64_t base = idx - p * ctx.pstride[static_cast<size_t>(i)];
                for (PrefIndex q : ctx.pool.monotone_at(p, ctx.obj(a, i))) {
                    if (q == p) continue;
                    const AllocIndex b = f.table[base + q * ctx.pstride[static_cast<size_t>(i)]];
                    if (b != a) {
                        if (offer({Axiom::maskin, idx, {i}, {q}, a, b})) return;
                    }
                }
            }
        }
    });
}

CheckResult check_maskin_full(const TabulatedMechanism& f, std::uint64_t budget) {
    Ctx ctx(f);
    std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
    std::vector<std::span<const PrefIndex>> mono(static_cast<size_t>(ctx.n));
    std::vector<std::size_t> digit(static_cast<size_t>(ctx.n));
    std::uint64_t spent = 0;
    for (std::uint64_t idx = 0; idx < ctx.nprofiles; ++idx, advance(prefs, ctx.nprefs)) {
        const AllocIndex a = f.table[idx];
        std::uint64_t combos = 1;
        for (AgentId i = 0; i < ctx.n; ++i) {
            mono[static_cast<size_t>(i)] = ctx.pool.monotone_at(prefs[static_cast<size_t>(i)], ctx.obj(a, i));
            combos *= mono[static_cast<size_t>(i)].size();
        }
        spent += combos;
        if (spent > budget) throw BudgetError("full monotonicity sweep exceeds budget", spent);
        std::ranges::fill(digit, 0);
        for (std::uint64_t k = 0; k < combos; ++k) {
            std::uint64_t jdx = 0;
            for (AgentId i = 0; i < ctx.n; ++i)
                jdx += static_cast<std::uint64_t>(mono[static_cast<size_t>(i)][digit[static_cast<size_t>(i)]]) *
                       ctx.pstride[static_cast<size_t>(i)];
            if (f.table[jdx] != a) {
                Witness w{Axiom::maskin, idx, {}, {}, a, f.table[jdx]};
                for (AgentId i = 0; i < ctx.n; ++i) {
                    w.coalition.push_back(i);
                    w.misreports.push_back(mono[static_cast<size_t>(i)][digit[static_cast<size_t>(i)]]);
                }
                return w;
            }
            for (int i = ctx.n - 1; i >= 0; --i) {
                if (++digit[static_cast<size_t>(i)] < mono[static_cast<size_t>(i)].size()) break;
                digit[static_cast<size_t>(i)] = 0;
            }
        }
    }
    return std::nullopt;
}

CheckResult check_pe(const TabulatedMechanism& f) {
    Ctx ctx(f);
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        std::vector<int> r(static_cast<size_t>(ctx.n));
        std::vector<int> digit(static_cast<size_t>(ctx.n));
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            std::uint64_t box = 1;
            for (AgentId i = 0; i < ctx.n; ++i) {
                r[static_cast<size_t>(i)] = ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(a, i));
                box *= static_cast<std::uint64_t>(r[static_cast<size_t>(i)]) + 1;
            }
            if (box <= ctx.c.feasible_count()) {
                // walk the product of weak upper contours
                std::ranges::fill(digit, 0);
                for (std::uint64_t k = 0; k < box; ++k) {
                    AllocIndex b = 0;
                    for (AgentId i = 0; i < ctx.n; ++i)
                        b += static_cast<AllocIndex>(ctx.pool.object_at(prefs[static_cast<size_t>(i)],
                                                                        digit[static_cast<size_t>(i)])) *
                             ctx.ostride[static_cast<size_t>(i)];
                    if (b != a && ctx.c.contains(b)) {
                        if (offer({Axiom::pe, idx, {}, {}, a, b})) return;
                    }
                    for (int i = ctx.n - 1; i >= 0; --i) {
                        if (++digit[static_cast<size_t>(i)] <= r[static_cast<size_t>(i)]) break;
                        digit[static_cast<size_t>(i)] = 0;
                    }
                }
            } else {
                for (AllocIndex b : ctx.c.feasible()) {
                    if (b == a) continue;
                    bool dom = true;
                    for (AgentId i = 0; i < ctx.n && dom; ++i)
                        dom = ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(b, i)) <= r[static_cast<size_t>(i)];
                    if (dom) {
                        if (offer({Axiom::pe, idx, {}, {}, a, b})) return;
                    }
                }
            }
        }
    });
}

CheckResult check_pe_on_image(const TabulatedMechanism& f) {
    Ctx ctx(f);
    std::vector<AllocIndex> image = f.table;
    std::ranges::sort(image);
    image.erase(std::unique(image.begin(), image.end()), image.end());
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        std::vector<int> r(static_cast<size_t>(ctx.n));
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            for (AgentId i = 0; i < ctx.n; ++i)
                r[static_cast<size_t>(i)] = ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(a, i));
            for (AllocIndex b : image) {
                if (b == a) continue;
                bool dom = true;
                for (AgentId i = 0; i < ctx.n && dom; ++i)
                    dom = ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(b, i)) <= r[static_cast<size_t>(i)];
                if (dom) {
                    if (offer({Axiom::pe_on_image, idx, {}, {}, a, b})) return;
                }
            }
        }
    });
}

namespace {

// Coalition deviations for the naive group checks. For each coalition
// (smallest first) the attainable outcomes per residual profile are
// collected in one sweep, then every true profile is compared against its
// option set. A dominating outcome is turned back into explicit misreports
// only when a violation is found.
CheckResult group_check(const TabulatedMechanism& f, bool strict_all) {
    Ctx ctx(f);
    std::vector<AgentId> members, others;
    for (int size = 1; size <= ctx.n; ++size) {
        for (std::uint32_t mask = 1; mask < (1u << ctx.n); ++mask) {
            if (std::popcount(mask) != size) continue;
            members.clear();
            others.clear();
            for (AgentId i = 0; i < ctx.n; ++i)
                ((mask >> i) & 1 ? members : others).push_back(i);

            std::uint64_t nslices = 1;
            std::vector<std::uint64_t> sstride(others.size(), 1);
            for (int k = static_cast<int>(others.size()) - 2; k >= 0; --k)
                sstride[static_cast<size_t>(k)] = sstride[static_cast<size_t>(k) + 1] * ctx.nprefs;
            if (!others.empty()) nslices = sstride[0] * ctx.nprefs;

            std::vector<std::vector<AllocIndex>> opts(nslices);
            std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
            auto slice_of = [&]() {
                std::uint64_t s = 0;
                for (std::size_t k = 0; k < others.size(); ++k)
                    s += prefs[static_cast<size_t>(others[k])] * sstride[k];
                return s;
            };
            for (std::uint64_t idx = 0; idx < ctx.nprofiles; ++idx, advance(prefs, ctx.nprefs))
                opts[slice_of()].push_back(f.table[idx]);
            for (auto& v : opts) {
                std::ranges::sort(v);
                v.erase(std::unique(v.begin(), v.end()), v.end());
            }

            std::ranges::fill(prefs, 0);
            for (std::uint64_t idx = 0; idx < ctx.nprofiles; ++idx, advance(prefs, ctx.nprefs)) {
                const AllocIndex a = f.table[idx];
                for (AllocIndex b : opts[slice_of()]) {
                    if (b == a) continue;
                    bool all_weak = true, one_strict = false, all_strict = true;
                    for (AgentId i : members) {
                        const PrefIndex p = prefs[static_cast<size_t>(i)];
                        const int rb = ctx.pool.rank(p, ctx.obj(b, i));
                        const int ra = ctx.pool.rank(p, ctx.obj(a, i));
                        if (rb > ra) { all_weak = false; break; }
                        if (rb < ra) one_strict = true; else all_strict = false;
                    }
                    if (!all_weak) continue;
                    if (strict_all ? !all_strict : !one_strict) continue;

                    // recover a joint misreport reaching b
                    std::uint64_t base = idx;
                    for (AgentId i : members)
                        base -= prefs[static_cast<size_t>(i)] * ctx.pstride[static_cast<size_t>(i)];
                    std::vector<PrefIndex> dev(members.size(), 0);
                    const std::uint64_t combos =
                        checked_pow(ctx.nprefs, static_cast<int>(members.size()), UINT64_MAX);
                    for (std::uint64_t k = 0; k < combos; ++k) {
                        std::uint64_t jdx = base;
                        for (std::size_t t = 0; t < members.size(); ++t)
                            jdx += static_cast<std::uint64_t>(dev[t]) *
                                   ctx.pstride[static_cast<size_t>(members[t])];
                        if (f.table[jdx] == b)
                            return Witness{strict_all ? Axiom::weak_gsp : Axiom::gsp,
                                           idx, members, dev, a, b};
                        for (int t = static_cast<int>(members.size()) - 1; t >= 0; --t) {
                            if (static_cast<std::size_t>(++dev[static_cast<size_t>(t)]) < ctx.nprefs) break;
                            dev[static_cast<size_t>(t)] = 0;
                        }
                    }
                    throw DefectError("option set outcome has no generating deviation");
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

CheckResult check_gsp_naive(const TabulatedMechanism& f) { return group_check(f, false); }
CheckResult check_weak_gsp(const TabulatedMechanism& f) { return group_check(f, true); }

CheckResult check_gsp_fast(const TabulatedMechanism& f) {
    Ctx ctx(f);
    if (ctx.n == 1) return check_sp(f);
    const std::size_t P = ctx.nprefs;
    std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
    std::vector<AllocIndex> block(P * P);
    // image of the pair marginal: outcome pair -> a generating report pair
    std::map<std::pair<ObjectId, ObjectId>, std::pair<PrefIndex, PrefIndex>> image;
    for (AgentId i = 0; i < ctx.n; ++i) {
        for (AgentId j = i + 1; j < ctx.n; ++j) {
            const std::uint64_t si = ctx.pstride[static_cast<size_t>(i)];
            const std::uint64_t sj = ctx.pstride[static_cast<size_t>(j)];
            std::ranges::fill(prefs, 0);
            for (std::uint64_t idx = 0; idx < ctx.nprofiles; ++idx, advance(prefs, ctx.nprefs)) {
                if (prefs[static_cast<size_t>(i)] != 0 || prefs[static_cast<size_t>(j)] != 0) continue;
                image.clear();
                for (std::size_t pi = 0; pi < P; ++pi)
                    for (std::size_t pj = 0; pj < P; ++pj) {
                        const AllocIndex a = f.table[idx + pi * si + pj * sj];
                        block[pi * P + pj] = a;
                        image.try_emplace({ctx.obj(a, i), ctx.obj(a, j)},
                                          std::make_pair(static_cast<PrefIndex>(pi), static_cast<PrefIndex>(pj)));
                    }
                for (std::size_t pi = 0; pi < P; ++pi)
                    for (std::size_t pj = 0; pj < P; ++pj) {
                        const std::uint64_t truth = idx + pi * si + pj * sj;
                        const AllocIndex a = block[pi * P + pj];
                        const int ri = ctx.pool.rank(static_cast<PrefIndex>(pi), ctx.obj(a, i));
                        const int rj = ctx.pool.rank(static_cast<PrefIndex>(pj), ctx.obj(a, j));
                        // marginal strategy-proofness for either member
                        for (std::size_t q = 0; q < P; ++q) {
                            const AllocIndex bi = block[q * P + pj];
                            if (ctx.pool.rank(static_cast<PrefIndex>(pi), ctx.obj(bi, i)) < ri)
                                return Witness{Axiom::gsp, truth, {i}, {static_cast<PrefIndex>(q)}, a, bi};
                            const AllocIndex bj = block[pi * P + q];
                            if (ctx.pool.rank(static_cast<PrefIndex>(pj), ctx.obj(bj, j)) < rj)
                                return Witness{Axiom::gsp, truth, {j}, {static_cast<PrefIndex>(q)}, a, bj};
                        }
                        // efficiency over the marginal image
                        for (const auto& [pair_out, rep] : image) {
                            if (pair_out.first == ctx.obj(a, i) && pair_out.second == ctx.obj(a, j)) continue;
                            if (ctx.pool.rank(static_cast<PrefIndex>(pi), pair_out.first) <= ri &&
                                ctx.pool.rank(static_cast<PrefIndex>(pj), pair_out.second) <= rj) {
                                const AllocIndex b = block[static_cast<std::size_t>(rep.first) * P + rep.second];
                                return Witness{Axiom::gsp, truth, {i, j}, {rep.first, rep.second}, a, b};
                            }
                        }
                    }
            }
        }
    }
    return std::nullopt;
}

CheckResult check_irrelevant_objects(const TabulatedMechanism& f) {
    Ctx ctx(f);
    // class representative per preference: least index with the same ordering
    // of the objects outside R_i
    std::vector<std::vector<PrefIndex>> rep(static_cast<size_t>(ctx.n));
    bool any = false;
    for (AgentId i = 0; i < ctx.n; ++i) {
        const std::vector<ObjectId> ri = always_infeasible(ctx.c, i);
        if (ri.empty()) continue;
        any = true;
        std::vector<bool> in_ri(static_cast<size_t>(ctx.m), false);
        for (ObjectId x : ri) in_ri[static_cast<size_t>(x)] = true;
        auto& reps = rep[static_cast<size_t>(i)];
        reps.resize(ctx.nprefs);
        std::map<std::vector<ObjectId>, PrefIndex> first;
        for (std::size_t p = 0; p < ctx.nprefs; ++p) {
            std::vector<ObjectId> key;
            for (ObjectId x : ctx.pool.order(static_cast<PrefIndex>(p)))
                if (!in_ri[static_cast<size_t>(x)]) key.push_back(x);
            auto [it, fresh] = first.try_emplace(std::move(key), static_cast<PrefIndex>(p));
            reps[p] = it->second;
        }
    }
    if (!any) return std::nullopt;
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            for (AgentId i = 0; i < ctx.n; ++i) {
                const auto& reps = rep[static_cast<size_t>(i)];
                if (reps.empty()) continue;
                const PrefIndex p = prefs[static_cast<size_t>(i)];
                const PrefIndex r = reps[p];
                if (r == p) continue;
                const std::uint64_t jdx =
                    idx - static_cast<std::uint64_t>(p - r) * ctx.pstride[static_cast<size_t>(i)];
                if (f.table[jdx] != f.table[idx]) {
                    if (offer({Axiom::irrelevant_objects, idx, {i}, {r}, f.table[idx], f.table[jdx]})) return;
                }
            }
        }
    });
}

CheckResult check_mutually_best(const TabulatedMechanism& f) {
    Ctx ctx(f);
    if (ctx.n != ctx.m) throw ArgumentError("mutually-best needs a matching constraint");
    for (AllocIndex a : ctx.c.feasible()) {
        for (AgentId i = 0; i < ctx.n; ++i) {
            const ObjectId j = ctx.obj(a, i);
            if (j == i || ctx.obj(a, j) != i)
                throw ArgumentError("mutually-best needs a matching constraint");
        }
    }
    return parallel_min_witness(ctx, 0, [&](std::uint64_t lo, std::uint64_t hi, const std::function<bool(Witness)>& offer) {
        std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
        profile_decode(ctx.pool, ctx.n, lo, prefs);
        for (std::uint64_t idx = lo; idx < hi; ++idx, advance(prefs, ctx.nprefs)) {
            const AllocIndex a = f.table[idx];
            for (AgentId i = 0; i < ctx.n; ++i) {
                const ObjectId j = ctx.pool.object_at(prefs[static_cast<size_t>(i)], 0);
                if (j <= i) continue;
                if (ctx.pool.object_at(prefs[static_cast<size_t>(j)], 0) != i) continue;
                if (ctx.obj(a, i) != j) {
                    if (offer({Axiom::mutually_best, idx, {i, j}, {}, a, a})) return;
                }
            }
        }
    });
}

CheckResult run_check(Axiom a, const TabulatedMechanism& f, bool fast_gsp) {
    switch (a) {
        case Axiom::sp: return check_sp(f);
        case Axiom::gsp: return fast_gsp ? check_gsp_fast(f) : check_gsp_naive(f);
        case Axiom::weak_gsp: return check_weak_gsp(f);
        case Axiom::pe: return check_pe(f);
        case Axiom::pe_on_image: return check_pe_on_image(f);
        case Axiom::nonbossy: return check_nonbossy(f);
        case Axiom::maskin: return check_maskin(f);
        case Axiom::irrelevant_objects: return check_irrelevant_objects(f);
        case Axiom::mutually_best: return check_mutually_best(f);
    }
    throw ArgumentError("unknown axiom");
}

bool replay_witness(const TabulatedMechanism& f, const Witness& w) {
    Ctx ctx(f);
    if (w.profile >= ctx.nprofiles) return false;
    std::vector<PrefIndex> prefs(static_cast<size_t>(ctx.n));
    profile_decode(ctx.pool, ctx.n, w.profile, prefs);
    if (f.table[w.profile] != w.before) return false;
    if (w.coalition.size() != w.misreports.size() &&
        !(w.kind == Axiom::mutually_best || w.kind == Axiom::pe || w.kind == Axiom::pe_on_image))
        return false;

    std::uint64_t jdx = w.profile;
    for (std::size_t t = 0; t < w.misreports.size(); ++t) {
        const AgentId i = w.coalition[t];
        jdx += (static_cast<std::uint64_t>(w.misreports[t]) -
                prefs[static_cast<size_t>(i)]) * ctx.pstride[static_cast<size_t>(i)];
    }

    switch (w.kind) {
        case Axiom::sp: {
            if (w.coalition.size() != 1 || f.table[jdx] != w.after) return false;
            const AgentId i = w.coalition[0];
            return ctx.pool.prefers(prefs[static_cast<size_t>(i)], ctx.obj(w.after, i), ctx.obj(w.before, i));
        }
        case Axiom::gsp:
        case Axiom::weak_gsp: {
            if (w.coalition.empty() || f.table[jdx] != w.after) return false;
            bool one_strict = false;
            for (AgentId i : w.coalition) {
                const PrefIndex p = prefs[static_cast<size_t>(i)];
                const int rb = ctx.pool.rank(p, ctx.obj(w.after, i));
                const int ra = ctx.pool.rank(p, ctx.obj(w.before, i));
                if (rb > ra) return false;
                if (rb < ra) one_strict = true;
                else if (w.kind == Axiom::weak_gsp) return false;
            }
            return one_strict;
        }
        case Axiom::pe:
        case Axiom::pe_on_image: {
            if (w.after == w.before || !ctx.c.contains(w.after)) return false;
            for (AgentId i = 0; i < ctx.n; ++i)
                if (ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(w.after, i)) >
                    ctx.pool.rank(prefs[static_cast<size_t>(i)], ctx.obj(w.before, i)))
                    return false;
            return true;
        }
        case Axiom::nonbossy: {
            if (w.coalition.size() != 1 || f.table[jdx] != w.after) return false;
            const AgentId i = w.coalition[0];
            return w.after != w.before && ctx.obj(w.after, i) == ctx.obj(w.before, i);
        }
        case Axiom::maskin: {
            if (w.coalition.empty() || f.table[jdx] != w.after || w.after == w.before) return false;
            for (std::size_t t = 0; t < w.coalition.size(); ++t) {
                const AgentId i = w.coalition[t];
                const auto span = ctx.pool.monotone_at(prefs[static_cast<size_t>(i)], ctx.obj(w.before, i));
                if (std::ranges::find(span, w.misreports[t]) == span.end()) return false;
            }
            return true;
        }
        case Axiom::irrelevant_objects: {
            if (w.coalition.size() != 1 || f.table[jdx] != w.after || w.after == w.before) return false;
            const AgentId i = w.coalition[0];
            const std::vector<ObjectId> ri = always_infeasible(ctx.c, i);
            std::vector<bool> in_ri(static_cast<size_t>(ctx.m), false);
            for (ObjectId x : ri) in_ri[static_cast<size_t>(x)] = true;
            std::vector<ObjectId> k1, k2;
            for (ObjectId x : ctx.pool.order(prefs[static_cast<size_t>(i)]))
                if (!in_ri[static_cast<size_t>(x)]) k1.push_back(x);
            for (ObjectId x : ctx.pool.order(w.misreports[0]))
                if (!in_ri[static_cast<size_t>(x)]) k2.push_back(x);
            return k1 == k2;
        }
        case Axiom::mutually_best: {
            if (w.coalition.size() != 2) return false;
            const AgentId i = w.coalition[0], j = w.coalition[1];
            return ctx.pool.object_at(prefs[static_cast<size_t>(i)], 0) == j &&
                   ctx.pool.object_at(prefs[static_cast<size_t>(j)], 0) == i &&
                   ctx.obj(w.before, i) != j;
        }
    }
    return false;
}

}  // namespace mechkit
