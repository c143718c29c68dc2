#include "mechkit/mechanism.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "mechkit/parallel.hpp"

namespace mechkit {

namespace {

// Picks agent d's favorite object among those jointly feasible with the
// current partial assignment (cur is the feasibility bitset of C(mu)).
ObjectId best_feasible(const Constraint& c, const PrefPool& pool, PrefIndex pref,
                       AgentId d, std::span<const std::uint64_t> cur) {
    for (int r = 0; r < c.objects(); ++r) {
        const ObjectId x = pool.object_at(pref, r);
        auto m = c.mask(d, x);
        for (std::size_t w = 0; w < cur.size(); ++w)
            if (cur[w] & m[w]) return x;
    }
    throw DefectError("no jointly feasible object (empty C(mu))");
}

void intersect_mask(const Constraint& c, AgentId d, ObjectId x, std::vector<std::uint64_t>& cur) {
    auto m = c.mask(d, x);
    for (std::size_t w = 0; w < cur.size(); ++w) cur[w] &= m[w];
}

std::string describe_allocation(const Constraint& c, AllocIndex a) {
    std::ostringstream os;
    os << "(";
    Allocation al = c.decode(a);
    for (std::size_t i = 0; i < al.size(); ++i) os << (i ? "," : "") << al[i];
    os << ")";
    return os.str();
}

}  // namespace

Allocation Mechanism::assign(const Profile& profile) const {
    const PrefPool& pool = pref_pool(objects());
    std::vector<PrefIndex> idx;
    idx.reserve(profile.size());
    for (const auto& p : profile) idx.push_back(pool.index_of(p));
    return c_->decode(eval_(idx));
}

TabulatedMechanism tabulate(const Mechanism& f, std::uint64_t budget, int threads) {
    const int n = f.agents(), m = f.objects();
    const std::uint64_t count = profile_count(n, m);
    if (count > budget)
        throw BudgetError("tabulation would need " + std::to_string(count) + " entries", count);
    const PrefPool& pool = pref_pool(m);
    const Constraint& c = f.constraint();

    TabulatedMechanism t{f.constraint_ptr(), std::vector<AllocIndex>(count)};
    std::atomic<bool> infeasible{false};
    parallel_chunks(count, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<PrefIndex> prof(static_cast<size_t>(n));
        if (lo < hi) profile_decode(pool, n, lo, prof);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const AllocIndex a = f.assign(prof);
            if (!c.contains(a)) infeasible.store(true);
            t.table[idx] = a;
            // increment mixed-radix profile, agent n-1 least significant
            for (int i = n - 1; i >= 0; --i) {
                if (++prof[static_cast<size_t>(i)] < pool.size()) break;
                prof[static_cast<size_t>(i)] = 0;
            }
        }
    });
    if (infeasible.load()) throw DefectError("mechanism produced an infeasible allocation");
    return t;
}

Mechanism from_table(TabulatedMechanism t) {
    auto c = t.constraint;
    const PrefPool& pool = pref_pool(c->objects());
    auto table = std::make_shared<std::vector<AllocIndex>>(std::move(t.table));
    return Mechanism(c, [&pool, table](std::span<const PrefIndex> prof) {
        return (*table)[profile_index(pool, prof)];
    });
}

GsdOrdering::GsdOrdering(std::vector<AgentId> default_order)
    : default_order_(std::move(default_order)) {}

GsdOrdering::GsdOrdering(std::vector<AgentId> default_order,
                         std::map<std::vector<ObjectId>, AgentId> overrides)
    : default_order_(std::move(default_order)), overrides_(std::move(overrides)) {}

GsdOrdering GsdOrdering::seeded(int n, std::uint64_t seed) {
    GsdOrdering z;
    z.seeded_ = true;
    z.seed_ = seed;
    z.n_ = n;
    return z;
}

AgentId GsdOrdering::next(const Suballocation& mu) const {
    if (seeded_) {
        std::uint64_t h = seed_;
        for (ObjectId x : mu.slots()) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        std::vector<AgentId> open;
        for (AgentId i = 0; i < n_; ++i)
            if (!mu.assigned(i)) open.push_back(i);
        if (open.empty()) throw ArgumentError("zeta queried on a complete suballocation");
        return open[static_cast<size_t>(h % open.size())];
    }
    if (!overrides_.empty()) {
        auto it = overrides_.find(mu.slots());
        if (it != overrides_.end()) return it->second;
    }
    for (AgentId i : default_order_)
        if (!mu.assigned(i)) return i;
    throw ArgumentError("zeta has no agent left for this suballocation");
}

const std::vector<AgentId>& CompromiserAssignment::at(AllocIndex a) const {
    static const std::vector<AgentId> empty;
    auto it = map.find(a);
    return it == map.end() ? empty : it->second;
}

namespace {

// Validates that zeta names an unmatched agent on every reachable
// suballocation (off-path values are immaterial).
void validate_zeta(const Constraint& c, const GsdOrdering& zeta, Suballocation& mu,
                   std::set<std::vector<ObjectId>>& seen) {
    if (mu.complete()) return;
    if (!seen.insert(mu.slots()).second) return;
    const AgentId d = zeta.next(mu);
    if (d < 0 || d >= c.agents() || mu.assigned(d))
        throw ArgumentError("zeta returned an invalid or already-matched agent");
    std::vector<std::uint64_t> cur;
    feasible_extension_bits(c, mu, cur);
    for (ObjectId x = 0; x < c.objects(); ++x) {
        auto msk = c.mask(d, x);
        bool reachable = false;
        for (std::size_t w = 0; w < cur.size() && !reachable; ++w)
            if (cur[w] & msk[w]) reachable = true;
        if (!reachable) continue;
        mu.assign(d, x);
        validate_zeta(c, zeta, mu, seen);
        mu.unassign(d);
    }
}

}  // namespace

Mechanism gsd(std::shared_ptr<const Constraint> c, GsdOrdering zeta) {
    {
        Suballocation mu(c->agents());
        std::set<std::vector<ObjectId>> seen;
        validate_zeta(*c, zeta, mu, seen);
    }
    const PrefPool& pool = pref_pool(c->objects());
    auto z = std::make_shared<GsdOrdering>(std::move(zeta));
    const Constraint* cp = c.get();
    return Mechanism(c, [cp, &pool, z](std::span<const PrefIndex> prof) {
        const int n = cp->agents();
        Suballocation mu(n);
        std::vector<std::uint64_t> cur(cp->bits().begin(), cp->bits().end());
        for (int k = 0; k < n; ++k) {
            const AgentId d = z->next(mu);
            const ObjectId x = best_feasible(*cp, pool, prof[static_cast<size_t>(d)], d, cur);
            mu.assign(d, x);
            intersect_mask(*cp, d, x, cur);
        }
        std::vector<ObjectId> out(mu.slots());
        return cp->encode(out);
    });
}

Mechanism serial_dictatorship(std::shared_ptr<const Constraint> c, std::vector<AgentId> order) {
    const int n = c->agents();
    if (static_cast<int>(order.size()) != n) throw ArgumentError("order must list every agent");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (AgentId i : order) {
        if (i < 0 || i >= n || seen[static_cast<size_t>(i)])
            throw ArgumentError("order must be a permutation of the agents");
        seen[static_cast<size_t>(i)] = true;
    }
    return gsd(std::move(c), GsdOrdering(std::move(order)));
}

Mechanism local_dictatorship(std::shared_ptr<const Constraint> c,
                             const BlockDecomposition& d,
                             const std::vector<AgentId>& dictators) {
    if (c->agents() != 2) throw ArgumentError("local dictatorship needs exactly 2 agents");
    if (dictators.size() != d.blocks.size())
        throw ArgumentError("need exactly one dictator per block");
    for (AgentId a : dictators)
        if (a != 0 && a != 1) throw ArgumentError("dictator must be agent 0 or 1");

    const int m = c->objects();
    // block id of each cstar cell, -1 elsewhere
    auto block_of = std::make_shared<std::vector<int>>(static_cast<size_t>(m) * m, -1);
    for (std::size_t b = 0; b < d.blocks.size(); ++b)
        for (const auto& [x, y] : d.blocks[b])
            (*block_of)[static_cast<size_t>(x) * m + static_cast<size_t>(y)] = static_cast<int>(b);

    auto in_r1 = std::make_shared<std::vector<bool>>(static_cast<size_t>(m), false);
    auto in_r2 = std::make_shared<std::vector<bool>>(static_cast<size_t>(m), false);
    for (ObjectId x : d.r1) (*in_r1)[static_cast<size_t>(x)] = true;
    for (ObjectId y : d.r2) (*in_r2)[static_cast<size_t>(y)] = true;

    const PrefPool& pool = pref_pool(m);
    const Constraint* cp = c.get();
    auto dict = std::make_shared<std::vector<AgentId>>(dictators);
    return Mechanism(c, [cp, &pool, block_of, in_r1, in_r2, dict, m](std::span<const PrefIndex> prof) {
        // effective tops after deleting always-infeasible objects
        auto best_not_in = [&](PrefIndex p, const std::vector<bool>& banned) {
            for (int r = 0; r < m; ++r) {
                const ObjectId x = pool.object_at(p, r);
                if (!banned[static_cast<size_t>(x)]) return x;
            }
            throw DefectError("agent has no feasible object at all");
        };
        const ObjectId a = best_not_in(prof[0], *in_r1);
        const ObjectId b = best_not_in(prof[1], *in_r2);
        ObjectId pair[2] = {a, b};
        if (cp->contains(std::span<const ObjectId>(pair, 2))) return cp->encode(pair);
        const int blk = (*block_of)[static_cast<size_t>(a) * m + static_cast<size_t>(b)];
        if (blk < 0) throw DefectError("infeasible top pair outside cstar");
        if ((*dict)[static_cast<size_t>(blk)] == 0) {
            // agent 1 maximizes over C^2(a)
            for (int r = 0; r < m; ++r) {
                pair[1] = pool.object_at(prof[1], r);
                pair[0] = a;
                if (cp->contains(std::span<const ObjectId>(pair, 2))) return cp->encode(pair);
            }
        } else {
            for (int r = 0; r < m; ++r) {
                pair[0] = pool.object_at(prof[0], r);
                pair[1] = b;
                if (cp->contains(std::span<const ObjectId>(pair, 2))) return cp->encode(pair);
            }
        }
        throw DefectError("no compatible object for the compromiser");
    });
}

Mechanism constraint_traversing(std::shared_ptr<const Constraint> c,
                                CompromiserAssignment alpha) {
    const Constraint& C = *c;
    if (!is_single_compromising(C))
        throw ArgumentError("constraint is not single-compromising");
    const int n = C.agents(), m = C.objects();
    const std::uint64_t total = C.total_allocations();
    std::vector<ObjectId> buf(static_cast<size_t>(n));
    for (std::uint64_t a = 0; a < total; ++a) {
        const AllocIndex ai = static_cast<AllocIndex>(a);
        const auto& who = alpha.at(ai);
        if (C.contains(ai)) {
            if (!who.empty())
                throw ArgumentError("alpha must be empty on feasible allocation " +
                                    describe_allocation(C, ai));
            continue;
        }
        if (who.empty())
            throw ArgumentError("alpha must be nonempty on infeasible allocation " +
                                describe_allocation(C, ai));
        if (who.size() > 1)
            throw ArgumentError("alpha must be single-valued, violated at " +
                                describe_allocation(C, ai));
        // persistence: the same agent compromises across her own coordinate
        const AgentId i = who[0];
        if (i < 0 || i >= n) throw ArgumentError("alpha names an invalid agent");
        C.decode_into(ai, buf);
        const ObjectId orig = buf[static_cast<size_t>(i)];
        for (ObjectId x = 0; x < m; ++x) {
            if (x == orig) continue;
            buf[static_cast<size_t>(i)] = x;
            const AllocIndex bi = C.encode(buf);
            if (!C.contains(bi)) {
                const auto& w2 = alpha.at(bi);
                if (w2.size() != 1 || w2[0] != i)
                    throw ArgumentError("alpha is not persistent between " +
                                        describe_allocation(C, ai) + " and " +
                                        describe_allocation(C, bi) + " for agent " +
                                        std::to_string(i));
            }
        }
        buf[static_cast<size_t>(i)] = orig;
    }

    const PrefPool& pool = pref_pool(m);
    auto al = std::make_shared<CompromiserAssignment>(std::move(alpha));
    const Constraint* cp = c.get();
    return Mechanism(c, [cp, &pool, al](std::span<const PrefIndex> prof) {
        const int nn = cp->agents();
        std::vector<ObjectId> x(static_cast<size_t>(nn));
        for (int i = 0; i < nn; ++i) x[static_cast<size_t>(i)] = pool.object_at(prof[static_cast<size_t>(i)], 0);
        for (;;) {
            const AllocIndex xi = cp->encode(x);
            if (cp->contains(xi)) return xi;
            const auto& who = al->at(xi);
            for (AgentId j : who) {
                const int r = pool.rank(prof[static_cast<size_t>(j)], x[static_cast<size_t>(j)]);
                if (r + 1 >= cp->objects())
                    throw DefectError("constraint-traversing run exhausted an agent's list");
                x[static_cast<size_t>(j)] = pool.object_at(prof[static_cast<size_t>(j)], r + 1);
            }
        }
    });
}

Mechanism extend(const Mechanism& f_m, const std::vector<AgentId>& m_agents,
                 std::shared_ptr<const Constraint> c, GsdOrdering zeta) {
    const int n = c->agents();
    std::vector<AgentId> sel = m_agents;
    std::ranges::sort(sel);
    if (sel.empty() || std::ranges::adjacent_find(sel) != sel.end())
        throw ArgumentError("m_agents must be a nonempty set");
    for (AgentId i : sel)
        if (i < 0 || i >= n) throw ArgumentError("agent id out of range");
    if (f_m.agents() != static_cast<int>(sel.size()) || f_m.objects() != c->objects())
        throw ArgumentError("sub-mechanism shape does not match m_agents");

    const PrefPool& pool = pref_pool(c->objects());
    const Constraint* cp = c.get();
    auto sub = std::make_shared<Mechanism>(f_m);
    auto agents = std::make_shared<std::vector<AgentId>>(std::move(sel));
    auto z = std::make_shared<GsdOrdering>(std::move(zeta));
    return Mechanism(c, [cp, &pool, sub, agents, z, n](std::span<const PrefIndex> prof) {
        std::vector<PrefIndex> subprof;
        subprof.reserve(agents->size());
        for (AgentId i : *agents) subprof.push_back(prof[static_cast<size_t>(i)]);
        const Allocation base = sub->constraint().decode(sub->assign(subprof));

        Suballocation mu(n);
        std::vector<std::uint64_t> cur(cp->bits().begin(), cp->bits().end());
        for (std::size_t k = 0; k < agents->size(); ++k) {
            mu.assign((*agents)[k], base[k]);
            intersect_mask(*cp, (*agents)[k], base[k], cur);
        }
        bool any = false;
        for (std::uint64_t w : cur)
            if (w) { any = true; break; }
        if (!any) throw DefectError("sub-mechanism output is not extendable");
        while (!mu.complete()) {
            const AgentId d = z->next(mu);
            if (d < 0 || d >= n || mu.assigned(d))
                throw ArgumentError("zeta returned an invalid agent during extension");
            const ObjectId x = best_feasible(*cp, pool, prof[static_cast<size_t>(d)], d, cur);
            mu.assign(d, x);
            intersect_mask(*cp, d, x, cur);
        }
        std::vector<ObjectId> out(mu.slots());
        return cp->encode(out);
    });
}

namespace {

std::shared_ptr<const Constraint> product_constraint(const Constraint& a, const Constraint& b) {
    if (a.objects() != b.objects()) throw ArgumentError("object sets must match");
    const int n = a.agents() + b.agents();
    std::vector<Allocation> feas;
    std::vector<ObjectId> bufa(static_cast<size_t>(a.agents())), bufb(static_cast<size_t>(b.agents()));
    for (AllocIndex ia : a.feasible()) {
        a.decode_into(ia, bufa);
        for (AllocIndex ib : b.feasible()) {
            b.decode_into(ib, bufb);
            Allocation joint(bufa);
            joint.insert(joint.end(), bufb.begin(), bufb.end());
            feas.push_back(std::move(joint));
        }
    }
    return std::make_shared<Constraint>(n, a.objects(), feas);
}

}  // namespace

Mechanism direct_sum(const Mechanism& f, const Mechanism& g) {
    auto c = product_constraint(f.constraint(), g.constraint());
    const int n1 = f.agents();
    auto fp = std::make_shared<Mechanism>(f);
    auto gp = std::make_shared<Mechanism>(g);
    const Constraint* cp = c.get();
    return Mechanism(c, [cp, fp, gp, n1](std::span<const PrefIndex> prof) {
        Allocation left = fp->constraint().decode(fp->assign(prof.subspan(0, static_cast<size_t>(n1))));
        Allocation right = gp->constraint().decode(gp->assign(prof.subspan(static_cast<size_t>(n1))));
        left.insert(left.end(), right.begin(), right.end());
        return cp->encode(left);
    });
}

Mechanism direct_sum_param(
    std::shared_ptr<const Constraint> c, int n_first,
    std::function<Mechanism(std::span<const PrefIndex>)> sigma,
    std::function<Mechanism(std::span<const PrefIndex>)> rho) {
    if (n_first < 1 || n_first >= c->agents())
        throw ArgumentError("first block must be a proper nonempty prefix");
    const Constraint* cp = c.get();
    auto s = std::make_shared<decltype(sigma)>(std::move(sigma));
    auto r = std::make_shared<decltype(rho)>(std::move(rho));
    return Mechanism(c, [cp, s, r, n_first](std::span<const PrefIndex> prof) {
        auto first = prof.subspan(0, static_cast<size_t>(n_first));
        auto second = prof.subspan(static_cast<size_t>(n_first));
        Mechanism for_first = (*r)(second);   // selected by the second block's profile
        Mechanism for_second = (*s)(first);
        Allocation left = for_first.constraint().decode(for_first.assign(first));
        Allocation right = for_second.constraint().decode(for_second.assign(second));
        left.insert(left.end(), right.begin(), right.end());
        return cp->encode(left);
    });
}

Mechanism marginal(const Mechanism& f, const std::vector<AgentId>& m_agents,
                   const std::vector<PrefIndex>& fixed) {
    const int n = f.agents();
    std::vector<AgentId> sel = m_agents;
    std::ranges::sort(sel);
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    if (sel.empty() || static_cast<int>(sel.size()) == n)
        throw ArgumentError("m_agents must be a proper nonempty subset");
    if (fixed.size() != static_cast<size_t>(n) - sel.size())
        throw ArgumentError("fixed preferences must cover exactly the complement");

    Projection proj = project(f.constraint(), sel);
    auto pc = std::make_shared<Constraint>(std::move(proj.constraint));
    auto fp = std::make_shared<Mechanism>(f);
    auto agents = std::make_shared<std::vector<AgentId>>(std::move(sel));
    auto fx = std::make_shared<std::vector<PrefIndex>>(fixed);
    const Constraint* pcp = pc.get();
    return Mechanism(pc, [fp, agents, fx, pcp, n](std::span<const PrefIndex> prof) {
        std::vector<PrefIndex> merged(static_cast<size_t>(n));
        std::size_t s = 0, o = 0;
        for (AgentId i = 0; i < n; ++i) {
            if (s < agents->size() && (*agents)[s] == i)
                merged[static_cast<size_t>(i)] = prof[s++];
            else
                merged[static_cast<size_t>(i)] = (*fx)[o++];
        }
        const Allocation full = fp->constraint().decode(fp->assign(merged));
        std::vector<ObjectId> sub;
        sub.reserve(agents->size());
        for (AgentId i : *agents) sub.push_back(full[static_cast<size_t>(i)]);
        return pcp->encode(sub);
    });
}

std::set<AllocIndex> option_set(const Mechanism& f, const std::vector<AgentId>& m_agents,
                                const std::vector<PrefIndex>& fixed) {
    Mechanism g = marginal(f, m_agents, fixed);
    const PrefPool& pool = pref_pool(g.objects());
    const int k = g.agents();
    const std::uint64_t count = profile_count(k, g.objects());
    std::set<AllocIndex> image;
    std::vector<PrefIndex> prof(static_cast<size_t>(k), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        image.insert(g.assign(prof));
        for (int i = k - 1; i >= 0; --i) {
            if (++prof[static_cast<size_t>(i)] < pool.size()) break;
            prof[static_cast<size_t>(i)] = 0;
        }
    }
    return image;
}

std::set<ObjectId> option_correspondence(const Mechanism& f, AgentId i,
                                         const std::vector<PrefIndex>& fixed) {
    const int n = f.agents();
    if (i < 0 || i >= n) throw ArgumentError("agent id out of range");
    if (fixed.size() != static_cast<size_t>(n) - 1)
        throw ArgumentError("fixed preferences must cover all other agents");
    const PrefPool& pool = pref_pool(f.objects());
    std::vector<PrefIndex> merged(static_cast<size_t>(n));
    std::size_t o = 0;
    for (AgentId j = 0; j < n; ++j)
        if (j != i) merged[static_cast<size_t>(j)] = fixed[o++];
    std::set<ObjectId> image;
    std::vector<ObjectId> buf(static_cast<size_t>(n));
    for (std::size_t p = 0; p < pool.size(); ++p) {
        merged[static_cast<size_t>(i)] = static_cast<PrefIndex>(p);
        f.constraint().decode_into(f.assign(merged), buf);
        image.insert(buf[static_cast<size_t>(i)]);
    }
    return image;
}

}  // namespace mechkit
