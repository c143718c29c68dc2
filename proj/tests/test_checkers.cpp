#include <doctest.h>

#include <memory>

#include "mechkit/checkers.hpp"

using namespace mechkit;

namespace {

std::shared_ptr<const Constraint> builtin(BuiltinKind k, int n, int m) {
    return std::make_shared<Constraint>(builtin_constraint(k, n, m));
}

// Agent 0 takes her top, agent 1 takes her best remaining object, and agent
// 2 receives the least or greatest remaining object index depending on how
// agent 1 ranked the object agent 0 consumed. Strategy-proof (agent 2 has no
// influence at all) but bossy: agent 1 can flip agent 2's object without
// changing her own.
TabulatedMechanism bossy_fixture() {
    auto c = builtin(BuiltinKind::house_allocation, 3, 4);
    const PrefPool& pool = pref_pool(4);
    const Constraint* cp = c.get();
    Mechanism f(c, [cp, &pool](std::span<const PrefIndex> prof) {
        const ObjectId x0 = pool.object_at(prof[0], 0);
        ObjectId x1 = -1;
        for (int r = 0; r < 4; ++r) {
            const ObjectId x = pool.object_at(prof[1], r);
            if (x != x0) { x1 = x; break; }
        }
        std::vector<ObjectId> rest;
        for (ObjectId x = 0; x < 4; ++x)
            if (x != x0 && x != x1) rest.push_back(x);
        const ObjectId x2 = pool.rank(prof[1], x0) == 0 ? rest[0] : rest[1];
        const ObjectId out[3] = {x0, x1, x2};
        return cp->encode(std::span<const ObjectId>(out, 3));
    });
    return tabulate(f);
}

}  // namespace

TEST_CASE("serial dictatorships pass every axiom") {
    auto c = builtin(BuiltinKind::house_allocation, 2, 3);
    const TabulatedMechanism t = tabulate(serial_dictatorship(c, {0, 1}));
    CHECK_FALSE(check_sp(t));
    CHECK_FALSE(check_gsp_naive(t));
    CHECK_FALSE(check_gsp_fast(t));
    CHECK_FALSE(check_weak_gsp(t));
    CHECK_FALSE(check_pe(t));
    CHECK_FALSE(check_pe_on_image(t));
    CHECK_FALSE(check_nonbossy(t));
    CHECK_FALSE(check_maskin(t));
    CHECK_FALSE(check_maskin_full(t));
}

TEST_CASE("the bossy fixture is strategy-proof but not group strategy-proof") {
    const TabulatedMechanism t = bossy_fixture();
    CHECK_FALSE(check_sp(t));
    const auto bossy = check_nonbossy(t);
    REQUIRE(bossy);
    CHECK(replay_witness(t, *bossy));
    // group strategy-proofness must fail too: it equals sp + nonbossy
    const auto g = check_gsp_naive(t);
    REQUIRE(g);
    CHECK(replay_witness(t, *g));
    const auto gf = check_gsp_fast(t);
    CHECK(gf);
    const auto mk = check_maskin(t);
    REQUIRE(mk);
    CHECK(replay_witness(t, *mk));
}

TEST_CASE("a constant mechanism is group strategy-proof but not efficient") {
    auto c = builtin(BuiltinKind::house_allocation, 2, 3);
    const AllocIndex fixed = c->feasible()[0];
    std::vector<AllocIndex> table(36, fixed);
    const TabulatedMechanism t{c, table};
    CHECK_FALSE(check_sp(t));
    CHECK_FALSE(check_gsp_naive(t));
    CHECK_FALSE(check_nonbossy(t));
    CHECK_FALSE(check_pe_on_image(t));  // singleton image
    const auto w = check_pe(t);
    REQUIRE(w);
    CHECK(replay_witness(t, *w));
}

TEST_CASE("witnesses replay against the table") {
    auto c = builtin(BuiltinKind::social_choice, 2, 3);
    // anti-dictatorship of agent 0: picks her bottom object
    const PrefPool& pool = pref_pool(3);
    std::vector<AllocIndex> table;
    std::vector<PrefIndex> prefs(2);
    for (ProfileIndex v = 0; v < 36; ++v) {
        profile_decode(pool, 2, v, prefs);
        const ObjectId x = pool.object_at(prefs[0], 2);
        const ObjectId a[2] = {x, x};
        table.push_back(c->encode(std::span<const ObjectId>(a, 2)));
    }
    const TabulatedMechanism t{c, table};
    for (Axiom ax : {Axiom::sp, Axiom::gsp, Axiom::weak_gsp, Axiom::pe, Axiom::maskin}) {
        const auto w = run_check(ax, t);
        REQUIRE_MESSAGE(w, to_string(ax));
        CHECK_MESSAGE(replay_witness(t, *w), to_string(ax));
    }
}

TEST_CASE("naive and fast group checks agree across a small corpus") {
    std::vector<TabulatedMechanism> corpus;
    auto house = builtin(BuiltinKind::house_allocation, 2, 3);
    corpus.push_back(tabulate(serial_dictatorship(house, {0, 1})));
    auto sc = builtin(BuiltinKind::social_choice, 2, 3);
    corpus.push_back(tabulate(serial_dictatorship(sc, {1, 0})));
    auto rm = builtin(BuiltinKind::roommates, 4, 4);
    corpus.push_back(tabulate(gsd(rm, GsdOrdering({2, 0, 1, 3}))));
    corpus.push_back(bossy_fixture());
    corpus.push_back({house, std::vector<AllocIndex>(36, house->feasible()[2])});
    for (const auto& t : corpus) {
        CHECK(check_gsp_naive(t).has_value() == check_gsp_fast(t).has_value());
        // chain and full monotonicity agree as well (small tables only; the
        // full sweep multiplies per-agent transformation counts)
        if (t.table.size() <= 4096)
            CHECK(check_maskin(t).has_value() == check_maskin_full(t).has_value());
        // sp + nonbossy matches group strategy-proofness
        const bool gsp = !check_gsp_naive(t);
        CHECK(gsp == (!check_sp(t) && !check_nonbossy(t)));
        // group strategy-proofness implies the weak variant
        if (gsp) CHECK_FALSE(check_weak_gsp(t));
    }
}

TEST_CASE("irrelevant-object invariance") {
    // agent 0 can never receive object 1
    auto c = std::make_shared<Constraint>(2, 3, std::vector<Allocation>{{0, 1}, {0, 2}, {2, 0}, {2, 1}});
    const TabulatedMechanism good = tabulate(serial_dictatorship(c, {0, 1}));
    CHECK_FALSE(check_irrelevant_objects(good));

    // key agent 0's outcome to where she ranks the banned object
    const PrefPool& pool = pref_pool(3);
    std::vector<AllocIndex> table;
    std::vector<PrefIndex> prefs(2);
    for (ProfileIndex v = 0; v < 36; ++v) {
        profile_decode(pool, 2, v, prefs);
        const ObjectId keyed[2] = {pool.rank(prefs[0], 1) == 0 ? 0 : 2,
                                   pool.rank(prefs[0], 1) == 0 ? 2 : 0};
        table.push_back(c->encode(std::span<const ObjectId>(keyed, 2)));
    }
    const TabulatedMechanism bad{c, table};
    const auto w = check_irrelevant_objects(bad);
    REQUIRE(w);
    CHECK(replay_witness(bad, *w));

    // vacuous pass when no object is ever excluded
    CHECK_FALSE(check_irrelevant_objects(
        tabulate(serial_dictatorship(builtin(BuiltinKind::house_allocation, 2, 3), {0, 1}))));
}

TEST_CASE("mutually-best pairs and generalized serial dictatorships") {
    auto rm = builtin(BuiltinKind::roommates, 4, 4);
    const TabulatedMechanism t = tabulate(gsd(rm, GsdOrdering({0, 1, 2, 3})));
    const auto w = check_mutually_best(t);
    REQUIRE(w);  // the first dictator can separate a mutually-top pair
    CHECK(replay_witness(t, *w));

    // a fixed matching satisfies the property at profiles whose mutually-top
    // pairs are exactly the matched ones, and fails globally
    const AllocIndex match = rm->encode(std::vector<ObjectId>{1, 0, 3, 2});
    const TabulatedMechanism fixed{rm, std::vector<AllocIndex>(331776, match)};
    const auto wf = check_mutually_best(fixed);
    REQUIRE(wf);
    CHECK(replay_witness(fixed, *wf));

    CHECK_THROWS_AS(check_mutually_best(tabulate(
                        serial_dictatorship(builtin(BuiltinKind::house_allocation, 2, 3), {0, 1}))),
                    ArgumentError);
}
