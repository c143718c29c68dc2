#include <doctest.h>

#include <memory>

#include "mechkit/checkers.hpp"
#include "mechkit/search.hpp"

using namespace mechkit;

namespace {

std::shared_ptr<const Constraint> builtin(BuiltinKind k, int n, int m) {
    return std::make_shared<Constraint>(builtin_constraint(k, n, m));
}

SearchSpec spec_for(std::shared_ptr<const Constraint> c, bool sp, bool gsp, bool pe) {
    SearchSpec s;
    s.constraint = std::move(c);
    s.sp = sp;
    s.gsp = gsp;
    s.pe = pe;
    s.profile_limit = 400'000;
    return s;
}

}  // namespace

TEST_CASE("oracle counts match the block formula on two-agent instances") {
    CHECK(search(spec_for(builtin(BuiltinKind::social_choice, 2, 3), true, false, true)).size() == 2);
    CHECK(search(spec_for(builtin(BuiltinKind::social_choice, 2, 2), true, false, true)).size() == 4);
    CHECK(search(spec_for(builtin(BuiltinKind::house_allocation, 2, 3), true, false, true)).size() == 8);
}

TEST_CASE("oracle equals pure brute force at tiny scale") {
    for (BuiltinKind k : {BuiltinKind::social_choice, BuiltinKind::house_allocation}) {
        auto c = builtin(k, 2, 2);
        for (int axis = 0; axis < 3; ++axis) {
            SearchSpec s = spec_for(c, axis != 1, axis == 1, axis != 2);
            const SetDiff d = set_equal(search(s), search_brute(s));
            CHECK_MESSAGE(d.equal, to_string(k) << " axis " << axis);
        }
    }
}

TEST_CASE("every mechanism returned by the oracle passes the checkers") {
    SearchSpec s = spec_for(builtin(BuiltinKind::house_allocation, 2, 3), true, false, true);
    const MechanismSet found = search(s);
    for (const auto& table : found.tables) {
        const TabulatedMechanism t{s.constraint, table};
        CHECK_FALSE(check_sp(t));
        CHECK_FALSE(check_pe(t));
    }
}

TEST_CASE("group requirement only shrinks the result") {
    for (BuiltinKind k : {BuiltinKind::social_choice, BuiltinKind::house_allocation}) {
        auto c = builtin(k, 2, 3);
        const MechanismSet with_sp = search(spec_for(c, true, false, true));
        const MechanismSet with_gsp = search(spec_for(c, false, true, true));
        for (const auto& t : with_gsp.tables) CHECK(with_sp.contains(t));
    }
}

TEST_CASE("local dictatorship enumeration matches the oracle") {
    for (BuiltinKind k : {BuiltinKind::social_choice, BuiltinKind::house_allocation}) {
        auto c = builtin(k, 2, 3);
        const MechanismSet dict = enumerate_local_dictatorships(*c);
        const MechanismSet oracle = search(spec_for(c, true, false, true));
        CHECK(set_equal(dict, oracle).equal);
    }
}

TEST_CASE("gsd enumeration on roommates gives four distinct tables") {
    auto c = builtin(BuiltinKind::roommates, 4, 4);
    // 4 first dictators x 6^3 orderings of the forced tail decisions
    CHECK(gsd_policy_count(*c) == 864);
    const MechanismSet s = enumerate_gsd(c);
    CHECK(s.size() == 4);
}

TEST_CASE("gsd enumeration on two-agent social choice gives the dictatorships") {
    auto c = builtin(BuiltinKind::social_choice, 2, 3);
    const MechanismSet gsds = enumerate_gsd(c);
    CHECK(gsds.size() == 2);
    CHECK(set_equal(gsds, enumerate_local_dictatorships(*c)).equal);
}

TEST_CASE("single-agent constraints admit exactly one dictatorship") {
    auto c = builtin(BuiltinKind::house_allocation, 1, 3);
    CHECK(gsd_policy_count(*c) == 1);
    CHECK(enumerate_gsd(c).size() == 1);
}

TEST_CASE("policy streaming can stop early and budgets are honored") {
    auto c = builtin(BuiltinKind::roommates, 4, 4);
    int seen = 0;
    for_each_gsd_policy(*c, [&](const GsdPolicy&) { return ++seen < 3; });
    CHECK(seen == 3);
    CHECK_THROWS_AS(enumerate_gsd(c, 2), BudgetError);
    SearchSpec s = spec_for(builtin(BuiltinKind::house_allocation, 2, 3), true, false, false);
    s.node_budget = 3;
    CHECK_THROWS_AS(search(s), BudgetError);
}

TEST_CASE("set comparison reports the symmetric difference") {
    auto c = builtin(BuiltinKind::house_allocation, 2, 3);
    MechanismSet a{c, {}}, b{c, {}};
    const MechanismSet dict = enumerate_local_dictatorships(*c);
    a.insert(dict.tables[0]);
    a.insert(dict.tables[1]);
    b.insert(dict.tables[1]);
    b.insert(dict.tables[2]);
    const SetDiff d = set_equal(a, b);
    CHECK_FALSE(d.equal);
    const bool only_a_matches = d.only_a.size() == 1 && d.only_a[0] == dict.tables[0];
    const bool only_b_matches = d.only_b.size() == 1 && d.only_b[0] == dict.tables[2];
    CHECK(only_a_matches);
    CHECK(only_b_matches);
    CHECK(a.contains(dict.tables[0]));
    CHECK_FALSE(a.contains(dict.tables[2]));
}

TEST_CASE("canonical relabeling collapses orbits") {
    // diagonal masks are relabeling-invariant
    CHECK(canonical_constraint_mask(2, 0b1001) == 0b1001);
    // the two single-cell off-diagonal masks share an orbit with themselves
    CHECK(canonical_constraint_mask(2, 0b0010) == canonical_constraint_mask(2, 0b0100));
    // orbit representative is minimal
    for (std::uint64_t mask = 1; mask < 16; ++mask)
        CHECK(canonical_constraint_mask(2, canonical_constraint_mask(2, mask)) ==
              canonical_constraint_mask(2, mask));
}
