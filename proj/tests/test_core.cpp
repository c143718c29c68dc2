#include <doctest.h>

#include <algorithm>
#include <random>

#include "mechkit/core.hpp"

using namespace mechkit;

TEST_CASE("allocation indices round-trip in mixed-radix order") {
    Constraint c = builtin_constraint(BuiltinKind::house_allocation, 2, 3);
    CHECK(c.total_allocations() == 9);
    // agent 0 most significant
    CHECK(c.encode(std::vector<ObjectId>{0, 1}) == 1);
    CHECK(c.encode(std::vector<ObjectId>{2, 0}) == 6);
    for (AllocIndex a = 0; a < 9; ++a) CHECK(c.encode(c.decode(a)) == a);
}

TEST_CASE("builtin constraint sizes") {
    CHECK(builtin_constraint(BuiltinKind::house_allocation, 2, 3).feasible_count() == 6);
    CHECK(builtin_constraint(BuiltinKind::house_allocation, 3, 4).feasible_count() == 24);
    CHECK(builtin_constraint(BuiltinKind::house_allocation, 4, 4).feasible_count() == 24);
    // fixed-point-free involutions on 4 agents
    CHECK(builtin_constraint(BuiltinKind::roommates, 4, 4).feasible_count() == 3);
    CHECK(builtin_constraint(BuiltinKind::social_choice, 2, 3).feasible_count() == 3);
    CHECK(builtin_constraint(BuiltinKind::social_choice, 3, 5).feasible_count() == 5);
    CHECK(builtin_constraint(BuiltinKind::complement_diagonal, 3, 2).feasible_count() == 6);
}

TEST_CASE("builtin constraint contents") {
    Constraint rm = builtin_constraint(BuiltinKind::roommates, 4, 4);
    for (AllocIndex a : rm.feasible()) {
        const Allocation v = rm.decode(a);
        for (AgentId i = 0; i < 4; ++i) {
            CHECK(v[static_cast<size_t>(i)] != i);
            CHECK(v[static_cast<size_t>(v[static_cast<size_t>(i)])] == i);
        }
    }
    Constraint sc = builtin_constraint(BuiltinKind::social_choice, 3, 4);
    for (AllocIndex a : sc.feasible()) {
        const Allocation v = sc.decode(a);
        CHECK(v[0] == v[1]);
        CHECK(v[1] == v[2]);
    }
    CHECK_THROWS_AS(builtin_constraint(BuiltinKind::roommates, 3, 3), ArgumentError);
    CHECK_THROWS_AS(builtin_constraint(BuiltinKind::house_allocation, 4, 3), ArgumentError);
}

TEST_CASE("feasible extensions match a direct scan") {
    Constraint c = builtin_constraint(BuiltinKind::house_allocation, 3, 4);
    Suballocation mu(3);
    mu.assign(1, 2);
    const auto ext = feasible_extensions(c, mu);
    std::vector<AllocIndex> direct;
    for (AllocIndex a : c.feasible())
        if (c.decode(a)[1] == 2) direct.push_back(a);
    CHECK(ext == direct);
    CHECK(ext.size() == 6);
}

TEST_CASE("projection re-indexes agents and dedupes") {
    Constraint c = builtin_constraint(BuiltinKind::house_allocation, 3, 4);
    Projection p = project(c, {0, 2});
    CHECK(p.agents == std::vector<AgentId>{0, 2});
    CHECK(p.constraint.agents() == 2);
    // each injective pair extends to an injective triple when m > n
    CHECK(p.constraint.feasible_count() == 12);
}

TEST_CASE("projection composes: projecting twice equals projecting once") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Allocation> feas;
        for (AllocIndex a = 0; a < 27; ++a)
            if (rng() % 3) feas.push_back({static_cast<ObjectId>(a / 9),
                                           static_cast<ObjectId>((a / 3) % 3),
                                           static_cast<ObjectId>(a % 3)});
        if (feas.empty()) continue;
        Constraint c(3, 3, feas);
        Projection p12 = project(c, {0, 1});
        Projection p1 = project(p12.constraint, {0});
        Projection direct = project(c, {0});
        CHECK(p1.constraint == direct.constraint);
    }
}

TEST_CASE("always-infeasible objects") {
    // agent 0 can never take object 1
    Constraint c(2, 3, std::vector<Allocation>{{0, 1}, {0, 2}, {2, 0}, {2, 1}});
    CHECK(always_infeasible(c, 0) == std::vector<ObjectId>{1});
    CHECK(always_infeasible(c, 1).empty());
}

TEST_CASE("single-compromising detection") {
    CHECK(is_single_compromising(builtin_constraint(BuiltinKind::complement_diagonal, 3, 2)));
    CHECK(is_single_compromising(builtin_constraint(BuiltinKind::house_allocation, 2, 3)));
    // social choice: from a mixed allocation one agent cannot always repair
    CHECK_FALSE(is_single_compromising(builtin_constraint(BuiltinKind::social_choice, 3, 3)));
}
