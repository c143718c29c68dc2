#include <doctest.h>

#include <sstream>

#include "mechkit/io.hpp"

using namespace mechkit;

namespace {

Instance house23() {
    std::istringstream in(
        "mechkit-instance 1\n"
        "agents 2\n"
        "objects a b c\n"
        "constraint builtin house_allocation\n");
    return parse_instance(in, "test");
}

}  // namespace

TEST_CASE("instance files parse builtins and explicit lists") {
    const Instance inst = house23();
    CHECK(inst.constraint->agents() == 2);
    CHECK(inst.constraint->feasible_count() == 6);
    CHECK(inst.id_of("b") == 1);
    CHECK_THROWS_AS(inst.id_of("z"), ParseError);

    std::istringstream in(
        "mechkit-instance 1\n"
        "agents 2\n"
        "# a comment\n"
        "objects x y\n"
        "constraint explicit\n"
        "allow x y\n"
        "allow y x\n"
        "end\n");
    const Instance ex = parse_instance(in, "test");
    CHECK(ex.constraint->feasible_count() == 2);
    CHECK_FALSE(ex.builtin.has_value());
}

TEST_CASE("instance parse errors carry line numbers") {
    std::istringstream bad_header("mechkit-instance 2\n");
    CHECK_THROWS_WITH_AS(parse_instance(bad_header, "f"),
                         doctest::Contains("f:1"), ParseError);
    std::istringstream dup(
        "mechkit-instance 1\n"
        "agents 2\n"
        "objects a a\n");
    CHECK_THROWS_WITH_AS(parse_instance(dup, "f"), doctest::Contains("duplicate"), ParseError);
    std::istringstream unterminated(
        "mechkit-instance 1\n"
        "agents 2\n"
        "objects a b\n"
        "constraint explicit\n"
        "allow a b\n");
    CHECK_THROWS_AS(parse_instance(unterminated, "f"), ParseError);
}

TEST_CASE("mechanism files resolve against their instance") {
    const Instance inst = house23();
    std::istringstream sd(
        "mechkit-mechanism 1\n"
        "type serial-dictatorship\n"
        "order 1 0\n");
    const Mechanism f = parse_mechanism(sd, "sd", inst, ".");
    const TabulatedMechanism want = tabulate(serial_dictatorship(inst.constraint, {1, 0}));
    CHECK(tabulate(f).table == want.table);

    std::istringstream ld(
        "mechkit-mechanism 1\n"
        "type local-dictatorship\n"
        "dictators 0 1 0\n");
    CHECK_NOTHROW(parse_mechanism(ld, "ld", inst, "."));

    std::istringstream zeta(
        "mechkit-mechanism 1\n"
        "type gsd\n"
        "order 0 1\n"
        "zeta 0:a 1\n");
    CHECK_NOTHROW(parse_mechanism(zeta, "z", inst, "."));

    std::istringstream wrong(
        "mechkit-mechanism 1\n"
        "type local-dictatorship\n"
        "dictators 0\n");
    CHECK_THROWS_AS(parse_mechanism(wrong, "w", inst, "."), ParseError);
}

TEST_CASE("written tables reparse to an identical table") {
    const Instance inst = house23();
    const TabulatedMechanism t = tabulate(serial_dictatorship(inst.constraint, {0, 1}));
    std::ostringstream out;
    write_table_mechanism(out, t, inst);
    std::istringstream in(out.str());
    const Mechanism back = parse_mechanism(in, "roundtrip", inst, ".");
    CHECK(tabulate(back).table == t.table);
}

TEST_CASE("grid rendering is stable") {
    const Instance inst = house23();
    const BlockDecomposition d = decompose(*inst.constraint);
    CHECK(render_grid(inst, d) ==
          "   a  b  c\n"
          "a  A  .  .\n"
          "b  .  B  .\n"
          "c  .  .  C\n");

    std::istringstream in(
        "mechkit-instance 1\n"
        "agents 2\n"
        "objects a b c\n"
        "constraint builtin social_choice\n");
    const Instance sc = parse_instance(in, "sc");
    CHECK(render_grid(sc, decompose(*sc.constraint)) ==
          "   a  b  c\n"
          "a  .  A  A\n"
          "b  A  .  A\n"
          "c  A  A  .\n");
}

TEST_CASE("grid marks never-assignable rows and columns") {
    std::istringstream in(
        "mechkit-instance 1\n"
        "agents 2\n"
        "objects a b c\n"
        "constraint explicit\n"
        "allow a c\n"
        "allow c a\n"
        "allow c c\n"
        "end\n");
    const Instance inst = parse_instance(in, "r");
    const BlockDecomposition d = decompose(*inst.constraint);
    // object b is never assignable on either axis
    const std::string grid = render_grid(inst, d);
    CHECK(grid.find("b*") != std::string::npos);
    CHECK(grid.find('#') != std::string::npos);
}

TEST_CASE("witness serialization uses object names") {
    const Instance inst = house23();
    const AllocIndex fixed = inst.constraint->feasible()[0];
    const TabulatedMechanism t{inst.constraint, std::vector<AllocIndex>(36, fixed)};
    const auto w = check_pe(t);
    REQUIRE(w);
    const nlohmann::json j = to_json(*w, inst);
    CHECK(j["axiom"] == "pe");
    CHECK(j["profile"].size() == 2);
    CHECK(j["profile"][0].size() == 3);
    CHECK(j["before"].size() == 2);
    for (const auto& name : j["before"]) CHECK(inst.id_of(name.get<std::string>()) >= 0);
}
