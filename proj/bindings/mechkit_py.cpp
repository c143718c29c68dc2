// Python module exposing the core operations: constraints, block
// decomposition, mechanism families, axiom checks and the exhaustive search.
// Tables are exchanged as lists of allocations in profile-index order
// (mixed radix over per-agent preference indices, agent 0 most significant).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "mechkit/checkers.hpp"
#include "mechkit/search.hpp"

namespace py = pybind11;
using namespace mechkit;

namespace {

using Rows = std::vector<std::vector<ObjectId>>;

Rows rows_of(const Constraint& c, const std::vector<AllocIndex>& table) {
    Rows out;
    out.reserve(table.size());
    for (AllocIndex a : table) out.push_back(c.decode(a));
    return out;
}

std::vector<AllocIndex> table_of(const Constraint& c, const Rows& rows) {
    std::vector<AllocIndex> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const AllocIndex a = c.encode(row);
        if (!c.contains(a)) throw ArgumentError("table contains an infeasible allocation");
        out.push_back(a);
    }
    return out;
}

std::vector<Rows> rows_of_set(const MechanismSet& s) {
    std::vector<Rows> out;
    out.reserve(s.size());
    for (const auto& t : s.tables) out.push_back(rows_of(*s.constraint, t));
    return out;
}

Axiom axiom_arg(const std::string& name) {
    const auto a = axiom_from_string(name);
    if (!a) throw ArgumentError("unknown axiom '" + name + "'");
    return *a;
}

py::object witness_or_none(const CheckResult& r, const Constraint& c) {
    if (!r) return py::none();
    const PrefPool& pool = pref_pool(c.objects());
    py::dict d;
    d["axiom"] = to_string(r->kind);
    d["profile"] = r->profile;
    d["coalition"] = r->coalition;
    Rows mis;
    for (PrefIndex p : r->misreports) {
        auto o = pool.order(p);
        mis.emplace_back(o.begin(), o.end());
    }
    d["misreports"] = mis;
    d["before"] = c.decode(r->before);
    d["after"] = c.decode(r->after);
    return d;
}

}  // namespace

PYBIND11_MODULE(_mechkit, m) {
    m.doc() = "feasibility-constrained allocation mechanisms";

    py::class_<Constraint, std::shared_ptr<Constraint>>(m, "Constraint")
        .def(py::init([](int n, int m_, const Rows& feasible) {
                 std::vector<Allocation> allocs(feasible.begin(), feasible.end());
                 return std::make_shared<Constraint>(n, m_, allocs);
             }),
             py::arg("agents"), py::arg("objects"), py::arg("feasible"))
        .def_property_readonly("agents", &Constraint::agents)
        .def_property_readonly("objects", &Constraint::objects)
        .def("feasible", [](const Constraint& c) { return rows_of(c, c.feasible()); })
        .def("contains",
             [](const Constraint& c, const std::vector<ObjectId>& a) { return c.contains(c.encode(a)); })
        .def("always_infeasible",
             [](const Constraint& c, AgentId i) { return always_infeasible(c, i); },
             py::arg("agent"))
        .def("single_compromising", [](const Constraint& c) { return is_single_compromising(c); })
        .def("__len__", &Constraint::feasible_count)
        .def("__repr__", [](const Constraint& c) {
            return "Constraint(agents=" + std::to_string(c.agents()) +
                   ", objects=" + std::to_string(c.objects()) +
                   ", feasible=" + std::to_string(c.feasible_count()) + ")";
        });

    m.def(
        "builtin",
        [](const std::string& kind, int n, int m_) {
            const auto k = builtin_kind_from_string(kind);
            if (!k) throw ArgumentError("unknown builtin constraint '" + kind + "'");
            return std::make_shared<Constraint>(builtin_constraint(*k, n, m_));
        },
        py::arg("kind"), py::arg("agents"), py::arg("objects"));

    m.def(
        "decompose",
        [](std::shared_ptr<Constraint> c) {
            const BlockDecomposition d = decompose(*c);
            py::dict out;
            out["r1"] = d.r1;
            out["r2"] = d.r2;
            out["cstar"] = d.cstar;
            out["blocks"] = d.blocks;
            out["count_sp_pe"] = count_sp_pe(d);
            return out;
        },
        py::arg("constraint"));

    m.def(
        "serial_dictatorship",
        [](std::shared_ptr<Constraint> c, std::vector<AgentId> order) {
            return rows_of(*c, tabulate(serial_dictatorship(c, std::move(order))).table);
        },
        py::arg("constraint"), py::arg("order"));

    m.def(
        "gsd",
        [](std::shared_ptr<Constraint> c, std::vector<AgentId> order,
           const std::map<std::vector<ObjectId>, AgentId>& overrides) {
            GsdOrdering zeta = overrides.empty() ? GsdOrdering(std::move(order))
                                                 : GsdOrdering(std::move(order), overrides);
            return rows_of(*c, tabulate(gsd(c, std::move(zeta))).table);
        },
        py::arg("constraint"), py::arg("order"),
        py::arg("overrides") = std::map<std::vector<ObjectId>, AgentId>{});

    m.def(
        "local_dictatorships",
        [](std::shared_ptr<Constraint> c) { return rows_of_set(enumerate_local_dictatorships(*c)); },
        py::arg("constraint"));

    m.def(
        "gsds",
        [](std::shared_ptr<Constraint> c, std::uint64_t policy_budget) {
            return rows_of_set(enumerate_gsd(c, policy_budget));
        },
        py::arg("constraint"), py::arg("policy_budget") = 1'000'000);

    m.def(
        "check",
        [](std::shared_ptr<Constraint> c, const Rows& rows, const std::string& axiom, bool fast_gsp) {
            const TabulatedMechanism t{c, table_of(*c, rows)};
            return witness_or_none(run_check(axiom_arg(axiom), t, fast_gsp), *c);
        },
        py::arg("constraint"), py::arg("table"), py::arg("axiom"), py::arg("fast_gsp") = false,
        "Returns None when the axiom holds, else a witness dict.");

    m.def(
        "search",
        [](std::shared_ptr<Constraint> c, const std::vector<std::string>& axioms,
           std::uint64_t node_budget, double budget_seconds, std::uint64_t profile_limit) {
            SearchSpec spec;
            spec.constraint = c;
            spec.node_budget = node_budget;
            spec.budget_seconds = budget_seconds;
            spec.profile_limit = profile_limit;
            for (const auto& name : axioms) {
                switch (axiom_arg(name)) {
                    case Axiom::sp: spec.sp = true; break;
                    case Axiom::gsp: spec.gsp = true; break;
                    case Axiom::pe: spec.pe = true; break;
                    case Axiom::pe_on_image: spec.pe_on_image = true; break;
                    default: throw ArgumentError("search supports sp, gsp, pe, pe-on-image");
                }
            }
            return rows_of_set(mechkit::search(spec));
        },
        py::arg("constraint"), py::arg("axioms"), py::arg("node_budget") = kDefaultNodeBudget,
        py::arg("budget_seconds") = 0.0, py::arg("profile_limit") = kDefaultProfileLimit,
        "All mechanism tables over the constraint satisfying every listed axiom.");

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
}
