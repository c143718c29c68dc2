// Command-line front end: decompose, check, search, run, enumerate.
// Exit codes: 0 pass, 1 axiom failure or set inequality, 2 usage or parse
// error, 3 resource budget exhausted.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mechkit/checkers.hpp"
#include "mechkit/io.hpp"
#include "mechkit/search.hpp"

using nlohmann::json;

namespace {

struct Options {
    std::string instance_path;
    std::string mechanism_path;
    std::string axioms;
    std::string engine = "naive";
    std::string compare = "none";
    std::string format = "text";
    std::string agents_pair = "0,1";
    std::string profile;
    std::string family = "gsd";
    std::uint64_t budget_nodes = mechkit::kDefaultNodeBudget;
    double budget_seconds = 0;
    std::uint64_t profile_limit = mechkit::kDefaultProfileLimit;
    int threads = 0;
    bool quiet_split = false;
    bool print_tables = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) { out.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    out.push_back(cur);
    return out;
}

std::vector<mechkit::Axiom> parse_axioms(const std::string& list) {
    std::vector<mechkit::Axiom> out;
    for (const auto& tok : split(list, ',')) {
        if (tok.empty()) continue;
        const auto a = mechkit::axiom_from_string(tok);
        if (!a) throw mechkit::ParseError("unknown axiom '" + tok + "'");
        out.push_back(*a);
    }
    if (out.empty()) throw mechkit::ParseError("no axioms requested");
    return out;
}

// Human text goes to stdout in text mode; in machine mode it goes to stderr
// and only when --quiet-split asks for it.
struct Reporter {
    bool machine;
    bool quiet_split;
    std::ostream& human() {
        static std::ostream null_stream(nullptr);
        if (!machine) return std::cout;
        return quiet_split ? std::cerr : null_stream;
    }
    void finish(const json& doc) const {
        if (machine) std::cout << doc.dump(2) << "\n";
    }
};

json table_json(const mechkit::Constraint& c, const std::vector<mechkit::AllocIndex>& table,
                const mechkit::Instance& inst) {
    json rows = json::array();
    for (mechkit::AllocIndex a : table) rows.push_back(mechkit::allocation_json(c, a, inst));
    return rows;
}

int cmd_decompose(const Options& opt) {
    const mechkit::Instance inst = mechkit::load_instance(opt.instance_path);
    mechkit::Instance two = inst;
    if (inst.constraint->agents() != 2) {
        const auto parts = split(opt.agents_pair, ',');
        if (parts.size() != 2) throw mechkit::ParseError("--agents wants 'i,j'");
        const std::vector<mechkit::AgentId> pair{std::stoi(parts[0]), std::stoi(parts[1])};
        auto proj = mechkit::project(*inst.constraint, pair);
        two.constraint = std::make_shared<mechkit::Constraint>(std::move(proj.constraint));
    }
    const mechkit::BlockDecomposition d = mechkit::decompose(*two.constraint);
    Reporter rep{opt.format == "machine", opt.quiet_split};

    auto name_list = [&](const std::vector<mechkit::ObjectId>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + two.name_of(xs[i]);
        return s.empty() ? std::string("-") : s;
    };
    auto& out = rep.human();
    out << "R1: " << name_list(d.r1) << "\n";
    out << "R2: " << name_list(d.r2) << "\n";
    out << "reduced infeasible cells: " << d.cstar.size() << "\n";
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        out << "E" << b + 1 << ":";
        for (const auto& [x, y] : d.blocks[b])
            out << " (" << two.name_of(x) << "," << two.name_of(y) << ")";
        out << "\n";
    }
    out << "blocks: " << d.blocks.size() << "\n";
    out << "sp+pe mechanisms: " << mechkit::count_sp_pe(d) << "\n";
    if (opt.format == "grid" || opt.format == "text")
        std::cout << mechkit::render_grid(two, d);

    json doc = mechkit::to_json(d, two);
    if (opt.format == "machine") doc["grid"] = mechkit::render_grid(two, d);
    rep.finish(doc);
    return 0;
}

int cmd_check(const Options& opt) {
    const mechkit::Instance inst = mechkit::load_instance(opt.instance_path);
    const mechkit::Mechanism f = mechkit::load_mechanism(opt.mechanism_path, inst);
    const auto axioms = parse_axioms(opt.axioms);
    const mechkit::TabulatedMechanism t = mechkit::tabulate(f, opt.budget_nodes, opt.threads);
    Reporter rep{opt.format == "machine", opt.quiet_split};

    bool all_pass = true;
    json results = json::array();
    for (const auto a : axioms) {
        const auto w = mechkit::run_check(a, t, opt.engine == "fast");
        json r{{"axiom", mechkit::to_string(a)}, {"pass", !w.has_value()}};
        rep.human() << mechkit::to_string(a) << ": " << (w ? "FAIL" : "pass") << "\n";
        if (w) {
            all_pass = false;
            r["witness"] = mechkit::to_json(*w, inst);
            rep.human() << "  witness at profile " << w->profile << "\n";
        }
        results.push_back(std::move(r));
    }
    rep.finish(json{{"results", results}, {"all_pass", all_pass}});
    return all_pass ? 0 : 1;
}

int cmd_search(const Options& opt) {
    const mechkit::Instance inst = mechkit::load_instance(opt.instance_path);
    mechkit::SearchSpec spec;
    spec.constraint = inst.constraint;
    spec.node_budget = opt.budget_nodes;
    spec.budget_seconds = opt.budget_seconds;
    spec.profile_limit = opt.profile_limit;
    for (const auto a : parse_axioms(opt.axioms)) {
        switch (a) {
            case mechkit::Axiom::sp: spec.sp = true; break;
            case mechkit::Axiom::gsp: spec.gsp = true; break;
            case mechkit::Axiom::pe: spec.pe = true; break;
            case mechkit::Axiom::pe_on_image: spec.pe_on_image = true; break;
            default:
                throw mechkit::ParseError("search supports sp, gsp, pe, pe-on-image");
        }
    }
    const mechkit::MechanismSet found = mechkit::search(spec);
    Reporter rep{opt.format == "machine", opt.quiet_split};
    rep.human() << "mechanisms: " << found.size() << "\n";

    json doc{{"count", found.size()}};
    if (opt.print_tables) {
        json tables = json::array();
        for (const auto& t : found.tables) tables.push_back(table_json(*inst.constraint, t, inst));
        doc["tables"] = tables;
    }

    int status = 0;
    if (opt.compare != "none") {
        mechkit::MechanismSet other;
        if (opt.compare == "local_dictatorships")
            other = mechkit::enumerate_local_dictatorships(*inst.constraint);
        else if (opt.compare == "gsd")
            other = mechkit::enumerate_gsd(inst.constraint, opt.budget_nodes, opt.budget_nodes);
        else
            throw mechkit::ParseError("--compare wants none, local_dictatorships or gsd");
        const mechkit::SetDiff diff = mechkit::set_equal(found, other);
        rep.human() << opt.compare << ": " << other.size() << "\n";
        rep.human() << "sets " << (diff.equal ? "equal" : "differ") << " (search only: "
                    << diff.only_a.size() << ", " << opt.compare << " only: " << diff.only_b.size()
                    << ")\n";
        doc["compare"] = {{"family", opt.compare},
                          {"family_count", other.size()},
                          {"equal", diff.equal},
                          {"search_only", diff.only_a.size()},
                          {"family_only", diff.only_b.size()}};
        if (!diff.equal) status = 1;
    }
    rep.finish(doc);
    return status;
}

int cmd_run(const Options& opt) {
    const mechkit::Instance inst = mechkit::load_instance(opt.instance_path);
    const mechkit::Mechanism f = mechkit::load_mechanism(opt.mechanism_path, inst);
    const int n = inst.constraint->agents();
    const auto per_agent = split(opt.profile, ';');
    if (static_cast<int>(per_agent.size()) != n)
        throw mechkit::ParseError("profile needs rankings for " + std::to_string(n) +
                                  " agents separated by ';'");
    mechkit::Profile profile;
    for (int i = 0; i < n; ++i) {
        std::vector<mechkit::ObjectId> order;
        for (const auto& name : split(per_agent[static_cast<size_t>(i)], '>'))
            order.push_back(inst.id_of(name));
        try {
            profile.emplace_back(std::move(order));
        } catch (const mechkit::ArgumentError& e) {
            throw mechkit::ParseError("agent " + std::to_string(i) + ": " + e.what());
        }
    }
    const mechkit::Allocation a = f.assign(profile);
    Reporter rep{opt.format == "machine", opt.quiet_split};
    json doc;
    json ja = json::array();
    for (int i = 0; i < n; ++i) {
        rep.human() << "agent" << i << ": " << inst.name_of(a[static_cast<size_t>(i)]) << "\n";
        ja.push_back(inst.name_of(a[static_cast<size_t>(i)]));
    }
    doc["allocation"] = ja;
    rep.finish(doc);
    return 0;
}

int cmd_enumerate(const Options& opt) {
    const mechkit::Instance inst = mechkit::load_instance(opt.instance_path);
    mechkit::MechanismSet set;
    if (opt.family == "gsd")
        set = mechkit::enumerate_gsd(inst.constraint, opt.budget_nodes, opt.budget_nodes);
    else if (opt.family == "local_dictatorships")
        set = mechkit::enumerate_local_dictatorships(*inst.constraint);
    else
        throw mechkit::ParseError("--family wants gsd or local_dictatorships");
    Reporter rep{opt.format == "machine", opt.quiet_split};
    rep.human() << "distinct tables: " << set.size() << "\n";
    json doc{{"family", opt.family}, {"count", set.size()}};
    if (opt.print_tables) {
        json tables = json::array();
        for (const auto& t : set.tables) tables.push_back(table_json(*inst.constraint, t, inst));
        doc["tables"] = tables;
        if (opt.format != "machine")
            for (const auto& t : set.tables)
                mechkit::write_table_mechanism(std::cout, {inst.constraint, t}, inst);
    }
    rep.finish(doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    if (const char* env = std::getenv("MECHKIT_BUDGET_NODES")) {
        try {
            opt.budget_nodes = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "invalid MECHKIT_BUDGET_NODES\n";
            return 2;
        }
    }

    CLI::App app{"feasibility-constrained allocation mechanism toolkit"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool needs_instance) {
        auto* o = sub->add_option("--instance", opt.instance_path, "instance file");
        if (needs_instance) o->required();
        sub->add_option("--budget-nodes", opt.budget_nodes, "node/table budget");
        sub->add_option("--budget-seconds", opt.budget_seconds, "wall-clock budget");
        sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
        sub->add_option("--format", opt.format, "text|grid|machine")
            ->check(CLI::IsMember({"text", "grid", "machine"}));
        sub->add_flag("--quiet-split", opt.quiet_split, "human text to stderr in machine mode");
    };

    auto* dec = app.add_subcommand("decompose", "block decomposition of a 2-agent constraint");
    add_common(dec, true);
    dec->add_option("--agents", opt.agents_pair, "agent pair i,j for n>2 instances");

    auto* chk = app.add_subcommand("check", "verify axioms for a mechanism");
    add_common(chk, true);
    chk->add_option("--mechanism", opt.mechanism_path, "mechanism file")->required();
    chk->add_option("--axioms", opt.axioms, "comma-separated axiom list")->required();
    chk->add_option("--engine", opt.engine, "gsp engine: naive|fast")
        ->check(CLI::IsMember({"naive", "fast"}));

    auto* sea = app.add_subcommand("search", "enumerate all mechanisms satisfying axioms");
    add_common(sea, true);
    sea->add_option("--axioms", opt.axioms, "comma-separated axiom list")->required();
    sea->add_option("--compare", opt.compare, "none|local_dictatorships|gsd");
    sea->add_option("--profile-limit", opt.profile_limit, "max (m!)^n");
    sea->add_flag("--print-tables", opt.print_tables, "include per-mechanism tables");

    auto* run = app.add_subcommand("run", "evaluate a mechanism at one profile");
    add_common(run, true);
    run->add_option("--mechanism", opt.mechanism_path, "mechanism file")->required();
    run->add_option("--profile", opt.profile, "rankings 'a>b>c;c>b>a'")->required();

    auto* enu = app.add_subcommand("enumerate", "enumerate a mechanism family");
    add_common(enu, true);
    enu->add_option("--family", opt.family, "gsd|local_dictatorships");
    enu->add_flag("--print-tables", opt.print_tables, "write each table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dec->parsed()) return cmd_decompose(opt);
        if (chk->parsed()) return cmd_check(opt);
        if (sea->parsed()) return cmd_search(opt);
        if (run->parsed()) return cmd_run(opt);
        if (enu->parsed()) return cmd_enumerate(opt);
    } catch (const mechkit::BudgetError& e) {
        std::cerr << "resource budget exceeded: " << e.what() << " (required " << e.required
                  << ")\n";
        return 3;
    } catch (const mechkit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mechkit::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
