#include "mechkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mechkit {

namespace {

struct Lines {
    std::string origin;
    int lineno = 0;
    std::istream& in;

    // next non-blank, non-comment line split into tokens; empty at EOF
    std::vector<std::string> next() {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            std::vector<std::string> toks;
            std::istringstream ss(line);
            std::string t;
            while (ss >> t) toks.push_back(t);
            if (toks.empty() || toks[0][0] == '#') continue;
            return toks;
        }
        return {};
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(origin + ":" + std::to_string(lineno) + ": " + msg);
    }
};

int parse_int(Lines& src, const std::string& tok) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        src.fail("expected an integer, got '" + tok + "'");
    }
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') { parts.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    parts.push_back(cur);
    return parts;
}

AllocIndex parse_allocation(Lines& src, const std::string& tok, const Instance& inst) {
    const auto parts = split_commas(tok);
    if (static_cast<int>(parts.size()) != inst.constraint->agents())
        src.fail("allocation needs one object per agent");
    std::vector<ObjectId> a;
    for (const auto& p : parts) {
        try { a.push_back(inst.id_of(p)); }
        catch (const ParseError& e) { src.fail(e.what()); }
    }
    return inst.constraint->encode(a);
}

AgentId parse_agent(Lines& src, const std::string& tok, int n) {
    const int v = parse_int(src, tok);
    if (v < 0 || v >= n) src.fail("agent index out of range: " + tok);
    return v;
}

}  // namespace

ObjectId Instance::id_of(const std::string& name) const {
    const auto it = std::ranges::find(objects, name);
    if (it == objects.end()) throw ParseError("unknown object name '" + name + "'");
    return static_cast<ObjectId>(it - objects.begin());
}

Instance parse_instance(std::istream& in, const std::string& origin) {
    Lines src{origin, 0, in};
    auto toks = src.next();
    if (toks.size() != 2 || toks[0] != "mechkit-instance" || toks[1] != "1")
        src.fail("expected header 'mechkit-instance 1'");

    int n = -1;
    Instance inst;
    toks = src.next();
    if (toks.size() != 2 || toks[0] != "agents") src.fail("expected 'agents <n>'");
    n = parse_int(src, toks[1]);
    if (n < 1) src.fail("need at least one agent");

    toks = src.next();
    if (toks.size() < 2 || toks[0] != "objects") src.fail("expected 'objects <name>...'");
    inst.objects.assign(toks.begin() + 1, toks.end());
    for (std::size_t i = 0; i < inst.objects.size(); ++i)
        for (std::size_t j = i + 1; j < inst.objects.size(); ++j)
            if (inst.objects[i] == inst.objects[j])
                src.fail("duplicate object name '" + inst.objects[i] + "'");
    const int m = static_cast<int>(inst.objects.size());

    toks = src.next();
    if (toks.size() < 2 || toks[0] != "constraint") src.fail("expected 'constraint builtin|explicit'");
    if (toks[1] == "builtin") {
        if (toks.size() != 3) src.fail("expected 'constraint builtin <kind>'");
        const auto kind = builtin_kind_from_string(toks[2]);
        if (!kind) src.fail("unknown builtin constraint '" + toks[2] + "'");
        inst.builtin = *kind;
        inst.constraint = std::make_shared<Constraint>(builtin_constraint(*kind, n, m));
    } else if (toks[1] == "explicit") {
        std::vector<Allocation> feasible;
        for (;;) {
            toks = src.next();
            if (toks.empty()) src.fail("explicit constraint not terminated by 'end'");
            if (toks[0] == "end") break;
            if (toks[0] != "allow" || static_cast<int>(toks.size()) != n + 1)
                src.fail("expected 'allow <object>' with one object per agent");
            Allocation a;
            for (int i = 0; i < n; ++i) {
                try { a.push_back(inst.id_of(toks[static_cast<size_t>(i) + 1])); }
                catch (const ParseError& e) { src.fail(e.what()); }
            }
            feasible.push_back(std::move(a));
        }
        if (feasible.empty()) src.fail("constraint must be nonempty");
        inst.constraint = std::make_shared<Constraint>(n, m, feasible);
    } else {
        src.fail("expected 'constraint builtin|explicit'");
    }
    return inst;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file " + path.string());
    return parse_instance(in, path.filename().string());
}

namespace {

GsdOrdering parse_gsd_lines(Lines& src, const Instance& inst,
                            std::vector<std::vector<std::string>>& pending) {
    const int n = inst.constraint->agents();
    std::vector<AgentId> order;
    std::map<std::vector<ObjectId>, AgentId> overrides;
    bool have_order = false;
    for (;;) {
        auto toks = src.next();
        if (toks.empty()) break;
        if (toks[0] == "order") {
            if (static_cast<int>(toks.size()) != n + 1) src.fail("order needs one entry per agent");
            order.clear();
            for (int i = 0; i < n; ++i) order.push_back(parse_agent(src, toks[static_cast<size_t>(i) + 1], n));
            have_order = true;
        } else if (toks[0] == "zeta") {
            if (toks.size() != 3) src.fail("expected 'zeta <key> <agent>'");
            std::vector<ObjectId> slots(static_cast<size_t>(n), -1);
            if (toks[1] != "-") {
                for (const auto& part : split_commas(toks[1])) {
                    const auto sep = part.find(':');
                    if (sep == std::string::npos) src.fail("zeta key entries look like agent:object");
                    const AgentId i = parse_agent(src, part.substr(0, sep), n);
                    try { slots[static_cast<size_t>(i)] = inst.id_of(part.substr(sep + 1)); }
                    catch (const ParseError& e) { src.fail(e.what()); }
                }
            }
            overrides[slots] = parse_agent(src, toks[2], n);
        } else {
            pending.push_back(std::move(toks));
        }
    }
    if (!have_order) src.fail("missing 'order' line");
    return overrides.empty() ? GsdOrdering(order) : GsdOrdering(order, overrides);
}

}  // namespace

Mechanism parse_mechanism(std::istream& in, const std::string& origin, const Instance& inst,
                          const std::filesystem::path& base_dir) {
    Lines src{origin, 0, in};
    const int n = inst.constraint->agents();
    auto toks = src.next();
    if (toks.size() != 2 || toks[0] != "mechkit-mechanism" || toks[1] != "1")
        src.fail("expected header 'mechkit-mechanism 1'");
    toks = src.next();
    if (toks.size() != 2 || toks[0] != "type") src.fail("expected 'type <kind>'");
    const std::string type = toks[1];

    if (type == "serial-dictatorship") {
        toks = src.next();
        if (toks.empty() || toks[0] != "order" || static_cast<int>(toks.size()) != n + 1)
            src.fail("expected 'order' with one entry per agent");
        std::vector<AgentId> order;
        for (int i = 0; i < n; ++i) order.push_back(parse_agent(src, toks[static_cast<size_t>(i) + 1], n));
        return serial_dictatorship(inst.constraint, order);
    }

    if (type == "gsd") {
        std::vector<std::vector<std::string>> extra;
        GsdOrdering zeta = parse_gsd_lines(src, inst, extra);
        if (!extra.empty()) src.fail("unexpected line in gsd file: " + extra[0][0]);
        return gsd(inst.constraint, std::move(zeta));
    }

    if (type == "local-dictatorship") {
        const BlockDecomposition d = decompose(*inst.constraint);
        toks = src.next();
        if (toks.empty() || toks[0] != "dictators" || toks.size() != d.blocks.size() + 1)
            src.fail("expected 'dictators' with one agent per block (" +
                     std::to_string(d.blocks.size()) + " blocks)");
        std::vector<AgentId> dictators;
        for (std::size_t b = 0; b < d.blocks.size(); ++b)
            dictators.push_back(parse_agent(src, toks[b + 1], n));
        return local_dictatorship(inst.constraint, d, dictators);
    }

    if (type == "constraint-traversing") {
        CompromiserAssignment alpha;
        for (;;) {
            toks = src.next();
            if (toks.empty()) break;
            if (toks[0] != "alpha" || toks.size() < 2) src.fail("expected 'alpha <allocation> <agent>...'");
            const AllocIndex a = parse_allocation(src, toks[1], inst);
            std::vector<AgentId> agents;
            for (std::size_t t = 2; t < toks.size(); ++t)
                agents.push_back(parse_agent(src, toks[t], n));
            alpha.map[a] = std::move(agents);
        }
        return constraint_traversing(inst.constraint, std::move(alpha));
    }

    if (type == "extend") {
        toks = src.next();
        if (toks.size() < 2 || toks[0] != "agents") src.fail("expected 'agents <id>...'");
        std::vector<AgentId> m_agents;
        for (std::size_t t = 1; t < toks.size(); ++t)
            m_agents.push_back(parse_agent(src, toks[t], n));
        toks = src.next();
        if (toks.size() != 2 || toks[0] != "sub") src.fail("expected 'sub <mechanism file>'");
        const std::filesystem::path sub_path = base_dir / toks[1];

        Projection proj = project(*inst.constraint, m_agents);
        Instance sub_inst{std::make_shared<Constraint>(std::move(proj.constraint)), inst.objects, {}};
        const Mechanism f_m = load_mechanism(sub_path, sub_inst);

        std::vector<std::vector<std::string>> extra;
        GsdOrdering zeta = parse_gsd_lines(src, inst, extra);
        if (!extra.empty()) src.fail("unexpected line in extend file: " + extra[0][0]);
        return extend(f_m, m_agents, inst.constraint, std::move(zeta));
    }

    if (type == "table") {
        const std::uint64_t count = checked_pow(factorial(inst.constraint->objects()), n, UINT64_MAX);
        std::vector<AllocIndex> table;
        for (;;) {
            toks = src.next();
            if (toks.empty()) break;
            if (toks[0] != "assign" || toks.size() != 2) src.fail("expected 'assign <allocation>'");
            table.push_back(parse_allocation(src, toks[1], inst));
        }
        if (table.size() != count)
            src.fail("table needs " + std::to_string(count) + " rows, got " + std::to_string(table.size()));
        return from_table(TabulatedMechanism{inst.constraint, std::move(table)});
    }

    src.fail("unknown mechanism type '" + type + "'");
}

Mechanism load_mechanism(const std::filesystem::path& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mechanism file " + path.string());
    return parse_mechanism(in, path.filename().string(), inst, path.parent_path());
}

void write_table_mechanism(std::ostream& out, const TabulatedMechanism& t, const Instance& inst) {
    out << "mechkit-mechanism 1\n";
    out << "type table\n";
    std::vector<ObjectId> a(static_cast<size_t>(t.agents()));
    for (AllocIndex idx : t.table) {
        t.constraint->decode_into(idx, a);
        out << "assign ";
        for (std::size_t i = 0; i < a.size(); ++i)
            out << (i ? "," : "") << inst.name_of(a[i]);
        out << "\n";
    }
}

std::string render_grid(const Instance& inst, const BlockDecomposition& d) {
    const Constraint& c = *inst.constraint;
    if (c.agents() != 2) throw ArgumentError("grid rendering needs exactly 2 agents");
    const int m = c.objects();
    const auto [rows, cols] = block_diagonal_order(d);

    std::vector<bool> in_r1(static_cast<size_t>(m), false), in_r2(static_cast<size_t>(m), false);
    for (ObjectId x : d.r1) in_r1[static_cast<size_t>(x)] = true;
    for (ObjectId y : d.r2) in_r2[static_cast<size_t>(y)] = true;

    std::vector<int> block_of(static_cast<size_t>(m) * m, -1);
    for (std::size_t b = 0; b < d.blocks.size(); ++b)
        for (const auto& [x, y] : d.blocks[b])
            block_of[static_cast<size_t>(x) * m + static_cast<size_t>(y)] = static_cast<int>(b);

    std::size_t w = 1;
    for (const auto& name : inst.objects) w = std::max(w, name.size());
    const std::size_t lw = w + 1;  // room for the '*' marker
    auto pad = [](const std::string& s, std::size_t width) {
        return s + std::string(width - std::min(width, s.size()), ' ');
    };

    std::ostringstream out;
    auto emit = [&out](std::string line) {
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    };
    std::string line = pad("", lw);
    for (ObjectId y : cols)
        line += ' ' + pad(inst.name_of(y) + (in_r2[static_cast<size_t>(y)] ? "*" : ""), lw);
    emit(line);
    ObjectId buf[2];
    for (ObjectId x : rows) {
        line = pad(inst.name_of(x) + (in_r1[static_cast<size_t>(x)] ? "*" : ""), lw);
        for (ObjectId y : cols) {
            char ch;
            buf[0] = x; buf[1] = y;
            if (in_r1[static_cast<size_t>(x)] || in_r2[static_cast<size_t>(y)]) ch = '#';
            else if (c.contains(std::span<const ObjectId>(buf, 2))) ch = '.';
            else {
                const int b = block_of[static_cast<size_t>(x) * m + static_cast<size_t>(y)];
                ch = b < 26 ? static_cast<char>('A' + b) : '?';
            }
            line += ' ' + pad(std::string(1, ch), lw);
        }
        emit(line);
    }
    return out.str();
}

nlohmann::json to_json(const BlockDecomposition& d, const Instance& inst) {
    nlohmann::json j;
    j["objects"] = inst.objects;
    auto names = [&](const std::vector<ObjectId>& xs) {
        std::vector<std::string> out;
        for (ObjectId x : xs) out.push_back(inst.name_of(x));
        return out;
    };
    j["r1"] = names(d.r1);
    j["r2"] = names(d.r2);
    nlohmann::json cstar = nlohmann::json::array();
    for (const auto& [x, y] : d.cstar) cstar.push_back({inst.name_of(x), inst.name_of(y)});
    j["cstar"] = cstar;
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& [x, y] : d.blocks[b]) cells.push_back({inst.name_of(x), inst.name_of(y)});
        blocks.push_back({{"label", "E" + std::to_string(b + 1)}, {"cells", cells}});
    }
    j["blocks"] = blocks;
    j["count_sp_pe"] = count_sp_pe(d);
    return j;
}

nlohmann::json allocation_json(const Constraint& c, AllocIndex a, const Instance& inst) {
    nlohmann::json j = nlohmann::json::array();
    for (ObjectId x : c.decode(a)) j.push_back(inst.name_of(x));
    return j;
}

nlohmann::json to_json(const Witness& w, const Instance& inst) {
    const Constraint& c = *inst.constraint;
    const PrefPool& pool = pref_pool(c.objects());
    nlohmann::json j;
    j["axiom"] = to_string(w.kind);
    j["profile_index"] = w.profile;
    std::vector<PrefIndex> prefs(static_cast<size_t>(c.agents()));
    profile_decode(pool, c.agents(), w.profile, prefs);
    nlohmann::json prof = nlohmann::json::array();
    for (PrefIndex p : prefs) {
        std::vector<std::string> order;
        for (ObjectId x : pool.order(p)) order.push_back(inst.name_of(x));
        prof.push_back(order);
    }
    j["profile"] = prof;
    j["coalition"] = w.coalition;
    nlohmann::json mis = nlohmann::json::array();
    for (PrefIndex p : w.misreports) {
        std::vector<std::string> order;
        for (ObjectId x : pool.order(p)) order.push_back(inst.name_of(x));
        mis.push_back(order);
    }
    j["misreports"] = mis;
    j["before"] = allocation_json(c, w.before, inst);
    j["after"] = allocation_json(c, w.after, inst);
    return j;
}

}  // namespace mechkit
