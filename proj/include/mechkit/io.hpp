#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mechkit/blocks.hpp"
#include "mechkit/checkers.hpp"
#include "mechkit/mechanism.hpp"

namespace mechkit {

// A constraint together with its user-facing object names.
struct Instance {
    std::shared_ptr<const Constraint> constraint;
    std::vector<std::string> objects;
    std::optional<BuiltinKind> builtin;

    const std::string& name_of(ObjectId x) const { return objects[static_cast<size_t>(x)]; }
    ObjectId id_of(const std::string& name) const;  // ParseError if unknown
};

Instance parse_instance(std::istream& in, const std::string& origin);
Instance load_instance(const std::filesystem::path& path);

// Mechanism files may reference a sub-mechanism file; relative references
// resolve against base_dir.
Mechanism parse_mechanism(std::istream& in, const std::string& origin, const Instance& inst,
                          const std::filesystem::path& base_dir);
Mechanism load_mechanism(const std::filesystem::path& path, const Instance& inst);

void write_table_mechanism(std::ostream& out, const TabulatedMechanism& t, const Instance& inst);

// Character grid of a two-agent constraint in block-diagonalized order.
// Feasible cells '.', reduced infeasible cells carry their block letter,
// rows/columns of never-assignable objects are marked '#' (and '*' on the
// label).
std::string render_grid(const Instance& inst, const BlockDecomposition& d);

nlohmann::json to_json(const BlockDecomposition& d, const Instance& inst);
nlohmann::json to_json(const Witness& w, const Instance& inst);
nlohmann::json allocation_json(const Constraint& c, AllocIndex a, const Instance& inst);

}  // namespace mechkit
