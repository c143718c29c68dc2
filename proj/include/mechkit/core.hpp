#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mechkit/common.hpp"

namespace mechkit {

// An allocation of one object to every agent, agent i -> assignment[i].
using Allocation = std::vector<ObjectId>;

// A partial assignment: agents absent from the map are unassigned.
class Suballocation {
public:
    Suballocation() = default;
    Suballocation(int n, ObjectId unset = -1) : slots_(n, unset) {}

    void assign(AgentId i, ObjectId x) { slots_[static_cast<size_t>(i)] = x; }
    void unassign(AgentId i) { slots_[static_cast<size_t>(i)] = -1; }
    bool assigned(AgentId i) const { return slots_[static_cast<size_t>(i)] >= 0; }
    ObjectId at(AgentId i) const { return slots_[static_cast<size_t>(i)]; }
    int agents() const { return static_cast<int>(slots_.size()); }
    bool complete() const;
    int assigned_count() const;

    // Stable key for maps: -1 for unassigned slots.
    const std::vector<ObjectId>& slots() const { return slots_; }
    bool operator==(const Suballocation&) const = default;

private:
    std::vector<ObjectId> slots_;
};

// A nonempty set of feasible allocations over n agents and m objects, stored
// extensionally as a bitset over m^n mixed-radix allocation indices.
class Constraint {
public:
    Constraint(int n, int m, const std::vector<Allocation>& feasible);
    Constraint(int n, int m, std::vector<AllocIndex> feasible_sorted_unique);

    int agents() const { return n_; }
    int objects() const { return m_; }
    std::uint64_t total_allocations() const { return total_; }
    std::size_t feasible_count() const { return feasible_.size(); }
    const std::vector<AllocIndex>& feasible() const { return feasible_; }

    bool contains(AllocIndex a) const {
        return (bits_[a >> 6] >> (a & 63)) & 1u;
    }
    bool contains(std::span<const ObjectId> a) const { return contains(encode(a)); }

    AllocIndex encode(std::span<const ObjectId> a) const;
    Allocation decode(AllocIndex idx) const;
    void decode_into(AllocIndex idx, std::span<ObjectId> out) const;

    // Bitset words (m^n bits) of allocations assigning object x to agent i.
    std::span<const std::uint64_t> mask(AgentId i, ObjectId x) const;
    std::span<const std::uint64_t> bits() const { return bits_; }
    std::size_t words() const { return bits_.size(); }

    bool operator==(const Constraint& o) const {
        return n_ == o.n_ && m_ == o.m_ && feasible_ == o.feasible_;
    }

private:
    void build(std::vector<AllocIndex> idx);

    int n_ = 0, m_ = 0;
    std::uint64_t total_ = 0;
    std::vector<AllocIndex> feasible_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> masks_;  // (i*m + x) * words .. contiguous
};

struct Projection {
    Constraint constraint;
    std::vector<AgentId> agents;  // original index of each projected agent, ascending
};

// C^M: the projection of c on the given agents, re-indexed to 0..|M|-1.
Projection project(const Constraint& c, const std::vector<AgentId>& agents);

// C(mu): all feasible allocations agreeing with mu on its domain.
std::vector<AllocIndex> feasible_extensions(const Constraint& c, const Suballocation& mu);

// In-place variant working on the constraint's bitset; returns feasible indices.
void feasible_extension_bits(const Constraint& c, const Suballocation& mu,
                             std::vector<std::uint64_t>& out);

// R_i: objects never assigned to agent i in any feasible allocation.
std::vector<ObjectId> always_infeasible(const Constraint& c, AgentId i);

// True iff from every infeasible allocation, every single agent can
// unilaterally move to some object restoring feasibility.
bool is_single_compromising(const Constraint& c);

enum class BuiltinKind { house_allocation, roommates, social_choice, complement_diagonal };

Constraint builtin_constraint(BuiltinKind kind, int n, int m);

std::optional<BuiltinKind> builtin_kind_from_string(const std::string& s);
std::string to_string(BuiltinKind k);

}  // namespace mechkit
