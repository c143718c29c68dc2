#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "mechkit/mechanism.hpp"

namespace mechkit {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;
inline constexpr std::uint64_t kDefaultProfileLimit = 2'000;

struct SearchSpec {
    std::shared_ptr<const Constraint> constraint;
    bool sp = false;
    bool gsp = false;
    bool pe = false;
    bool pe_on_image = false;
    bool surjective = false;
    std::uint64_t node_budget = kDefaultNodeBudget;
    double budget_seconds = 0;  // 0 = unlimited
    std::uint64_t profile_limit = kDefaultProfileLimit;
};

// Duplicate-free, sorted collection of mechanism tables over one constraint.
struct MechanismSet {
    std::shared_ptr<const Constraint> constraint;
    std::vector<std::vector<AllocIndex>> tables;

    void insert(std::vector<AllocIndex> table);
    bool contains(const std::vector<AllocIndex>& table) const;
    std::size_t size() const { return tables.size(); }
};

struct SetDiff {
    bool equal = false;
    std::vector<std::vector<AllocIndex>> only_a, only_b;
};

// Backtracking enumeration of every total profile->allocation map satisfying
// the selected axioms. Efficiency prunes domains up front, strategy-proofness
// propagates pairwise dominance between profiles differing in one report, and
// the group variant adds monotone-transformation equality cascades.
MechanismSet search(const SearchSpec& spec);

// No-propagation reference enumeration over all |C|^((m!)^n) assignments.
MechanismSet search_brute(const SearchSpec& spec, std::uint64_t assignment_limit = 100'000'000);

MechanismSet enumerate_local_dictatorships(const Constraint& c);

// zeta policy: a dictator decision for every reachable incomplete
// suballocation, keyed by its slot vector.
using GsdPolicy = std::map<std::vector<ObjectId>, AgentId>;

// Number of distinct decision policies, saturating at limit+1.
std::uint64_t gsd_policy_count(const Constraint& c, std::uint64_t limit = UINT64_MAX);

// Visit every policy; stops early when the callback returns false. Returns
// the number visited.
std::uint64_t for_each_gsd_policy(const Constraint& c,
                                  const std::function<bool(const GsdPolicy&)>& visit);

MechanismSet enumerate_gsd(std::shared_ptr<const Constraint> c,
                           std::uint64_t policy_budget = 1'000'000,
                           std::uint64_t table_budget = kDefaultTableBudget);

// Fast tabulation of one generalized serial dictatorship: recurses over
// reachable suballocations and groups reports sharing the same greedy pick,
// instead of evaluating profile by profile. zeta must name an unmatched
// agent at every reachable suballocation.
std::vector<AllocIndex> gsd_table(const Constraint& c, const GsdOrdering& zeta,
                                  std::uint64_t table_budget = kDefaultTableBudget);

SetDiff set_equal(const MechanismSet& a, const MechanismSet& b);

// Least bitmask over simultaneous object relabelings; n = 2 only, m^2 <= 64.
// Used to reduce the all-constraints sweep to orbit representatives.
std::uint64_t canonical_constraint_mask(int m, std::uint64_t mask);

}  // namespace mechkit
