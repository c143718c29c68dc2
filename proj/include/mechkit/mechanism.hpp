#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "mechkit/blocks.hpp"
#include "mechkit/core.hpp"
#include "mechkit/preferences.hpp"

namespace mechkit {

// Default cap on (m!)^n when tabulating.
inline constexpr std::uint64_t kDefaultTableBudget = 10'000'000;

// A feasible mechanism: every evaluation lands in the constraint.
class Mechanism {
public:
    using Eval = std::function<AllocIndex(std::span<const PrefIndex>)>;

    Mechanism(std::shared_ptr<const Constraint> c, Eval eval)
        : c_(std::move(c)), eval_(std::move(eval)) {}

    const Constraint& constraint() const { return *c_; }
    std::shared_ptr<const Constraint> constraint_ptr() const { return c_; }
    int agents() const { return c_->agents(); }
    int objects() const { return c_->objects(); }

    AllocIndex assign(std::span<const PrefIndex> profile) const { return eval_(profile); }
    Allocation assign(const Profile& profile) const;

private:
    std::shared_ptr<const Constraint> c_;
    Eval eval_;
};

// Extensional form: one allocation index per profile index.
struct TabulatedMechanism {
    std::shared_ptr<const Constraint> constraint;
    std::vector<AllocIndex> table;

    int agents() const { return constraint->agents(); }
    int objects() const { return constraint->objects(); }
    bool operator==(const TabulatedMechanism& o) const { return table == o.table; }
};

TabulatedMechanism tabulate(const Mechanism& f, std::uint64_t budget = kDefaultTableBudget,
                            int threads = 0);
Mechanism from_table(TabulatedMechanism t);

// zeta: picks the next dictator for each incomplete suballocation. Backed by
// a default fixed order plus sparse overrides keyed by the suballocation.
class GsdOrdering {
public:
    explicit GsdOrdering(std::vector<AgentId> default_order);
    GsdOrdering(std::vector<AgentId> default_order,
                std::map<std::vector<ObjectId>, AgentId> overrides);

    // A pseudorandom but deterministic ordering (used for sampling).
    static GsdOrdering seeded(int n, std::uint64_t seed);

    AgentId next(const Suballocation& mu) const;

private:
    GsdOrdering() = default;
    std::vector<AgentId> default_order_;
    std::map<std::vector<ObjectId>, AgentId> overrides_;
    std::uint64_t seed_ = 0;
    bool seeded_ = false;
    int n_ = 0;
};

// alpha: which agents must compromise at each infeasible allocation.
struct CompromiserAssignment {
    std::map<AllocIndex, std::vector<AgentId>> map;
    const std::vector<AgentId>& at(AllocIndex a) const;
};

Mechanism serial_dictatorship(std::shared_ptr<const Constraint> c, std::vector<AgentId> order);
Mechanism gsd(std::shared_ptr<const Constraint> c, GsdOrdering zeta);

Mechanism local_dictatorship(std::shared_ptr<const Constraint> c,
                             const BlockDecomposition& d,
                             const std::vector<AgentId>& dictators);  // one per block

Mechanism constraint_traversing(std::shared_ptr<const Constraint> c,
                                CompromiserAssignment alpha);

// (f^M, zeta): run f_m on the projected agents, complete with a GSD sweep.
Mechanism extend(const Mechanism& f_m, const std::vector<AgentId>& m_agents,
                 std::shared_ptr<const Constraint> c, GsdOrdering zeta);

Mechanism direct_sum(const Mechanism& f, const Mechanism& g);

// sigma +/- rho: each side's sub-mechanism is selected by the other side's
// profile. sigma maps first-block profiles to mechanisms for the second
// block; rho the reverse.
Mechanism direct_sum_param(
    std::shared_ptr<const Constraint> c, int n_first,
    std::function<Mechanism(std::span<const PrefIndex>)> sigma,
    std::function<Mechanism(std::span<const PrefIndex>)> rho);

Mechanism marginal(const Mechanism& f, const std::vector<AgentId>& m_agents,
                   const std::vector<PrefIndex>& fixed);

// I^M: image of the marginal mechanism, as suballocations on m_agents
// (re-indexed ascending), encoded over the projected constraint.
std::set<AllocIndex> option_set(const Mechanism& f, const std::vector<AgentId>& m_agents,
                                const std::vector<PrefIndex>& fixed);

// g_i: objects agent i can induce by varying her own report.
std::set<ObjectId> option_correspondence(const Mechanism& f, AgentId i,
                                         const std::vector<PrefIndex>& fixed);

}  // namespace mechkit
