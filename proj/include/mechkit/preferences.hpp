#pragma once

#include <span>
#include <vector>

#include "mechkit/common.hpp"
#include "mechkit/core.hpp"

namespace mechkit {

// A strict linear order over [0, m), stored best-first.
struct Preference {
    std::vector<ObjectId> order;  // order[0] is the top choice
    std::vector<int> rank;        // rank[x]: 0 = best

    explicit Preference(std::vector<ObjectId> best_first);
    int objects() const { return static_cast<int>(order.size()); }
    bool prefers(ObjectId x, ObjectId y) const { return rank[static_cast<size_t>(x)] < rank[static_cast<size_t>(y)]; }
    bool operator==(const Preference& o) const { return order == o.order; }
};

using Profile = std::vector<Preference>;

// k-th best object, k >= 1.
ObjectId top(const Preference& p, int k = 1);
// tau_k applied componentwise.
Allocation top(const Profile& profile, int k = 1);

enum class ContourSide { lower, upper };
std::vector<ObjectId> contour(const Preference& p, ObjectId x, ContourSide side);

// All m! preference orders in lexicographic order of their best-first
// vectors, with O(1) rank lookups. The index of an order in this pool is
// its PrefIndex.
class PrefPool {
public:
    explicit PrefPool(int m);

    int objects() const { return m_; }
    std::size_t size() const { return count_; }

    std::span<const ObjectId> order(PrefIndex p) const {
        return {order_.data() + static_cast<std::size_t>(p) * m_, static_cast<std::size_t>(m_)};
    }
    int rank(PrefIndex p, ObjectId x) const {
        return rank_[static_cast<std::size_t>(p) * m_ + static_cast<std::size_t>(x)];
    }
    bool prefers(PrefIndex p, ObjectId x, ObjectId y) const { return rank(p, x) < rank(p, y); }
    ObjectId object_at(PrefIndex p, int r) const {
        return order_[static_cast<std::size_t>(p) * m_ + static_cast<std::size_t>(r)];
    }

    PrefIndex index_of(const Preference& p) const;
    Preference preference(PrefIndex p) const;

    // Preference indices p' whose strict lower contour of x contains the
    // lower contour of x under p (the monotone transformations at x).
    std::span<const PrefIndex> monotone_at(PrefIndex p, ObjectId x) const;

private:
    int m_;
    std::size_t count_;
    std::vector<ObjectId> order_;
    std::vector<int> rank_;
    std::vector<PrefIndex> monotone_;
    std::vector<std::uint32_t> monotone_off_;  // (p*m + x) -> offset, +1 entries
};

// Shared per-m pool cache.
const PrefPool& pref_pool(int m);

std::vector<Preference> all_preferences(int m);

// Mixed-radix profile indexing, agent 0 most significant.
std::uint64_t profile_count(int n, int m);
ProfileIndex profile_index(const PrefPool& pool, std::span<const PrefIndex> prefs);
void profile_decode(const PrefPool& pool, int n, ProfileIndex idx, std::span<PrefIndex> out);
Profile profile_from_index(const PrefPool& pool, int n, ProfileIndex idx);

// P^up[A_1,...,A_k]: all preferences ranking every member of A_1 above A_2,
// ..., above everything else. Groups must be pairwise disjoint.
std::vector<Preference> lex_preference(int m, const std::vector<std::vector<ObjectId>>& groups);

}  // namespace mechkit
