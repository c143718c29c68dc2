#include "mechkit/preferences.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace mechkit {

Preference::Preference(std::vector<ObjectId> best_first) : order(std::move(best_first)) {
    const int m = static_cast<int>(order.size());
    rank.assign(static_cast<size_t>(m), -1);
    for (int r = 0; r < m; ++r) {
        ObjectId x = order[static_cast<size_t>(r)];
        if (x < 0 || x >= m || rank[static_cast<size_t>(x)] != -1)
            throw ArgumentError("preference must be a permutation of all objects");
        rank[static_cast<size_t>(x)] = r;
    }
}

ObjectId top(const Preference& p, int k) {
    if (k < 1 || k > p.objects()) throw ArgumentError("rank out of range");
    return p.order[static_cast<size_t>(k - 1)];
}

Allocation top(const Profile& profile, int k) {
    Allocation a;
    a.reserve(profile.size());
    for (const auto& p : profile) a.push_back(top(p, k));
    return a;
}

std::vector<ObjectId> contour(const Preference& p, ObjectId x, ContourSide side) {
    if (x < 0 || x >= p.objects()) throw ArgumentError("object id out of range");
    std::vector<ObjectId> out;
    const int rx = p.rank[static_cast<size_t>(x)];
    for (ObjectId y = 0; y < p.objects(); ++y) {
        const int ry = p.rank[static_cast<size_t>(y)];
        if (side == ContourSide::lower ? ry > rx : ry < rx) out.push_back(y);
    }
    return out;
}

PrefPool::PrefPool(int m) : m_(m) {
    if (m < 1) throw ArgumentError("need m >= 1");
    count_ = static_cast<std::size_t>(factorial(m));
    order_.reserve(count_ * m);
    std::vector<ObjectId> perm(static_cast<size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        order_.insert(order_.end(), perm.begin(), perm.end());
    } while (std::next_permutation(perm.begin(), perm.end()));

    rank_.assign(count_ * m, 0);
    for (std::size_t p = 0; p < count_; ++p)
        for (int r = 0; r < m; ++r)
            rank_[p * m + static_cast<std::size_t>(order_[p * m + r])] = r;

    // monotone_at lists: p' keeps LC_{p'}(x) a superset of LC_p(x)
    monotone_off_.assign(count_ * m + 1, 0);
    for (std::size_t p = 0; p < count_; ++p) {
        for (ObjectId x = 0; x < m; ++x) {
            std::uint32_t cnt = 0;
            for (std::size_t q = 0; q < count_; ++q) {
                bool ok = true;
                const int rx = rank_[p * m + static_cast<std::size_t>(x)];
                const int qx = rank_[q * m + static_cast<std::size_t>(x)];
                for (ObjectId y = 0; y < m && ok; ++y) {
                    if (y == x) continue;
                    if (rank_[p * m + static_cast<std::size_t>(y)] > rx &&
                        rank_[q * m + static_cast<std::size_t>(y)] <= qx)
                        ok = false;
                }
                if (ok) ++cnt;
            }
            monotone_off_[p * m + static_cast<std::size_t>(x) + 1] = cnt;
        }
    }
    for (std::size_t i = 1; i < monotone_off_.size(); ++i) monotone_off_[i] += monotone_off_[i - 1];
    monotone_.resize(monotone_off_.back());
    std::vector<std::uint32_t> fill(monotone_off_.begin(), monotone_off_.end() - 1);
    for (std::size_t p = 0; p < count_; ++p) {
        for (ObjectId x = 0; x < m; ++x) {
            const int rx = rank_[p * m + static_cast<std::size_t>(x)];
            for (std::size_t q = 0; q < count_; ++q) {
                bool ok = true;
                const int qx = rank_[q * m + static_cast<std::size_t>(x)];
                for (ObjectId y = 0; y < m && ok; ++y) {
                    if (y == x) continue;
                    if (rank_[p * m + static_cast<std::size_t>(y)] > rx &&
                        rank_[q * m + static_cast<std::size_t>(y)] <= qx)
                        ok = false;
                }
                if (ok) monotone_[fill[p * m + static_cast<std::size_t>(x)]++] = static_cast<PrefIndex>(q);
            }
        }
    }
}

PrefIndex PrefPool::index_of(const Preference& p) const {
    if (p.objects() != m_) throw ArgumentError("preference object count mismatch");
    // factorial number system over the best-first vector
    std::uint64_t idx = 0;
    std::vector<bool> used(static_cast<size_t>(m_), false);
    for (int r = 0; r < m_; ++r) {
        ObjectId x = p.order[static_cast<size_t>(r)];
        int smaller = 0;
        for (ObjectId y = 0; y < x; ++y)
            if (!used[static_cast<size_t>(y)]) ++smaller;
        used[static_cast<size_t>(x)] = true;
        idx = idx * static_cast<std::uint64_t>(m_ - r) + static_cast<std::uint64_t>(smaller);
    }
    return static_cast<PrefIndex>(idx);
}

Preference PrefPool::preference(PrefIndex p) const {
    auto o = order(p);
    return Preference(std::vector<ObjectId>(o.begin(), o.end()));
}

std::span<const PrefIndex> PrefPool::monotone_at(PrefIndex p, ObjectId x) const {
    const std::size_t k = static_cast<std::size_t>(p) * m_ + static_cast<std::size_t>(x);
    return {monotone_.data() + monotone_off_[k], monotone_off_[k + 1] - monotone_off_[k]};
}

const PrefPool& pref_pool(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<PrefPool>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<PrefPool>(m);
    return *slot;
}

std::vector<Preference> all_preferences(int m) {
    const PrefPool& pool = pref_pool(m);
    std::vector<Preference> out;
    out.reserve(pool.size());
    for (std::size_t p = 0; p < pool.size(); ++p)
        out.push_back(pool.preference(static_cast<PrefIndex>(p)));
    return out;
}

std::uint64_t profile_count(int n, int m) {
    return checked_pow(factorial(m), n, UINT64_MAX / 2);
}

ProfileIndex profile_index(const PrefPool& pool, std::span<const PrefIndex> prefs) {
    ProfileIndex idx = 0;
    for (PrefIndex p : prefs) idx = idx * pool.size() + p;
    return idx;
}

void profile_decode(const PrefPool& pool, int n, ProfileIndex idx, std::span<PrefIndex> out) {
    for (int i = n - 1; i >= 0; --i) {
        out[static_cast<size_t>(i)] = static_cast<PrefIndex>(idx % pool.size());
        idx /= pool.size();
    }
}

Profile profile_from_index(const PrefPool& pool, int n, ProfileIndex idx) {
    std::vector<PrefIndex> pi(static_cast<size_t>(n));
    profile_decode(pool, n, idx, pi);
    Profile prof;
    prof.reserve(static_cast<size_t>(n));
    for (PrefIndex p : pi) prof.push_back(pool.preference(p));
    return prof;
}

std::vector<Preference> lex_preference(int m, const std::vector<std::vector<ObjectId>>& groups) {
    std::vector<int> group_of(static_cast<size_t>(m), -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (ObjectId x : groups[g]) {
            if (x < 0 || x >= m) throw ArgumentError("object id out of range");
            if (group_of[static_cast<size_t>(x)] != -1)
                throw ArgumentError("groups must be pairwise disjoint");
            group_of[static_cast<size_t>(x)] = static_cast<int>(g);
        }
    }
    const PrefPool& pool = pref_pool(m);
    std::vector<Preference> out;
    for (std::size_t p = 0; p < pool.size(); ++p) {
        auto o = pool.order(static_cast<PrefIndex>(p));
        // group labels must appear as a prefix g0^|A0| g1^|A1| ... then tail
        bool ok = true;
        int pos = 0;
        for (std::size_t g = 0; g < groups.size() && ok; ++g) {
            for (std::size_t k = 0; k < groups[g].size() && ok; ++k, ++pos)
                if (group_of[static_cast<size_t>(o[static_cast<size_t>(pos)])] != static_cast<int>(g)) ok = false;
        }
        if (ok) out.push_back(pool.preference(static_cast<PrefIndex>(p)));
    }
    return out;
}

}  // namespace mechkit
