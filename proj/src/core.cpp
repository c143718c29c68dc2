#include "mechkit/core.hpp"

#include <algorithm>
#include <array>

namespace mechkit {

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

bool Suballocation::complete() const {
    return std::ranges::all_of(slots_, [](ObjectId x) { return x >= 0; });
}

int Suballocation::assigned_count() const {
    return static_cast<int>(std::ranges::count_if(slots_, [](ObjectId x) { return x >= 0; }));
}

namespace {
constexpr std::uint64_t kMaxExplicit = 10'000'000;  // bitset size cap
}

Constraint::Constraint(int n, int m, const std::vector<Allocation>& feasible)
    : n_(n), m_(m) {
    if (n < 1 || m < 1) throw ArgumentError("constraint needs n >= 1 and m >= 1");
    total_ = checked_pow(static_cast<std::uint64_t>(m), n, kMaxExplicit);
    std::vector<AllocIndex> idx;
    idx.reserve(feasible.size());
    for (const auto& a : feasible) {
        if (static_cast<int>(a.size()) != n)
            throw ArgumentError("allocation length does not match agent count");
        idx.push_back(encode(a));
    }
    std::ranges::sort(idx);
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    build(std::move(idx));
}

Constraint::Constraint(int n, int m, std::vector<AllocIndex> feasible_sorted_unique)
    : n_(n), m_(m) {
    if (n < 1 || m < 1) throw ArgumentError("constraint needs n >= 1 and m >= 1");
    total_ = checked_pow(static_cast<std::uint64_t>(m), n, kMaxExplicit);
    build(std::move(feasible_sorted_unique));
}

void Constraint::build(std::vector<AllocIndex> idx) {
    if (idx.empty()) throw ArgumentError("constraint must be nonempty");
    for (AllocIndex a : idx)
        if (a >= total_) throw ArgumentError("allocation index out of range");
    feasible_ = std::move(idx);
    const std::size_t w = (total_ + 63) / 64;
    bits_.assign(w, 0);
    for (AllocIndex a : feasible_) bits_[a >> 6] |= 1ull << (a & 63);

    masks_.assign(static_cast<std::size_t>(n_) * m_ * w, 0);
    std::vector<ObjectId> buf(n_);
    for (AllocIndex a : feasible_) {
        decode_into(a, buf);
        for (int i = 0; i < n_; ++i) {
            std::size_t base = (static_cast<std::size_t>(i) * m_ + buf[i]) * w;
            masks_[base + (a >> 6)] |= 1ull << (a & 63);
        }
    }
}

AllocIndex Constraint::encode(std::span<const ObjectId> a) const {
    std::uint64_t idx = 0;
    for (int i = 0; i < n_; ++i) {
        ObjectId x = a[static_cast<size_t>(i)];
        if (x < 0 || x >= m_) throw ArgumentError("object id out of range");
        idx = idx * m_ + static_cast<std::uint64_t>(x);
    }
    return static_cast<AllocIndex>(idx);
}

Allocation Constraint::decode(AllocIndex idx) const {
    Allocation a(n_);
    decode_into(idx, a);
    return a;
}

void Constraint::decode_into(AllocIndex idx, std::span<ObjectId> out) const {
    std::uint64_t v = idx;
    for (int i = n_ - 1; i >= 0; --i) {
        out[static_cast<size_t>(i)] = static_cast<ObjectId>(v % m_);
        v /= m_;
    }
}

std::span<const std::uint64_t> Constraint::mask(AgentId i, ObjectId x) const {
    const std::size_t w = bits_.size();
    return {masks_.data() + (static_cast<std::size_t>(i) * m_ + x) * w, w};
}

Projection project(const Constraint& c, const std::vector<AgentId>& agents) {
    if (agents.empty()) throw ArgumentError("projection needs a nonempty agent set");
    std::vector<AgentId> sel = agents;
    std::ranges::sort(sel);
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    for (AgentId i : sel)
        if (i < 0 || i >= c.agents()) throw ArgumentError("agent id out of range");

    const int k = static_cast<int>(sel.size());
    std::vector<ObjectId> buf(c.agents());
    std::vector<Allocation> out;
    Allocation sub(k);
    for (AllocIndex a : c.feasible()) {
        c.decode_into(a, buf);
        for (int j = 0; j < k; ++j) sub[static_cast<size_t>(j)] = buf[static_cast<size_t>(sel[j])];
        out.push_back(sub);
    }
    return Projection{Constraint(k, c.objects(), out), std::move(sel)};
}

std::vector<AllocIndex> feasible_extensions(const Constraint& c, const Suballocation& mu) {
    if (mu.agents() != c.agents()) throw ArgumentError("suballocation agent count mismatch");
    std::vector<ObjectId> buf(c.agents());
    std::vector<AllocIndex> out;
    for (AllocIndex a : c.feasible()) {
        c.decode_into(a, buf);
        bool ok = true;
        for (int i = 0; i < c.agents() && ok; ++i)
            if (mu.assigned(i) && buf[static_cast<size_t>(i)] != mu.at(i)) ok = false;
        if (ok) out.push_back(a);
    }
    return out;
}

void feasible_extension_bits(const Constraint& c, const Suballocation& mu,
                             std::vector<std::uint64_t>& out) {
    const auto bits = c.bits();
    out.assign(bits.begin(), bits.end());
    for (int i = 0; i < c.agents(); ++i) {
        if (!mu.assigned(i)) continue;
        auto m = c.mask(i, mu.at(i));
        for (std::size_t w = 0; w < out.size(); ++w) out[w] &= m[w];
    }
}

std::vector<ObjectId> always_infeasible(const Constraint& c, AgentId i) {
    if (i < 0 || i >= c.agents()) throw ArgumentError("agent id out of range");
    std::vector<ObjectId> r;
    for (ObjectId x = 0; x < c.objects(); ++x) {
        auto m = c.mask(i, x);
        bool any = false;
        for (std::uint64_t w : m)
            if (w) { any = true; break; }
        if (!any) r.push_back(x);
    }
    return r;
}

bool is_single_compromising(const Constraint& c) {
    const int n = c.agents(), m = c.objects();
    std::vector<ObjectId> buf(n);
    const std::uint64_t total = c.total_allocations();
    for (std::uint64_t a = 0; a < total; ++a) {
        if (c.contains(static_cast<AllocIndex>(a))) continue;
        c.decode_into(static_cast<AllocIndex>(a), buf);
        for (int i = 0; i < n; ++i) {
            const ObjectId orig = buf[static_cast<size_t>(i)];
            bool repairable = false;
            for (ObjectId x = 0; x < m && !repairable; ++x) {
                if (x == orig) continue;
                buf[static_cast<size_t>(i)] = x;
                repairable = c.contains(buf);
            }
            buf[static_cast<size_t>(i)] = orig;
            if (!repairable) return false;
        }
    }
    return true;
}

Constraint builtin_constraint(BuiltinKind kind, int n, int m) {
    std::vector<Allocation> feas;
    Allocation a(n);
    switch (kind) {
        case BuiltinKind::house_allocation: {
            if (m < n) throw ArgumentError("house allocation requires m >= n");
            // all injective assignments
            std::vector<bool> used(m, false);
            auto rec = [&](auto&& self, int i) -> void {
                if (i == n) { feas.push_back(a); return; }
                for (ObjectId x = 0; x < m; ++x) {
                    if (used[static_cast<size_t>(x)]) continue;
                    used[static_cast<size_t>(x)] = true;
                    a[static_cast<size_t>(i)] = x;
                    self(self, i + 1);
                    used[static_cast<size_t>(x)] = false;
                }
            };
            rec(rec, 0);
            break;
        }
        case BuiltinKind::roommates: {
            if (m != n) throw ArgumentError("roommates requires m = n");
            if (n % 2 != 0) throw ArgumentError("roommates requires an even agent count");
            // fixed-point-free involutions
            auto rec = [&](auto&& self, int i, std::uint64_t matched) -> void {
                if (i == n) { feas.push_back(a); return; }
                if (matched & (1ull << i)) { self(self, i + 1, matched); return; }
                for (int j = i + 1; j < n; ++j) {
                    if (matched & (1ull << j)) continue;
                    a[static_cast<size_t>(i)] = j;
                    a[static_cast<size_t>(j)] = i;
                    self(self, i + 1, matched | (1ull << i) | (1ull << j));
                }
            };
            rec(rec, 0, 0);
            break;
        }
        case BuiltinKind::social_choice: {
            for (ObjectId x = 0; x < m; ++x) {
                std::fill(a.begin(), a.end(), x);
                feas.push_back(a);
            }
            break;
        }
        case BuiltinKind::complement_diagonal: {
            const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(m), n, kMaxExplicit);
            if (total <= static_cast<std::uint64_t>(m))
                throw ArgumentError("complement_diagonal requires m^n > m");
            std::vector<AllocIndex> idx;
            // diagonal allocation (x,...,x) has index x * (m^n - 1)/(m - 1)
            for (std::uint64_t v = 0; v < total; ++v) {
                bool diag = true;
                std::uint64_t t = v;
                ObjectId last = static_cast<ObjectId>(t % m);
                for (int i = 1; i < n && diag; ++i) {
                    t /= m;
                    if (static_cast<ObjectId>(t % m) != last) diag = false;
                }
                if (n == 1) diag = true;
                if (!diag) idx.push_back(static_cast<AllocIndex>(v));
            }
            return Constraint(n, m, std::move(idx));
        }
    }
    return Constraint(n, m, feas);
}

std::optional<BuiltinKind> builtin_kind_from_string(const std::string& s) {
    if (s == "house_allocation") return BuiltinKind::house_allocation;
    if (s == "roommates") return BuiltinKind::roommates;
    if (s == "social_choice") return BuiltinKind::social_choice;
    if (s == "complement_diagonal") return BuiltinKind::complement_diagonal;
    return std::nullopt;
}

std::string to_string(BuiltinKind k) {
    switch (k) {
        case BuiltinKind::house_allocation: return "house_allocation";
        case BuiltinKind::roommates: return "roommates";
        case BuiltinKind::social_choice: return "social_choice";
        case BuiltinKind::complement_diagonal: return "complement_diagonal";
    }
    return "?";
}

}  // namespace mechkit
