#include "mechkit/blocks.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mechkit {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t k) : parent(k) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a); b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

BlockDecomposition decompose(const Constraint& c) {
    if (c.agents() != 2) throw ArgumentError("block decomposition needs exactly 2 agents");
    const int m = c.objects();

    BlockDecomposition d;
    d.objects = m;
    d.r1 = always_infeasible(c, 0);
    d.r2 = always_infeasible(c, 1);

    std::vector<bool> in_r1(static_cast<size_t>(m), false), in_r2(static_cast<size_t>(m), false);
    for (ObjectId x : d.r1) in_r1[static_cast<size_t>(x)] = true;
    for (ObjectId y : d.r2) in_r2[static_cast<size_t>(y)] = true;

    ObjectId buf[2];
    for (ObjectId x = 0; x < m; ++x) {
        if (in_r1[static_cast<size_t>(x)]) continue;
        for (ObjectId y = 0; y < m; ++y) {
            if (in_r2[static_cast<size_t>(y)]) continue;
            buf[0] = x; buf[1] = y;
            if (!c.contains(std::span<const ObjectId>(buf, 2))) d.cstar.emplace_back(x, y);
        }
    }

    // union along shared rows and columns, one pass per axis
    UnionFind uf(d.cstar.size());
    std::map<ObjectId, int> seen;
    for (std::size_t i = 0; i < d.cstar.size(); ++i) {  // shared first coordinate
        auto [it, fresh] = seen.try_emplace(d.cstar[i].first, static_cast<int>(i));
        if (!fresh) uf.unite(it->second, static_cast<int>(i));
    }
    seen.clear();
    for (std::size_t i = 0; i < d.cstar.size(); ++i) {  // shared second coordinate
        auto [it, fresh] = seen.try_emplace(d.cstar[i].second, static_cast<int>(i));
        if (!fresh) uf.unite(it->second, static_cast<int>(i));
    }

    std::map<int, std::vector<Cell>> groups;
    for (std::size_t i = 0; i < d.cstar.size(); ++i)
        groups[uf.find(static_cast<int>(i))].push_back(d.cstar[i]);
    // cstar is sorted by (x, y), so the map key order is minimal-cell order
    for (auto& [root, cells] : groups) d.blocks.push_back(std::move(cells));
    return d;
}

std::pair<std::vector<ObjectId>, std::vector<ObjectId>>
block_diagonal_order(const BlockDecomposition& d) {
    const int m = d.objects;
    std::vector<ObjectId> rows, cols;
    std::vector<bool> row_done(static_cast<size_t>(m), false), col_done(static_cast<size_t>(m), false);
    auto put = [](std::vector<ObjectId>& out, std::vector<bool>& done, ObjectId x) {
        if (!done[static_cast<size_t>(x)]) { done[static_cast<size_t>(x)] = true; out.push_back(x); }
    };
    for (ObjectId x : d.r1) put(rows, row_done, x);
    for (ObjectId y : d.r2) put(cols, col_done, y);
    for (const auto& block : d.blocks) {
        std::vector<ObjectId> bx, by;
        for (const auto& [x, y] : block) { bx.push_back(x); by.push_back(y); }
        std::ranges::sort(bx);
        std::ranges::sort(by);
        for (ObjectId x : bx) put(rows, row_done, x);
        for (ObjectId y : by) put(cols, col_done, y);
    }
    for (ObjectId x = 0; x < m; ++x) put(rows, row_done, x);
    for (ObjectId y = 0; y < m; ++y) put(cols, col_done, y);
    return {rows, cols};
}

std::uint64_t count_sp_pe(const BlockDecomposition& d) {
    return 1ull << d.blocks.size();
}

}  // namespace mechkit
