#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mechkit {

using AgentId = int;
using ObjectId = int;

// Dense index of an allocation in mixed-radix order, agent 0 most significant.
using AllocIndex = std::uint32_t;

// Dense index of a preference within the pool of all m! orders.
using PrefIndex = std::uint16_t;

// Dense index of a profile, mixed-radix over per-agent preference indices,
// agent 0 most significant.
using ProfileIndex = std::uint64_t;

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an operation would exceed a configured resource budget.
struct BudgetError : std::runtime_error {
    std::uint64_t required = 0;
    BudgetError(const std::string& what, std::uint64_t required_)
        : std::runtime_error(what), required(required_) {}
};

// Internal invariant violation (should never fire on valid inputs).
struct DefectError : std::logic_error {
    using std::logic_error::logic_error;
};

inline std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > limit / base)
            throw BudgetError("size exceeds limit", limit);
        r *= base;
    }
    return r;
}

std::uint64_t factorial(int n);

}  // namespace mechkit
