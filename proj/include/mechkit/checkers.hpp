#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechkit/mechanism.hpp"

namespace mechkit {

enum class Axiom {
    sp,
    gsp,
    weak_gsp,
    pe,
    pe_on_image,
    nonbossy,
    maskin,
    irrelevant_objects,
    mutually_best,
};

std::string to_string(Axiom a);
std::optional<Axiom> axiom_from_string(const std::string& s);

// A replayable counterexample: evaluating the mechanism at `profile` and at
// the deviated profile reproduces the violation.
struct Witness {
    Axiom kind;
    ProfileIndex profile = 0;
    std::vector<AgentId> coalition;          // deviators (empty for PE)
    std::vector<PrefIndex> misreports;       // one per coalition member
    AllocIndex before = 0;                   // f at the true profile
    AllocIndex after = 0;                    // f at the deviation / dominating allocation
};

using CheckResult = std::optional<Witness>;  // nullopt = pass

CheckResult check_sp(const TabulatedMechanism& f);
CheckResult check_gsp_naive(const TabulatedMechanism& f);
CheckResult check_gsp_fast(const TabulatedMechanism& f);
CheckResult check_weak_gsp(const TabulatedMechanism& f);
CheckResult check_pe(const TabulatedMechanism& f);
CheckResult check_pe_on_image(const TabulatedMechanism& f);
CheckResult check_nonbossy(const TabulatedMechanism& f);
// Single-agent monotone-transformation chain form.
CheckResult check_maskin(const TabulatedMechanism& f);
// Full two-profile definition; (m!)^(2n) pairs, tiny instances only.
CheckResult check_maskin_full(const TabulatedMechanism& f, std::uint64_t budget = kDefaultTableBudget);
CheckResult check_irrelevant_objects(const TabulatedMechanism& f);
CheckResult check_mutually_best(const TabulatedMechanism& f);

CheckResult run_check(Axiom a, const TabulatedMechanism& f, bool fast_gsp = false);

// True iff the witness replays against the table (the reported outcomes and
// violated comparison are reproduced).
bool replay_witness(const TabulatedMechanism& f, const Witness& w);

}  // namespace mechkit
