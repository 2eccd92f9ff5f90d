#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "snebr/belief_base.hpp"
#include "snebr/entrenchment.hpp"
#include "snebr/inference.hpp"

namespace snebr {

/// Least believed, most common and fewest-supporting hypotheses of the union
/// of a contradiction's inconsistent sets. Each list is sorted by TermId.
struct CulpritLists {
    std::vector<TermId> least_believed;
    std::vector<TermId> most_common;
    std::vector<TermId> fewest_supported;
};

enum class RevisionStatus { awaiting_user, resolved, kept_inconsistent };

std::string to_string(RevisionStatus status);

/// One analysis of a contradiction: what the user is shown, and what (if
/// anything) was retracted automatically as a result.
struct RevisionPass {
    std::vector<OriginSet> inconsistent_sets;
    CulpritLists lists;
    std::vector<TermId> culprits;
    std::optional<RetractionReport> auto_retraction;
};

struct RevisionState {
    ContradictionReport contradiction;
    BrMode mode = BrMode::manual;
    RevisionStatus status = RevisionStatus::awaiting_user;
    std::vector<RevisionPass> passes;
    std::vector<RetractionReport> retractions;  // automatic and manual, in order

    const RevisionPass& current() const { return passes.back(); }
    std::vector<TermId> retracted() const;
};

struct ManualChoice {
    std::vector<TermId> retract;
    bool keep_inconsistent = false;

    static ManualChoice keep() { return {{}, true}; }
};

class CoverageError : public std::invalid_argument {
public:
    CoverageError(std::string message, std::vector<OriginSet> uncovered);
    const std::vector<OriginSet>& uncovered() const { return uncovered_; }

private:
    std::vector<OriginSet> uncovered_;
};

class UnknownSelectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidRevisionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Unions of every active origin set of `p` with every active origin set of
/// `np`, deduplicated but not minimized against each other.
std::vector<OriginSet> build_inconsistent_sets(const BeliefBase& beliefs, const Context& ctx, TermId p, TermId np);

CulpritLists compute_lists(const BeliefBase& beliefs, const Entrenchment& entrenchment, const Context& ctx,
                           std::span<const OriginSet> sets);

/// Smallest non-empty set among LB∩MC∩FS, LB∩MC, LB∩FS, MC∩FS, LB, MC, FS;
/// ties go to the earlier candidate.
std::vector<TermId> culprit_list(const std::vector<TermId>& lb, const std::vector<TermId>& mc, const std::vector<TermId>& fs);

bool still_contradictory(const BeliefBase& beliefs, const Context& ctx, const ContradictionReport& report);

/// Builds the lists for `report`. In automatic mode a singleton culprit list
/// is retracted and the contradiction re-examined until it is gone or the
/// culprit list stops being a singleton; otherwise the state is left
/// awaiting the user.
RevisionState revise(BeliefBase& beliefs, const Entrenchment& entrenchment, Context& ctx, const ContradictionReport& report);

/// Applies the user's answer to an awaiting state: either keep the context
/// inconsistent, or retract a selection that hits every inconsistent set.
RevisionState apply_manual_choice(BeliefBase& beliefs, Context& ctx, RevisionState state, const ManualChoice& choice);

}  // namespace snebr
