#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "snebr/term.hpp"

namespace snebr {

/// Set of hypotheses known to derive a proposition. Kept sorted by TermId.
class OriginSet {
public:
    OriginSet() = default;
    OriginSet(std::initializer_list<TermId> ids);
    explicit OriginSet(std::vector<TermId> ids);

    bool contains(TermId id) const;
    bool subset_of(const OriginSet& other) const;
    template <typename Set>
    bool inside(const Set& hypotheses) const
    {
        for (TermId id : ids_)
            if (!hypotheses.count(id)) return false;
        return true;
    }
    OriginSet unite(const OriginSet& other) const;

    bool empty() const { return ids_.empty(); }
    std::size_t size() const { return ids_.size(); }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }
    const std::vector<TermId>& ids() const { return ids_; }

    friend auto operator<=>(const OriginSet&, const OriginSet&) = default;
    friend bool operator==(const OriginSet&, const OriginSet&) = default;

private:
    std::vector<TermId> ids_;
};

enum class BrMode { manual, automatic };

std::string to_string(BrMode mode);

struct Context {
    std::string name = "default";
    std::set<TermId> hypotheses;
    BrMode mode = BrMode::manual;
    std::uint64_t version = 0;  // bumped on every change to `hypotheses`
};

struct BeliefEvent {
    TermId hypothesis;
    bool added = false;  // false when it was already asserted
    std::vector<TermId> newly_believed;
    std::optional<TermId> contradicts;  // believed complement, if any
};

struct RetractionReport {
    TermId hypothesis;
    std::vector<TermId> casualties;  // ceased to be believed, excluding `hypothesis`
    bool hypothesis_still_believed = false;
};

class UnregisteredHypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotInContextError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Hypotheses, support records and the belief-space queries over them.
///
/// Support records only grow (modulo minimality). Retraction unasserts a
/// hypothesis in a context; nothing derived is forgotten.
class BeliefBase {
public:
    explicit BeliefBase(const TermStore& terms);

    BeliefEvent add_hypothesis(Context& ctx, TermId id);
    /// Stores `os` for `prop` unless a stored set is a subset of it; stored
    /// supersets of `os` are dropped. Returns whether `os` was stored.
    bool add_support(TermId prop, const OriginSet& os);
    RetractionReport retract(Context& ctx, TermId h);

    bool believed(const Context& ctx, TermId id) const;
    const std::vector<OriginSet>& origin_sets(TermId id) const;
    std::vector<OriginSet> active_origin_sets(const Context& ctx, TermId id) const;
    bool is_active(const Context& ctx, const OriginSet& os) const { return os.inside(ctx.hypotheses); }

    std::size_t casualty_count(const Context& ctx, TermId h) const;
    std::vector<TermId> casualties(const Context& ctx, TermId h) const;

    bool is_hypothesis(TermId id) const { return hypotheses_.count(id) != 0; }
    /// Hypotheses in first-assertion order.
    const std::vector<TermId>& hypotheses() const { return hypothesis_order_; }
    /// Propositions with at least one stored origin set, in TermId order.
    std::vector<TermId> supported() const;
    std::vector<TermId> believed_propositions(const Context& ctx) const;

    const TermStore& terms() const { return terms_; }
    std::uint64_t version() const { return version_; }

private:
    const TermStore& terms_;
    std::unordered_map<TermId, std::vector<OriginSet>, TermIdHash> supports_;
    std::unordered_map<TermId, std::vector<TermId>, TermIdHash> dependents_;  // hypothesis -> props using it
    std::unordered_set<TermId, TermIdHash> hypotheses_;
    std::vector<TermId> hypothesis_order_;
    std::uint64_t version_ = 0;
};

}  // namespace snebr
