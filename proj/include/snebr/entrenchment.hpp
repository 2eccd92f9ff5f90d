#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "snebr/belief_base.hpp"
#include "snebr/term.hpp"

namespace snebr {

inline constexpr const char* kGreaterKey = "GREATER/2";
inline constexpr const char* kSourceKey = "SOURCE/2";

/// GREATER(a,b) would make the order cyclic. `cycle` runs from the greater
/// entity down to itself.
class CycleError : public std::runtime_error {
public:
    CycleError(std::string message, std::vector<TermId> cycle);
    const std::vector<TermId>& cycle() const { return cycle_; }

private:
    std::vector<TermId> cycle_;
};

/// GREATER between a source and a proposition.
class OrderKindError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MultipleSourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strict order over entities (source constants and propositions) built from
/// believed GREATER propositions. Edges point from greater to lesser.
class CredibilityGraph {
public:
    /// Adds the edge unless it would close a cycle; returns whether it did.
    bool try_add(TermId greater, TermId lesser);
    /// True iff `greater` reaches `lesser` through one or more edges.
    bool above(TermId greater, TermId lesser) const;
    /// Entities from `from` down to `to`, inclusive; empty if unreachable.
    std::vector<TermId> path(TermId from, TermId to) const;
    const std::vector<std::pair<TermId, TermId>>& edges() const { return edges_; }

private:
    std::map<TermId, std::vector<TermId>> lesser_;
    std::vector<std::pair<TermId, TermId>> edges_;
};

/// Credibility over a fixed set of hypotheses: the transitive closure of
/// direct proposition order, then source order, then "sourced is below
/// sourceless", each pair added only if it keeps the relation acyclic.
class CredibilityOrder {
public:
    CredibilityOrder() = default;
    explicit CredibilityOrder(std::vector<TermId> members);

    void add(TermId lesser, TermId greater);
    bool less(TermId lesser, TermId greater) const;
    bool has(TermId id) const { return index_.count(id) != 0; }
    const std::vector<TermId>& members() const { return members_; }

private:
    std::vector<TermId> members_;
    std::unordered_map<TermId, std::size_t, TermIdHash> index_;
    std::vector<std::vector<bool>> above_;  // above_[i][j]: member j is more credible than member i
};

/// Reads SOURCE and GREATER meta-propositions out of the belief space.
/// Nothing is cached across changes: retracting a SOURCE or GREATER
/// hypothesis is visible on the next call.
class Entrenchment {
public:
    explicit Entrenchment(const BeliefBase& beliefs);

    CredibilityGraph graph(const Context& ctx) const;
    /// Validates GREATER(greater, lesser) before it is asserted.
    void assert_order(const Context& ctx, TermId greater, TermId lesser) const;
    std::optional<TermId> source_of(const Context& ctx, TermId h) const;
    bool less_credible(const Context& ctx, TermId h1, TermId h2) const;
    CredibilityOrder order(const Context& ctx, std::vector<TermId> hypotheses) const;

private:
    const BeliefBase& beliefs_;
};

}  // namespace snebr
