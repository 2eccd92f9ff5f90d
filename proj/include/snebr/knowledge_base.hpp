#pragma once

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "snebr/belief_base.hpp"
#include "snebr/entrenchment.hpp"
#include "snebr/inference.hpp"
#include "snebr/revision.hpp"
#include "snebr/term.hpp"

namespace snebr {

struct AssertedEvent {
    TermId wff;
    bool already_asserted = false;
};

struct DerivedEvent {
    TermId wff;
    OriginSet origin;
    std::string rule;
};

struct ContradictionEvent {
    ContradictionReport report;
    bool asserted = false;  // the new side is a hypothesis rather than a derivation
};

struct ListsEvent {
    RevisionPass pass;
};

struct RetractedEvent {
    RetractionReport report;
    bool automatic = false;
};

struct PendingRevisionEvent {
    std::vector<OriginSet> inconsistent_sets;
    std::vector<TermId> culprits;
};

struct AnswerEvent {
    TermId query;
    bool yes = false;
    std::vector<OriginSet> origin_sets;
};

struct InfoEvent {
    std::string kind;  // mode, list_asserted, list_all, kept, saved, loaded, cleared
    std::string message;
    std::vector<TermId> wffs;
};

struct ErrorEvent {
    std::string kind;
    std::string message;
    std::size_t line = 0;
    std::size_t column = 0;
};

using Event = std::variant<AssertedEvent, DerivedEvent, ContradictionEvent, ListsEvent, RetractedEvent, PendingRevisionEvent,
                           AnswerEvent, InfoEvent, ErrorEvent>;

class PendingRevisionError : public std::logic_error {
public:
    PendingRevisionError();
};

class NothingPendingError : public std::logic_error {
public:
    NothingPendingError();
};

struct KnowledgeBaseOptions {
    InferenceLimits limits;
};

/// One belief space with its context, inference agenda and revision state.
///
/// Contradictions are revised one at a time in detection order. A revision
/// that needs the user blocks assertions and queries until `resolve` is
/// called; the paused inference then resumes.
class KnowledgeBase {
public:
    explicit KnowledgeBase(KnowledgeBaseOptions options = {});
    KnowledgeBase(const KnowledgeBase&) = delete;
    KnowledgeBase& operator=(const KnowledgeBase&) = delete;

    std::vector<Event> assert_wff(TermId wff, bool forward);
    std::vector<Event> query(TermId wff);
    std::vector<Event> resolve(const ManualChoice& choice);
    void set_mode(BrMode mode);

    bool revision_pending() const { return pending_.has_value(); }
    const std::optional<RevisionState>& pending_revision() const { return pending_; }
    const std::optional<RevisionState>& last_revision() const { return last_; }

    TermStore& terms() { return terms_; }
    const TermStore& terms() const { return terms_; }
    BeliefBase& beliefs() { return beliefs_; }
    const BeliefBase& beliefs() const { return beliefs_; }
    Context& context() { return context_; }
    const Context& context() const { return context_; }
    const Entrenchment& entrenchment() const { return entrenchment_; }
    InferenceEngine& engine() { return engine_; }
    const KnowledgeBaseOptions& options() const { return options_; }

    bool believed(TermId id) const { return beliefs_.believed(context_, id); }

private:
    void enqueue(const std::vector<ContradictionReport>& reports);
    void emit_batch(const DerivationBatch& batch, std::vector<Event>& events);
    void drive(std::vector<Event>& events);
    void finish(std::vector<Event>& events) const;

    KnowledgeBaseOptions options_;
    TermStore terms_;
    BeliefBase beliefs_;
    Context context_;
    Entrenchment entrenchment_;
    InferenceEngine engine_;
    std::deque<ContradictionReport> contradictions_;
    std::optional<RevisionState> pending_;
    std::optional<RevisionState> last_;
};

}  // namespace snebr
