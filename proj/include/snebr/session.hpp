#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snebr/knowledge_base.hpp"

namespace snebr {

inline constexpr const char* kSnapshotHeader = "snebr-snapshot v1";
inline constexpr const char* kSnapshotTrailer = "end.";

enum class EvalStatus {
    ok,
    parse_error,
    rejected_pending,  // a revision answer is required first
    nothing_pending,   // revision answer given with no revision open
    coverage_error,
    error,
};

std::string to_string(EvalStatus status);

struct EvalResult {
    EvalStatus status = EvalStatus::ok;
    std::vector<Event> events;
    std::vector<OriginSet> uncovered;  // for coverage_error
};

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SessionOptions {
    KnowledgeBaseOptions kb;
    bool allow_files = true;  // save/load commands
};

/// The command interpreter over one knowledge base.
///
/// Every accepted command that can change the belief space or the term
/// store is journaled verbatim (trimmed). A snapshot is that journal; loading
/// replays it into a fresh knowledge base, which reproduces the same wff
/// numbering and therefore the same `retract wffN.` meaning.
class Session {
public:
    explicit Session(SessionOptions options = {});

    EvalResult eval_line(std::string_view line);
    EvalResult resolve(const ManualChoice& choice);
    EvalResult set_mode(BrMode mode);

    std::string render(const Event& event) const;
    std::string render(const std::vector<Event>& events) const;
    /// "wff12" style reference used in commands and JSON.
    std::string reference(TermId id) const;

    std::string snapshot() const;
    void save_snapshot(const std::string& path) const;
    /// Replaces this session's state with the snapshot's; on any error the
    /// session is left untouched.
    void load_snapshot_text(std::string_view text);
    void load_snapshot(const std::string& path);

    KnowledgeBase& kb() { return *kb_; }
    const KnowledgeBase& kb() const { return *kb_; }
    const std::vector<std::string>& journal() const { return journal_; }
    const SessionOptions& options() const { return options_; }

private:
    EvalResult run(std::string_view command, std::size_t offset);
    EvalResult run_wff(std::string_view body, char terminator, std::size_t offset);
    TermId resolve_reference(std::string_view token) const;
    void reset();

    SessionOptions options_;
    std::unique_ptr<KnowledgeBase> kb_;
    std::vector<std::string> journal_;
};

}  // namespace snebr
