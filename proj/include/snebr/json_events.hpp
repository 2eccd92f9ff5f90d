#pragma once

#include <json.hpp>

#include "snebr/session.hpp"

namespace snebr {

/// {"id": "wff12", "text": "SMART(FRAN)"}
nlohmann::json wff_json(const Session& session, TermId id);
/// References ordered by display index.
nlohmann::json wff_list_json(const Session& session, std::vector<TermId> ids);
nlohmann::json event_json(const Session& session, const Event& event);
nlohmann::json events_json(const Session& session, const std::vector<Event>& events);
/// The pending revision, or {"pending": false}.
nlohmann::json revision_json(const Session& session);
nlohmann::json beliefs_json(const Session& session);

}  // namespace snebr
