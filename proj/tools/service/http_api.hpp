#pragma once

#include <httplib.h>

#include "service/project_store.hpp"

namespace mapreel::service {

// Installs every project route on `server`. The store must outlive it.
void registerRoutes(httplib::Server& server, ProjectStore& store);

// Body of an error response: {"error": ..., "violations": [{path, message}]}.
nlohmann::json errorBody(const std::string& message, const nlohmann::json& violations = nlohmann::json::array());

}  // namespace mapreel::service
