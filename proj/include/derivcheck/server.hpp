#pragma once

#include <string>

#include "derivcheck/annotation_store.hpp"

namespace httplib {
class Server;
}

namespace derivcheck {

// GET  /api/tasks                  pending task summaries
// GET  /api/tasks/{id}             full task: text, number spans, skeleton, candidates
// POST /api/tasks/{id}/decision    {alignment, equiv_tnum, decompositions?, constants?}
// GET  /api/progress               {total, done}
void register_routes(httplib::Server& server, AnnotationStore& store);

// Blocks until the server stops. Throws Error when the port cannot be bound.
void serve_annotation(AnnotationStore& store, const std::string& host, int port);

}  // namespace derivcheck
