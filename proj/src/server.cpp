#include "derivcheck/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "derivcheck/task_io.hpp"

namespace derivcheck {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& reason) {
  send_json(res, status, ordered_json{{"error", reason}});
}

ordered_json summary(const AnnotationTask& t) {
  return ordered_json{{"id", t.id},
                      {"status", task_status_name(t.status)},
                      {"text", t.problem.text},
                      {"slots", t.slots.size()},
                      {"open_literals", t.open_literals.size()}};
}

}  // namespace

void register_routes(httplib::Server& server, AnnotationStore& store) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  server.Get("/api/tasks", [&store](const httplib::Request&, httplib::Response& res) {
    ordered_json out = ordered_json::array();
    for (const auto& t : store.pending()) out.push_back(summary(t));
    send_json(res, 200, out);
  });

  server.Get("/api/tasks/:id", [&store](const httplib::Request& req, httplib::Response& res) {
    const auto task = store.task(req.path_params.at("id"));
    if (!task) return send_error(res, 404, "unknown task '" + req.path_params.at("id") + "'");
    send_json(res, 200, task_to_json(*task));
  });

  server.Post("/api/tasks/:id/decision", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.path_params.at("id");
    try {
      const json body = json::parse(req.body);
      HumanDecision decision = decision_from_json(body);
      store.submit(id, std::move(decision));
      send_json(res, 200, ordered_json{{"task_id", id}, {"status", "done"}});
    } catch (const json::parse_error& e) {
      send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const UnknownTask& e) {
      send_error(res, 404, e.what());
    } catch (const DecisionError& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });

  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Get("/api/progress", [&store](const httplib::Request&, httplib::Response& res) {
    const Progress p = store.progress();
    send_json(res, 200, ordered_json{{"total", p.total}, {"done", p.done}});
  });
}

void serve_annotation(AnnotationStore& store, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, store);
  if (!server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  server.listen_after_bind();
}

}  // namespace derivcheck
