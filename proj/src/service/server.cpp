#include "trussopt/report_io.hpp"
#include "trussopt/service/advisor.hpp"
#include "trussopt/service/service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <iostream>

namespace trussopt::service {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& msg, const std::vector<std::string>& v = {}) {
  json body = {{"error", msg}};
  if (!v.empty()) body["violations"] = v;
  send_json(res, status, body);
}

json model_json(const TrussModel& m) {
  json nodes = json::array(), members = json::array();
  for (const auto& n : m.nodes) nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}});
  for (const auto& e : m.members) members.push_back({{"id", e.id}, {"ni", e.node_i}, {"nj", e.node_j}});
  return {{"nodes", nodes}, {"members", members}};
}

}  // namespace

ServerConfig config_from_env(ServerConfig c) {
  if (const char* v = std::getenv("TRUSSOPT_PORT")) c.port = std::atoi(v);
  if (const char* v = std::getenv("TRUSSOPT_JOB_DIR")) c.job_dir = v;
  if (const char* v = std::getenv("TRUSSOPT_WORKERS")) c.workers = unsigned(std::atoi(v));
  if (const char* v = std::getenv("TRUSSOPT_STATIC_DIR")) c.static_dir = v;
  return c;
}

struct Server::Impl {
  ServerConfig config;
  JobStore store;
  WorkerPool pool;
  httplib::Server http;

  explicit Impl(ServerConfig c)
      : config(std::move(c)), store(config.job_dir), pool(config.workers, [this](const std::string& id) { run(id); }) {
    routes();
    for (const auto& id : store.pending()) pool.submit(id);
  }

  void run(const std::string& id) {
    try {
      store.set_status(id, JobStatus::running);
      const Artifacts a = run_analyses(store.request(id));
      store.store(id, a);
      store.set_status(id, JobStatus::done);
    } catch (const std::exception& e) {
      store.set_status(id, JobStatus::failed, e.what());
    }
  }

  void artifact(const httplib::Request& req, httplib::Response& res, const std::string& name, const char* type) {
    const std::string id = req.path_params.at("id");
    const auto st = store.status(id);
    if (!st) return send_error(res, 404, "job not found");
    if (*st != JobStatus::done) return send_error(res, 409, "job is " + to_string(*st));
    const auto bytes = store.artifact(id, name);
    if (!bytes) return send_error(res, 404, name + " was not produced by this job");
    res.set_content(*bytes, type);
  }

  void routes() {
    http.Post("/api/jobs", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const AnalysisRequest r = parse_request(req.body);
        const std::string id = store.create(r);
        pool.submit(id);
        send_json(res, 202, {{"id", id}, {"status", "queued"}});
      } catch (const RequestError& e) {
        send_error(res, e.status(), e.what(), e.violations());
      }
    });
    http.Get("/api/jobs/:id", [this](const httplib::Request& req, httplib::Response& res) {
      const auto rec = store.record(req.path_params.at("id"));
      if (!rec) return send_error(res, 404, "job not found");
      send_json(res, 200, *rec);
    });
    http.Get("/api/jobs/:id/report.txt", [this](const httplib::Request& q, httplib::Response& r) {
      artifact(q, r, "report.txt", "text/plain; charset=utf-8");
    });
    http.Get("/api/jobs/:id/model.csv", [this](const httplib::Request& q, httplib::Response& r) {
      artifact(q, r, "model.csv", "text/csv");
    });
    http.Get("/api/jobs/:id/forces.csv", [this](const httplib::Request& q, httplib::Response& r) {
      artifact(q, r, "forces.csv", "text/csv");
    });
    http.Get("/api/jobs/:id/comparison.csv", [this](const httplib::Request& q, httplib::Response& r) {
      artifact(q, r, "comparison.csv", "text/csv");
    });
    http.Get(R"(/api/jobs/([0-9a-f]+)/gusset/(\d+)\.img)", [this](const httplib::Request& q, httplib::Response& r) {
      httplib::Request copy = q;
      copy.path_params["id"] = q.matches[1];
      artifact(copy, r, "gusset/" + std::string(q.matches[2]) + ".img", "image/x-portable-graymap");
    });
    http.Get("/api/advisor", [](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("span")) return send_error(res, 400, "span is required");
      double span = 0;
      try {
        std::size_t used = 0;
        const std::string raw = req.get_param_value("span");
        span = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
      } catch (const std::exception&) {
        return send_error(res, 400, "span must be a number");
      }
      try {
        json arr = json::array();
        for (const auto& s : advisor::advise(span))
          arr.push_back({{"type", s.type},
                         {"span", s.span},
                         {"height", s.height},
                         {"height_ratio", s.height / s.span},
                         {"panels", s.panels},
                         {"model_csv", io::serialize(s.model)},
                         {"geometry", model_json(s.model)}});
        send_json(res, 200, {{"span", span}, {"suggestions", arr}});
      } catch (const advisor::AdvisorError& e) {
        send_error(res, 400, e.what());
      }
    });
    http.Get("/api/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });
    if (!config.static_dir.empty() && fs::is_directory(config.static_dir))
      http.set_mount_point("/", config.static_dir.string());
  }
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->config.port == 0) {
    const int port = impl_->http.bind_to_any_port(impl_->config.host);
    if (port < 0) throw std::runtime_error("cannot bind " + impl_->config.host + " to any port");
    return port;
  }
  if (!impl_->http.bind_to_port(impl_->config.host, impl_->config.port))
    throw std::runtime_error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  return impl_->config.port;
}

void Server::listen() { impl_->http.listen_after_bind(); }
void Server::stop() {
  if (impl_) impl_->http.stop();
}
JobStore& Server::store() { return impl_->store; }
WorkerPool& Server::pool() { return impl_->pool; }

}  // namespace trussopt::service
