#pragma once

#include "trussopt/model.hpp"

#include <json.hpp>

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace trussopt::service {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum class Analysis { static_analysis, is800_design, size_opt, gusset_topopt };

std::string to_string(Analysis a);

struct AnalysisRequest {
  std::string model_csv;
  TrussModel model;
  std::set<Analysis> analyses;
  double volfrac = 0.4;
  int nelx = 60, nely = 60;
};

// Carries every violation found, not just the first. `status` is the HTTP code.
class RequestError : public std::runtime_error {
 public:
  RequestError(int status, std::string what, std::vector<std::string> violations = {})
      : std::runtime_error(std::move(what)), status_(status), violations_(std::move(violations)) {}
  int status() const { return status_; }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  int status_;
  std::vector<std::string> violations_;
};

AnalysisRequest parse_request(std::string_view body);
json to_json(const AnalysisRequest& r);

// Files keyed by relative path plus the JSON summary served in the job record.
// No ids or timestamps inside, so identical requests give identical bytes.
struct Artifacts {
  std::map<std::string, std::string> files;
  json summary;
};

Artifacts run_analyses(const AnalysisRequest& request);

enum class JobStatus { queued, running, done, failed };
std::string to_string(JobStatus s);

// One directory per job; every file lands by write-to-temp then rename.
class JobStore {
 public:
  explicit JobStore(fs::path root);

  std::string create(const AnalysisRequest& request);
  void set_status(const std::string& id, JobStatus status, const std::string& error = {});
  void store(const std::string& id, const Artifacts& artifacts);

  static bool valid_id(const std::string& id);
  bool exists(const std::string& id) const;
  std::optional<JobStatus> status(const std::string& id) const;
  std::optional<json> record(const std::string& id) const;
  std::optional<std::string> artifact(const std::string& id, const std::string& name) const;
  AnalysisRequest request(const std::string& id) const;
  // Jobs left queued or running by an earlier process, oldest first.
  std::vector<std::string> pending() const;

  const fs::path& root() const { return root_; }

 private:
  void write(const fs::path& path, std::string_view bytes) const;
  fs::path root_;
};

// Fixed number of threads draining a FIFO; submissions never spawn threads.
class WorkerPool {
 public:
  WorkerPool(unsigned workers, std::function<void(const std::string&)> task);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void submit(std::string id);
  // Blocks until the queue is empty and no task is running.
  void wait_idle();
  unsigned size() const { return unsigned(threads_.size()); }

 private:
  std::mutex mu_;
  std::condition_variable cv_, idle_;
  std::deque<std::string> queue_;
  unsigned busy_ = 0;
  bool stopping_ = false;
  std::function<void(const std::string&)> task_;
  std::vector<std::jthread> threads_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  fs::path job_dir = "jobs";
  unsigned workers = 0;  // 0 = hardware concurrency
  fs::path static_dir;   // UI bundle, optional
};

// Flags win over TRUSSOPT_PORT, TRUSSOPT_JOB_DIR, TRUSSOPT_WORKERS, TRUSSOPT_STATIC_DIR.
ServerConfig config_from_env(ServerConfig base = {});

class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();

  // Binds and returns the bound port; then `listen` blocks until `stop`.
  int bind();
  void listen();
  void stop();
  JobStore& store();
  WorkerPool& pool();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trussopt::service
