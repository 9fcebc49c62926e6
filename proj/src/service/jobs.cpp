#include "trussopt/gusset.hpp"
#include "trussopt/is800.hpp"
#include "trussopt/report_io.hpp"
#include "trussopt/service/service.hpp"
#include "trussopt/sizeopt.hpp"
#include "trussopt/topopt.hpp"
#include "trussopt/truss.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

namespace trussopt::service {

namespace {

const std::pair<Analysis, const char*> analysis_names[] = {{Analysis::static_analysis, "static"},
                                                           {Analysis::is800_design, "is800_design"},
                                                           {Analysis::size_opt, "size_opt"},
                                                           {Analysis::gusset_topopt, "gusset_topopt"}};

const std::pair<JobStatus, const char*> status_names[] = {
    {JobStatus::queued, "queued"}, {JobStatus::running, "running"}, {JobStatus::done, "done"}, {JobStatus::failed, "failed"}};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::string to_string(Analysis a) {
  for (const auto& [k, name] : analysis_names)
    if (k == a) return name;
  return "?";
}

std::string to_string(JobStatus s) {
  for (const auto& [k, name] : status_names)
    if (k == s) return name;
  return "?";
}

AnalysisRequest parse_request(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw RequestError(400, std::string("request is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw RequestError(400, "request must be a JSON object");

  AnalysisRequest r;
  std::vector<std::string> v;
  if (!j.contains("model_csv") || !j["model_csv"].is_string()) throw RequestError(400, "model_csv (string) is required");
  r.model_csv = j["model_csv"].get<std::string>();
  try {
    r.model = io::parse_model(r.model_csv);
  } catch (const io::ParseError& e) {
    throw RequestError(422, "model_csv does not parse", {e.what()});
  }
  for (auto& msg : validate(r.model)) v.push_back("model: " + msg);

  if (!j.contains("analyses") || !j["analyses"].is_array() || j["analyses"].empty()) {
    v.push_back("analyses: a non-empty list is required");
  } else {
    for (const auto& a : j["analyses"]) {
      bool known = false;
      for (const auto& [k, name] : analysis_names)
        if (a.is_string() && a.get<std::string>() == name) {
          r.analyses.insert(k);
          known = true;
        }
      if (!known) v.push_back("analyses: unknown analysis " + a.dump());
    }
  }
  const bool has_static = r.analyses.count(Analysis::static_analysis);
  if (r.analyses.count(Analysis::size_opt) && !has_static) v.push_back("analyses: size_opt requires static");
  if (r.analyses.count(Analysis::gusset_topopt) && !has_static) v.push_back("analyses: gusset_topopt requires static");

  if (j.contains("topopt")) {
    const json& t = j["topopt"];
    if (!t.is_object()) {
      v.push_back("topopt: must be an object");
    } else {
      if (t.contains("volfrac")) {
        if (t["volfrac"].is_number()) r.volfrac = t["volfrac"].get<double>();
        else v.push_back("topopt.volfrac: must be a number");
      }
      for (auto [key, field] : {std::pair{"nelx", &r.nelx}, std::pair{"nely", &r.nely}}) {
        if (!t.contains(key)) continue;
        if (t[key].is_number_integer()) *field = t[key].get<int>();
        else v.push_back(std::string("topopt.") + key + ": must be an integer");
      }
    }
  }
  try {
    check_params(TopOptParams{r.volfrac});
  } catch (const TopOptError& e) {
    v.push_back(std::string("topopt: ") + e.what());
  }
  if (r.nelx < 4 || r.nelx > 200) v.push_back("topopt.nelx: must lie in [4, 200]");
  if (r.nely < 4 || r.nely > 200) v.push_back("topopt.nely: must lie in [4, 200]");

  if (!v.empty()) throw RequestError(422, "request failed validation", v);
  return r;
}

json to_json(const AnalysisRequest& r) {
  json a = json::array();
  for (auto k : r.analyses) a.push_back(to_string(k));
  return {{"model_csv", r.model_csv},
          {"analyses", a},
          {"topopt", {{"volfrac", r.volfrac}, {"nelx", r.nelx}, {"nely", r.nely}}}};
}

Artifacts run_analyses(const AnalysisRequest& req) {
  const TrussModel& model = req.model;
  const auto has = [&](Analysis a) { return req.analyses.count(a) > 0; };
  Artifacts out;
  json& s = out.summary;
  out.files["model.csv"] = io::serialize(model);

  const auto results = solve_all(model);
  const Eigen::VectorXd envelope = envelope_forces(results);
  if (has(Analysis::static_analysis)) {
    out.files["forces.csv"] = io::forces_csv(model, results);
    json arr = json::array();
    for (const auto& r : results) {
      json reactions = json::array();
      for (const auto& re : r.reactions)
        reactions.push_back({{"node", re.node}, {"axis", re.axis == 0 ? "x" : "y"}, {"value", re.value}});
      arr.push_back({{"combination", r.combination},
                     {"forces", vec(r.forces)},
                     {"displacements", vec(r.displacements)},
                     {"reactions", reactions}});
    }
    s["static"] = {{"members", [&] {
                      json ids = json::array();
                      for (const auto& m : model.members) ids.push_back(m.id);
                      return ids;
                    }()},
                   {"envelope", vec(envelope)},
                   {"combinations", arr}};
  }

  std::optional<is800::DesignReport> design;
  if (has(Analysis::is800_design) || has(Analysis::size_opt) || has(Analysis::gusset_topopt))
    design = is800::design_truss(model, results);
  if (has(Analysis::is800_design)) {
    out.files["report.txt"] = io::design_report_text(*design);
    json arr = json::array();
    for (const auto& e : design->members)
      arr.push_back({{"member", e.member},
                     {"force", e.force},
                     {"length", e.length},
                     {"mode", is800::to_string(e.mode)},
                     {"angles", e.angles},
                     {"section", e.section.designation},
                     {"area", e.total_area()}});
    s["design"] = arr;
  }

  if (has(Analysis::size_opt)) {
    const auto problem = sizeopt::make_problem(model, *design);
    const auto opt = sizeopt::optimize_sizes(problem);
    const auto rows = io::comparison_table(*design, opt);
    out.files["comparison.csv"] = io::comparison_csv(rows);
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"member", r.member},
                     {"force", r.force},
                     {"length", r.length},
                     {"section", r.designation},
                     {"gross_area", r.gross_area},
                     {"optimized_area", r.optimized_area}});
    s["size_opt"] = {{"converged", opt.converged},
                     {"iterations", opt.iterations},
                     {"weight", opt.weight},
                     {"radius_kappa", problem.radius.kappa},
                     {"comparison", arr}};
  }

  if (has(Analysis::gusset_topopt)) {
    gusset::GussetParams gp;
    gp.topopt.volfrac = req.volfrac;
    gp.nelx = req.nelx;
    gp.nely = req.nely;
    // one thread per job keeps the pool the only source of parallelism
    const auto plates = gusset::optimize_all(model, envelope, &*design, gp, 1);
    json arr = json::array();
    for (const auto& g : plates) {
      const std::string name = "gusset/" + std::to_string(g.problem.joint) + ".img";
      out.files[name] = io::density_image(g.field);
      arr.push_back({{"node", g.problem.joint},
                     {"image", name},
                     {"side", g.problem.side},
                     {"compliance", g.field.compliance},
                     {"iterations", g.field.iterations},
                     {"converged", g.field.converged},
                     {"mirror_asymmetry", gusset::mirror_asymmetry(g.field.x)}});
    }
    s["gusset"] = arr;
  }
  json files = json::array();
  for (const auto& [name, bytes] : out.files) files.push_back(name);
  s["files"] = files;
  return out;
}

JobStore::JobStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

bool JobStore::valid_id(const std::string& id) {
  return id.size() == 16 && id.find_first_not_of("0123456789abcdef") == std::string::npos;
}

void JobStore::write(const fs::path& path, std::string_view bytes) const {
  fs::create_directories(path.parent_path());
  static std::atomic<unsigned long> counter{0};
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string JobStore::create(const AnalysisRequest& request) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::string id;
  do {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    id = buf;
  } while (!fs::create_directory(root_ / id));
  write(root_ / id / "request.json", to_json(request).dump(2));
  set_status(id, JobStatus::queued);
  return id;
}

void JobStore::set_status(const std::string& id, JobStatus st, const std::string& error) {
  json j = {{"status", to_string(st)}};
  if (!error.empty()) j["error"] = error;
  write(root_ / id / "status.json", j.dump());
}

void JobStore::store(const std::string& id, const Artifacts& a) {
  for (const auto& [name, bytes] : a.files) write(root_ / id / "artifacts" / name, bytes);
  write(root_ / id / "result.json", a.summary.dump(2));
}

bool JobStore::exists(const std::string& id) const {
  return valid_id(id) && fs::exists(root_ / id / "status.json");
}

std::optional<JobStatus> JobStore::status(const std::string& id) const {
  if (!exists(id)) return std::nullopt;
  const json j = json::parse(read_file(root_ / id / "status.json"));
  for (const auto& [k, name] : status_names)
    if (j.at("status") == name) return k;
  return std::nullopt;
}

std::optional<json> JobStore::record(const std::string& id) const {
  if (!exists(id)) return std::nullopt;
  const json st = json::parse(read_file(root_ / id / "status.json"));
  json req = json::parse(read_file(root_ / id / "request.json"));
  json rec = {{"id", id}, {"status", st.at("status")}, {"request", req}};
  if (st.contains("error")) rec["error"] = st["error"];
  if (st.at("status") == "done") rec["results"] = json::parse(read_file(root_ / id / "result.json"));
  return rec;
}

std::optional<std::string> JobStore::artifact(const std::string& id, const std::string& name) const {
  if (!exists(id) || name.find("..") != std::string::npos) return std::nullopt;
  const fs::path p = root_ / id / "artifacts" / name;
  if (!fs::is_regular_file(p)) return std::nullopt;
  return read_file(p);
}

AnalysisRequest JobStore::request(const std::string& id) const {
  return parse_request(read_file(root_ / id / "request.json"));
}

std::vector<std::string> JobStore::pending() const {
  std::vector<std::pair<fs::file_time_type, std::string>> found;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const std::string id = entry.path().filename().string();
    const auto st = status(id);
    if (st == JobStatus::queued || st == JobStatus::running)
      found.emplace_back(fs::last_write_time(entry.path() / "request.json"), id);
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> ids;
  for (auto& f : found) ids.push_back(f.second);
  return ids;
}

WorkerPool::WorkerPool(unsigned workers, std::function<void(const std::string&)> task) : task_(std::move(task)) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned k = 0; k < workers; ++k)
    threads_.emplace_back([this] {
      while (true) {
        std::string id;
        {
          std::unique_lock lock(mu_);
          cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
          // leftovers stay queued on disk and are picked up on restart
          if (stopping_) return;
          id = std::move(queue_.front());
          queue_.pop_front();
          ++busy_;
        }
        task_(id);
        {
          std::lock_guard lock(mu_);
          --busy_;
        }
        idle_.notify_all();
      }
    });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  threads_.clear();
}

void WorkerPool::submit(std::string id) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(id));
  }
  cv_.notify_one();
}

void WorkerPool::wait_idle() {
  std::unique_lock lock(mu_);
  idle_.wait(lock, [&] { return queue_.empty() && busy_ == 0; });
}

}  // namespace trussopt::service
