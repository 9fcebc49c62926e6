// Command-line front end: the HTTP service plus one subcommand per solver.
#include "trussopt/gusset.hpp"
#include "trussopt/is800.hpp"
#include "trussopt/report_io.hpp"
#include "trussopt/service/advisor.hpp"
#include "trussopt/service/service.hpp"
#include "trussopt/sizeopt.hpp"
#include "trussopt/topopt.hpp"
#include "trussopt/truss.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace trussopt;
namespace fs = std::filesystem;

namespace {

TrussModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  TrussModel m = io::parse_model(os.str());
  const auto problems = validate(m);
  if (!problems.empty()) {
    std::string msg = path + " is not a valid model:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  return m;
}

void emit(const std::string& bytes, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << bytes;
    return;
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream f(out, std::ios::binary);
  f << bytes;
  if (!f) throw std::runtime_error("cannot write " + out);
}

service::Server* running = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane truss analysis, IS 800 design, sizing and gusset topology optimisation"};
  app.require_subcommand(1);

  auto cfg = service::config_from_env();
  auto* serve = app.add_subcommand("serve", "run the HTTP job service");
  serve->add_option("--host", cfg.host, "bind address")->capture_default_str();
  serve->add_option("--port", cfg.port, "port, 0 for any free one")->capture_default_str();
  serve->add_option("--jobs", cfg.job_dir, "job store directory")->capture_default_str();
  serve->add_option("--workers", cfg.workers, "worker threads, 0 = CPU count")->capture_default_str();
  serve->add_option("--static", cfg.static_dir, "directory served at /");

  std::string model_path, out;
  auto* analyze = app.add_subcommand("analyze", "member forces per load combination (CSV)");
  analyze->add_option("model", model_path, "model CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("-o,--out", out, "output file, default stdout");

  auto* design = app.add_subcommand("design", "IS 800 member design report");
  design->add_option("model", model_path, "model CSV")->required()->check(CLI::ExistingFile);
  design->add_option("-o,--out", out, "output file, default stdout");

  auto* size = app.add_subcommand("sizeopt", "minimum-weight areas against the IS 800 design (CSV)");
  size->add_option("model", model_path, "model CSV")->required()->check(CLI::ExistingFile);
  size->add_option("-o,--out", out, "output file, default stdout");

  gusset::GussetParams gp;
  std::string out_dir = "gussets";
  auto* gus = app.add_subcommand("gusset", "gusset plate topology at every joint (PGM images)");
  gus->add_option("model", model_path, "model CSV")->required()->check(CLI::ExistingFile);
  gus->add_option("--volfrac", gp.topopt.volfrac)->capture_default_str();
  gus->add_option("--nelx", gp.nelx)->capture_default_str();
  gus->add_option("--nely", gp.nely)->capture_default_str();
  gus->add_option("-d,--dir", out_dir, "output directory")->capture_default_str();

  int nelx = 60, nely = 20, upscale = 4;
  TopOptParams tp;
  auto* mbb = app.add_subcommand("mbb", "MBB half-beam benchmark");
  mbb->add_option("--nelx", nelx)->capture_default_str();
  mbb->add_option("--nely", nely)->capture_default_str();
  mbb->add_option("--volfrac", tp.volfrac)->capture_default_str();
  mbb->add_option("--penal", tp.penal)->capture_default_str();
  mbb->add_option("--rmin", tp.rmin)->capture_default_str();
  mbb->add_option("--upscale", upscale)->capture_default_str();
  mbb->add_option("-o,--out", out, "PGM output")->required();

  double span = 8;
  auto* adv = app.add_subcommand("advisor", "suggest truss layouts for a span");
  adv->add_option("--span", span, "span in m")->required();
  adv->add_option("-d,--dir", out_dir, "write each suggestion as <type>.csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      service::Server server(cfg);
      const int port = server.bind();
      std::cerr << "listening on " << cfg.host << ":" << port << ", jobs in " << cfg.job_dir << "\n";
      running = &server;
      std::signal(SIGINT, [](int) { if (running) running->stop(); });
      std::signal(SIGTERM, [](int) { if (running) running->stop(); });
      server.listen();
      running = nullptr;
    } else if (*analyze) {
      const auto m = load_model(model_path);
      emit(io::forces_csv(m, solve_all(m)), out);
    } else if (*design) {
      const auto m = load_model(model_path);
      emit(io::design_report_text(is800::design_truss(m, solve_all(m))), out);
    } else if (*size) {
      const auto m = load_model(model_path);
      const auto rep = is800::design_truss(m, solve_all(m));
      const auto opt = sizeopt::optimize_sizes(sizeopt::make_problem(m, rep));
      if (!opt.converged) std::cerr << "warning: size optimisation stopped before convergence\n";
      emit(io::comparison_csv(io::comparison_table(rep, opt)), out);
    } else if (*gus) {
      const auto m = load_model(model_path);
      const auto results = solve_all(m);
      const auto rep = is800::design_truss(m, results);
      for (const auto& g : gusset::optimize_all(m, envelope_forces(results), &rep, gp)) {
        const std::string file = (fs::path(out_dir) / ("gusset_" + std::to_string(g.problem.joint) + ".pgm")).string();
        emit(io::density_image(g.field, 4), file);
        std::cout << "joint " << g.problem.joint << ": " << g.field.iterations << " iterations, compliance "
                  << g.field.compliance << " -> " << file << "\n";
      }
    } else if (*mbb) {
      const auto f = optimize(mbb_half_beam(nelx, nely), tp);
      emit(io::density_image(f, upscale), out);
      std::cout << "compliance " << f.compliance << " after " << f.iterations << " iterations\n";
    } else if (*adv) {
      for (const auto& s : advisor::advise(span)) {
        std::cout << s.type << ": " << s.panels << " panels, rise " << s.height << " m, " << s.model.members.size()
                  << " members\n";
        if (adv->count("--dir")) emit(io::serialize(s.model), (fs::path(out_dir) / (s.type + ".csv")).string());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
