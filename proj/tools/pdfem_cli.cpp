#include "pdfem/config.hpp"
#include "pdfem/io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace pdfem;

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  int vtk_every = 0;
};

struct Loaded {
  RunConfig cfg;
  Scenario sc;
  fs::path out;
};

Loaded load(const Options& o) {
  Loaded l;
  l.cfg = read_config(o.config);
  l.sc = build_scenario(l.cfg, fs::path(o.config).parent_path().string());
  l.out = o.out.empty() ? fs::path(l.cfg.output_dir) : fs::path(o.out);
  fs::create_directories(l.out);
  return l;
}

std::vector<int> active_tips(const CrackPath& c) {
  std::vector<int> t;
  if (c.dim() != 2 || c.empty()) return t;
  for (int k = 0; k < 2; ++k)
    if (c.tip_active(k)) t.push_back(k);
  return t;
}

void write_state(const Model& m, const Vec& u, const fs::path& path, int step) {
  write_vtk(path.string(), m.mesh(), m.classification(), u, recover_stress(m.solved_state(u)), step);
}

int run_static(const Options& o) {
  Loaded l = load(o);
  Model model(l.sc.problem);
  const double R = l.sc.schedule.R0;
  StaticResult r = model.solve(R);
  std::printf("%s: %d nodes, %d elements, %d PD nodes\n", model.problem().name.c_str(), model.mesh().num_nodes(),
              model.mesh().num_elements(), model.classification().num_pd_nodes());
  std::printf("load %.6g  reaction %.6g  relative residual %.3g\n", R, r.reaction, r.stats.relative_residual);
  HistoryRow row;
  row.load = R;
  row.reaction = r.reaction;
  row.event = StepEvent::Load;
  for (int t : active_tips(model.crack())) {
    SifResult s = model.sif(t, r.u);
    std::printf("tip %d: K_I %.6g  K_II %.6g\n", t, s.K_I, s.K_II);
    row.tip_x = model.crack().tip(t).x();
    row.tip_y = model.crack().tip(t).y();
    row.K_I = s.K_I;
    row.K_II = s.K_II;
    row.K_eq = s.K_eq;
    row.theta_c = s.theta_c;
  }
  write_state(model, r.u, l.out / (model.problem().name + "_static.vtk"), 0);
  write_history_csv((l.out / "history.csv").string(), {row});
  return 0;
}

int run_propagate(const Options& o) {
  Loaded l = load(o);
  Model model(l.sc.problem);
  auto cb = [&](const Model& m, const StaticResult& r, const HistoryRow& row) {
    std::printf("step %4d  load %.6g  K_eq %.6g  reaction %.6g  %s\n", row.step, row.load, row.K_eq, row.reaction,
                row.event == StepEvent::Grow ? "grow" : "load");
    if (o.vtk_every > 0 && row.step % o.vtk_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "_%05d.vtk", row.step);
      write_state(m, r.u, l.out / (m.problem().name + name), row.step);
    }
  };
  SimulationState st = run_quasi_static(model, l.sc.schedule, cb);
  std::printf("stopped after %zu steps (%d growth steps): %s\n", st.history.size(), st.growth_steps,
              st.stop_reason.c_str());
  if (st.history.empty()) throw Error("no steps were run");
  write_history_csv((l.out / "history.csv").string(), st.history);
  return 0;
}

int run_sif(const Options& o) {
  Loaded l = load(o);
  Model model(l.sc.problem);
  StaticResult r = model.solve(l.sc.schedule.R0);
  auto tips = active_tips(model.crack());
  if (tips.empty()) throw Error("no active 2-D crack tip to evaluate");
  const bool plate = l.cfg.scenario == "infinite_plate";
  InfinitePlateParams ip;
  if (l.cfg.theta) ip.theta_deg = *l.cfg.theta;
  if (l.cfg.sigma) ip.sigma = *l.cfg.sigma;
  const ClosedFormSif ref = infinite_plate_sif(ip);
  for (int t : tips) {
    SifResult s = model.sif(t, r.u);
    std::printf("tip %d  K_I %.6g  K_II %.6g  K_eq %.6g  theta_c %.6g\n", t, s.K_I, s.K_II, s.K_eq, s.theta_c);
    if (plate)
      std::printf("        closed form K_I %.6g  K_II %.6g  error K_I %.3f%%  K_II %.3f%%\n", ref.K_I, ref.K_II,
                  100 * std::abs(s.K_I - ref.K_I) / ref.K0, 100 * std::abs(s.K_II - ref.K_II) / ref.K0);
  }
  return 0;
}

struct BenchRow {
  double seconds;
  double megabytes;
  Index pd_nodes;
};

BenchRow bench_one(Problem p) {
  Model m(std::move(p));
  auto t0 = std::chrono::steady_clock::now();
  const CsrMatrix& K = m.stiffness();
  const double mb = K.memory_bytes() / (1024.0 * 1024.0);
  m.solve(1.0);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s, mb, m.classification().num_pd_nodes()};
}

int run_bench(const Options& o) {
  Loaded l = load(o);
  Problem adaptive = l.sc.problem, full = l.sc.problem;
  adaptive.num.full_pd = false;
  full.num.full_pd = true;
  const BenchRow a = bench_one(std::move(adaptive));
  const BenchRow f = bench_one(std::move(full));
  std::printf("%-16s %10s %16s %18s\n", "Model", "PD nodes", "Wall time (s)", "Memory usage (MB)");
  std::printf("%-16s %10d %16.3f %18.2f\n", "Adaptive", a.pd_nodes, a.seconds, a.megabytes);
  std::printf("%-16s %10d %16.3f %18.2f\n", "Full PD", f.pd_nodes, f.seconds, f.megabytes);
  std::printf("full PD / adaptive: time %.2fx, memory %.2fx\n", f.seconds / a.seconds, f.megabytes / a.megabytes);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive peridynamic least-squares / finite element fracture solver"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration file")->required()->envname("PDFEM_CONFIG");
    sub->add_option("--out", o.out, "Output directory")->envname("PDFEM_OUT");
    sub->add_option("--threads", o.threads, "OpenMP threads (0 keeps the default)")
        ->check(CLI::NonNegativeNumber)
        ->envname("PDFEM_THREADS");
    sub->add_option("--write-vtk-every", o.vtk_every, "Write a VTK file every k steps (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->envname("PDFEM_WRITE_VTK_EVERY");
  };
  auto* st = app.add_subcommand("static", "Single static solve with VTK and CSV output");
  auto* pr = app.add_subcommand("propagate", "Quasi-static crack propagation");
  auto* si = app.add_subcommand("sif", "Stress intensity factors at the active crack tips");
  auto* be = app.add_subcommand("bench", "Adaptive versus full-PD assembly and solve cost");
  for (auto* s : {st, pr, si, be}) add_common(s);

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);
  try {
    if (*st) return run_static(o);
    if (*pr) return run_propagate(o);
    if (*si) return run_sif(o);
    if (*be) return run_bench(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
