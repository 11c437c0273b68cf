#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "entrocone/entrocone.hpp"

using namespace entrocone;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int restarts = 64;
  std::optional<int> threads;
  bool long_run = false;

  RunConfig config(const std::string& command, Json args) const {
    RunConfig c;
    c.command = command;
    c.seed = seed;
    c.restarts = restarts;
    c.threads = resolve_threads(threads);
    c.long_run = long_run;
    c.args = std::move(args);
    return c;
  }

  OptConfig opt(const RunConfig& rc) const {
    OptConfig o;
    o.seed = rc.seed;
    o.restarts = rc.restarts;
    o.threads = rc.threads;
    o.long_run = rc.long_run;
    return o;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  app->add_option("--restarts", c.restarts, "Optimizer restarts per support")->capture_default_str();
  app->add_option("--threads", c.threads, "Worker threads (default: $ENTROCONE_THREADS, then all cores)");
  app->add_flag("--long-run", c.long_run, "Allow the expensive k >= 6 cells");
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return is;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---- enum ----

struct EnumArgs {
  int vars = 4, atoms = 4;
  std::string backend = "leiterspiel";
  std::string out, census;
};

int run_enum(const EnumArgs& a, const Common& c) {
  Backend b = a.backend == "brute" ? Backend::brute : Backend::leiterspiel;
  auto rc = c.config("enum", Json{{"vars", a.vars}, {"atoms", a.atoms}, {"backend", a.backend}});
  auto recs = enumerate_supports(a.vars, a.atoms, b, {.long_run = c.long_run});
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    write_support_jsonl(os, recs, rc);
  }
  if (!a.census.empty()) {
    auto os = open_out(a.census);
    write_census_csv(os, census(a.vars, a.atoms, b, {.long_run = c.long_run}), rc);
  }
  std::cout << recs.size() << (recs.size() == 1 ? " support" : " supports") << '\n';
  return 0;
}

// ---- score ----

struct ScoreArgs {
  std::string supports, out;
};

int run_score(const ScoreArgs& a, const Common& c) {
  auto rc = c.config("score", Json{{"supports", a.supports}});
  auto is = open_in(a.supports);
  auto lines = read_support_jsonl(is);
  OptConfig cfg = c.opt(rc);
  std::vector<OptResult> results(lines.size());
  std::vector<std::string> errors(lines.size());
  parallel_for(lines.size(), cfg.threads, [&](std::size_t i) {
    OptConfig local = cfg;
    local.seed = derive_seed(cfg.seed, i);
    try {
      results[i] = minimize_score(lines[i].support, local);
    } catch (const std::exception& e) {
      errors[i] = "line " + std::to_string(lines[i].line) + ": " + e.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  std::vector<ResultRow> rows;
  std::size_t violating = 0;
  double best = std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    rows.push_back(result_row(r));
    if (r.best_value < -rc.violation_tol) ++violating;
    best = std::min(best, r.best_value);
  }
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    write_results_jsonl(os, rows, rc);
  }
  std::cout << rows.size() << " supports scored, " << violating << " violating";
  if (!rows.empty()) std::cout << ", best " << fmt(best);
  std::cout << '\n';
  return 0;
}

// ---- shared geometry output ----

struct Projected {
  std::vector<Coords3> coords;
  std::vector<std::string> ids;
  std::size_t degenerate = 0;
};

Projected project_all(const std::vector<EntropicVector>& hs, const std::vector<std::string>& ids) {
  Projected p;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    auto pc = project_point(hs[i]);
    if (pc.degenerate) {
      ++p.degenerate;
      continue;
    }
    p.coords.push_back(pc.coords);
    p.ids.push_back(ids[i]);
  }
  return p;
}

void write_projection(const Projected& p, const fs::path& coords, const fs::path& contours, int levels,
                      const RunConfig& rc) {
  {
    auto os = open_out(coords);
    write_meta_comment(os, rc);
    write_coords_csv(os, p.coords, p.ids);
  }
  if (!contours.empty()) {
    auto os = open_out(contours);
    write_meta_comment(os, rc);
    write_contours_csv(os, hull3(p.coords), levels);
  }
}

std::vector<EntropicVector> with_facets(const std::vector<EntropicVector>& pts) {
  auto g = facet_generators();
  g.insert(g.end(), pts.begin(), pts.end());
  return g;
}

// ---- innerbound ----

struct InnerArgs {
  std::vector<int> atoms{4};
  std::vector<int> costs{1000};
  std::size_t volume_samples = 200000;
  std::size_t six_supports = 32;
  int harvest_restarts = 2;
  int levels = 8;
  std::string out_dir = "innerbound";
};

int run_innerbound(const InnerArgs& a, const Common& c) {
  for (int k : a.atoms)
    if (k < 4 || k > 6) throw ArgumentError("--atoms must be drawn from 4, 5, 6");
  if (a.costs.size() != 1 && a.costs.size() != a.atoms.size())
    throw ArgumentError("--costs takes one value or one per atom count");
  auto rc = c.config("innerbound", Json{{"atoms", a.atoms},
                                        {"costs", a.costs},
                                        {"volume_samples", a.volume_samples},
                                        {"six_supports", a.six_supports},
                                        {"harvest_restarts", a.harvest_restarts}});
  OptConfig cfg = c.opt(rc);
  HarvestConfig hc;
  hc.opt.seed = rc.seed;
  hc.opt.restarts = a.harvest_restarts;
  hc.opt.threads = rc.threads;

  std::map<int, std::vector<OptResult>> violators;
  auto need = [&](int k) { return std::find(a.atoms.begin(), a.atoms.end(), k) != a.atoms.end(); };
  if (need(4)) violators[4] = violating_census(4, cfg).violating;
  if (need(5) || need(6)) violators[5] = violating_census(5, cfg).violating;
  if (need(6)) violators[6] = six_atom_sample(violators[5], a.six_supports, cfg);

  std::vector<ResultRow> rows;
  std::vector<EntropicVector> hs;
  std::vector<std::string> ids;
  std::string set_name = "facets";
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    const int k = a.atoms[i];
    const int costs = a.costs.size() == 1 ? a.costs[0] : a.costs[i];
    std::vector<HarvestPoint> pts;
    if (costs > 0) pts = harvest(violators[k], costs, hc);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      auto row = result_row(pts[j]);
      row.extra["atoms"] = k;
      rows.push_back(std::move(row));
      hs.push_back(pts[j].h);
      ids.push_back(std::to_string(k) + "atom-" + std::to_string(j));
    }
    set_name += "+" + std::to_string(k) + "atom";
    std::cout << k << "-atom: " << violators[k].size() << " violating supports, " << costs << " costs, "
              << pts.size() << " points\n";
  }

  fs::path dir(a.out_dir);
  {
    auto os = open_out(dir / "points.jsonl");
    write_results_jsonl(os, rows, rc);
  }
  write_projection(project_all(hs, ids), dir / "coords.csv", dir / "contours.csv", a.levels, rc);
  auto vol = volume_fraction(with_facets(hs), a.volume_samples, rc.seed, rc.threads, set_name, rc.lp_tol);
  {
    auto os = open_out(dir / "volume.json");
    os << volume_json(vol, rc).dump(2) << '\n';
  }
  std::cout << "volume fraction " << fmt(vol.fraction, "%.4f") << " +- " << fmt(vol.stderr_, "%.4f") << " ("
            << vol.samples << " samples)\n";
  return 0;
}

// ---- volume / project ----

struct PointsArgs {
  std::string points;
  std::size_t samples = 200000;
  std::string out;
  std::string contours;
  int levels = 8;
};

std::vector<EntropicVector> read_points(const std::string& path) {
  auto is = open_in(path);
  std::vector<EntropicVector> hs;
  for (auto& r : read_results_jsonl(is)) {
    auto h = r.h();
    if (h.n() != 4) throw ArgumentError("points must be 4-variable entropy vectors");
    hs.push_back(h);
  }
  return hs;
}

int run_volume(const PointsArgs& a, const Common& c) {
  auto rc = c.config("volume", Json{{"points", a.points}, {"samples", a.samples}});
  auto hs = read_points(a.points);
  auto vol = volume_fraction(with_facets(hs), a.samples, rc.seed, rc.threads, "facets+" + a.points, rc.lp_tol);
  auto j = volume_json(vol, rc);
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    os << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_project(const PointsArgs& a, const Common& c) {
  auto rc = c.config("project", Json{{"points", a.points}, {"levels", a.levels}});
  auto hs = read_points(a.points);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < hs.size(); ++i) ids.push_back(std::to_string(i));
  auto p = project_all(hs, ids);
  write_projection(p, a.out.empty() ? "coords.csv" : a.out, a.contours, a.levels, rc);
  std::cout << p.coords.size() << " points projected";
  if (p.degenerate) std::cout << ", " << p.degenerate << " degenerate skipped";
  std::cout << '\n';
  return 0;
}

// ---- igverify ----

struct VerifyArgs {
  std::string check;
  std::size_t trials = 100;
  std::string out;
};

int run_igverify(const VerifyArgs& a, const Common& c) {
  auto rc = c.config("igverify", Json{{"check", a.check}, {"trials", a.trials}});
  std::vector<CheckResult> checks;
  if (a.check.empty()) {
    checks = run_verification(rc.seed, a.trials);
  } else if (a.check == "alpha0") {
    std::cout << "alpha0 " << fmt(alpha0(), "%.17g") << "\ntau " << fmt(fouratom_threshold(), "%.17g") << '\n';
    checks.push_back(run_check("alpha0", rc.seed));
  } else if (a.check == "planarity") {
    for (auto n : {"planarity_fouratom", "planarity_fiveatom", "sign_separation_fiveatom"})
      checks.push_back(run_check(n, rc.seed, 4 * a.trials));
    std::cout << "4-atom boundary: " << (checks[0].pass ? "planar" : "not planar") << " (residual "
              << fmt(checks[0].max_error) << ")\n"
              << "5-atom boundary: " << (checks[1].pass ? "non-planar" : "planar") << " (residual "
              << fmt(checks[1].max_error) << "), sides " << (checks[2].pass ? "separated" : "mixed") << '\n';
  } else {
    checks.push_back(run_check(a.check, rc.seed, a.trials));
  }
  auto j = verification_json(checks, rc);
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    os << j.dump(2) << '\n';
  }
  for (auto& ch : checks)
    std::cout << (ch.pass ? "ok   " : "FAIL ") << ch.name << " (trials " << ch.trials << ", max_error "
              << fmt(ch.max_error) << ")\n";
  return j["pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-region tools for four random variables"};
  app.require_subcommand(1);
  Common common;

  EnumArgs ea;
  auto* en = app.add_subcommand("enum", "Enumerate non-isomorphic supports");
  en->add_option("--vars", ea.vars, "Number of variables")->capture_default_str();
  en->add_option("--atoms", ea.atoms, "Number of atoms")->capture_default_str();
  en->add_option("--backend", ea.backend)->check(CLI::IsMember({"leiterspiel", "brute"}))->capture_default_str();
  en->add_option("--out", ea.out, "Support JSONL output");
  en->add_option("--census", ea.census, "Census CSV for all smaller (vars, atoms) too");
  add_common(en, common);

  ScoreArgs sa;
  auto* sc = app.add_subcommand("score", "Minimize the Ingleton score over each support in a file");
  sc->add_option("supports", sa.supports, "Support JSONL")->required();
  sc->add_option("--out", sa.out, "Results JSONL output");
  add_common(sc, common);

  InnerArgs ia;
  auto* ib = app.add_subcommand("innerbound", "Harvest violating vectors and measure the inner bound");
  ib->add_option("--atoms", ia.atoms, "Atom counts, e.g. 4,5,6")->delimiter(',')->capture_default_str();
  ib->add_option("--costs", ia.costs, "Random costs, one value or one per atom count")
      ->delimiter(',')
      ->capture_default_str();
  ib->add_option("--volume-samples", ia.volume_samples)->capture_default_str();
  ib->add_option("--six-supports", ia.six_supports, "6-atom supports sampled")->capture_default_str();
  ib->add_option("--harvest-restarts", ia.harvest_restarts)->capture_default_str();
  ib->add_option("--levels", ia.levels, "Contour levels")->capture_default_str();
  ib->add_option("--out-dir", ia.out_dir)->capture_default_str();
  add_common(ib, common);

  PointsArgs va;
  auto* vo = app.add_subcommand("volume", "Volume fraction of the hull of the facet rays and given points");
  vo->add_option("points", va.points, "Results JSONL with hvec fields")->required();
  vo->add_option("--samples", va.samples)->capture_default_str();
  vo->add_option("--out", va.out, "Volume JSON output");
  add_common(vo, common);

  PointsArgs pa;
  auto* pr = app.add_subcommand("project", "Project entropy vectors to 3-D coordinates");
  pr->add_option("points", pa.points, "Results JSONL with hvec fields")->required();
  pr->add_option("--out", pa.out, "Coords CSV output (default coords.csv)");
  pr->add_option("--contours", pa.contours, "Contour CSV output");
  pr->add_option("--levels", pa.levels)->capture_default_str();
  add_common(pr, common);

  VerifyArgs vf;
  auto* ig = app.add_subcommand("igverify", "Run the information-geometry checks");
  ig->add_option("--check", vf.check, "alpha0, planarity, or one check name");
  ig->add_option("--trials", vf.trials)->capture_default_str();
  ig->add_option("--out", vf.out, "Report JSON output");
  add_common(ig, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*en) return run_enum(ea, common);
    if (*sc) return run_score(sa, common);
    if (*ib) return run_innerbound(ia, common);
    if (*vo) return run_volume(va, common);
    if (*pr) return run_project(pa, common);
    if (*ig) return run_igverify(vf, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
