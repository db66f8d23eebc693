// Batch front-end: computes variations, eps-profiles, step approximants,
// growth classifications, and selection traces from CSV inputs, and runs the
// seeded property suites. Reports land in --out (or $APPROXVAR_OUT) as JSON +
// text summary + CSV plot data.
//
// Exit codes: 0 success/certified, 1 input error or failed checks,
// 2 selection hypothesis diagnosis.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "approxvar/checks.hpp"
#include "approxvar/fixtures.hpp"
#include "approxvar/json_util.hpp"
#include "approxvar/selection.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace approxvar;

namespace {

struct CommonOpts {
  std::string space_json = R"({"kind":"scalar"})";
  std::string p_list = "0";
  std::string eps_list;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

GageSpace parse_space(const std::string& text) {
  return GageSpace::from_json(nlohmann::json::parse(text));
}

std::vector<PseudometricId> parse_ps(const std::string& text) {
  std::vector<PseudometricId> ps;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) ps.emplace_back(std::stoul(tok));
  }
  if (ps.empty()) throw std::invalid_argument("--p needs at least one index");
  return ps;
}

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> ladder;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) ladder.push_back(std::stod(tok));
  }
  if (ladder.empty()) throw std::invalid_argument("--eps needs at least one value");
  return ladder;
}

std::vector<std::pair<double, double>> parse_windows(const std::string& text) {
  std::vector<std::pair<double, double>> windows;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("window must look like a:b");
    }
    windows.emplace_back(std::stod(tok.substr(0, colon)),
                         std::stod(tok.substr(colon + 1)));
  }
  return windows;
}

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("APPROXVAR_OUT")) return env;
  return ".";
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void emit_bundle(const fs::path& dir, const std::string& stem,
                 const nlohmann::json& report, const std::string& summary,
                 const std::vector<std::pair<std::string, std::string>>& csvs) {
  fs::create_directories(dir);
  write_text(dir / (stem + "_report.json"), report.dump(2) + "\n");
  write_text(dir / (stem + "_summary.txt"), summary);
  for (const auto& [name, content] : csvs) write_text(dir / name, content);
  std::cout << summary;
}

std::string bool_csv(bool b) { return b ? "1" : "0"; }

std::string ext_csv(ExtReal v) {
  return v.is_finite() ? format_double(v.value()) : "inf";
}

// Built-in families: name[:arg,arg...], or a directory of function CSVs.
std::vector<double> split_args(const std::string& spec, std::string* name) {
  const auto colon = spec.find(':');
  *name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream is(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(is, tok, ',')) args.push_back(std::stod(tok));
  }
  return args;
}

FunctionSequence make_sequence(const std::string& spec, const GageSpace& space,
                               std::uint64_t seed) {
  if (fs::is_directory(spec)) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(spec)) {
      if (entry.path().extension() == ".csv") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.size() < 3) {
      throw std::invalid_argument("family directory needs at least 3 CSV files");
    }
    auto members = std::make_shared<std::vector<SampledFunction>>();
    for (const auto& path : paths) {
      members->push_back(load_function_csv_file(path.string(), space));
    }
    return {[members](int j) { return members->at(j - 1); },
            static_cast<int>(members->size()), spec};
  }
  std::string name;
  const std::vector<double> args = split_args(spec, &name);
  auto arg = [&](std::size_t i, double fallback) {
    return i < args.size() ? args[i] : fallback;
  };
  if (name == "constant") {
    return constant_sequence(arg(0, 0.5), static_cast<std::size_t>(arg(1, 9)));
  }
  if (name == "alternate") {
    std::uint64_t rng = seed;
    const auto n = static_cast<std::size_t>(arg(0, 9));
    const SampledFunction g = random_scalar_function(rng, n);
    const SampledFunction h = random_scalar_function(rng, n);
    return alternating_pair_sequence(g, h);
  }
  if (name == "persistent-gap") return persistent_gap_sequence(static_cast<std::size_t>(arg(0, 9)));
  if (name == "factorial") {
    return factorial_step_sequence(static_cast<int>(arg(0, 5)));
  }
  if (name == "shrinking-gap") {
    return shrinking_gap_sequence(arg(0, 0.5), static_cast<std::size_t>(arg(1, 9)));
  }
  throw std::invalid_argument("unknown family '" + spec +
                              "' (constant, alternate, persistent-gap, factorial, "
                              "shrinking-gap, or a directory)");
}

RefiningFamily make_refining_family(const std::string& spec, int depth) {
  std::string name;
  const std::vector<double> args = split_args(spec, &name);
  auto arg = [&](std::size_t i, double fallback) {
    return i < args.size() ? args[i] : fallback;
  };
  if (name == "dirichlet") return dirichlet_refining_family(arg(0, 1.0), depth);
  if (name == "ramp") return ramp_refining_family(arg(0, 0.0), arg(1, 1.0), depth);
  if (name == "constant") return constant_refining_family(arg(0, 0.0), depth);
  throw std::invalid_argument("unknown refining family '" + spec +
                              "' (dirichlet, ramp, constant)");
}

int cmd_var(const CommonOpts& opts, const std::string& input) {
  const GageSpace space = parse_space(opts.space_json);
  const SampledFunction f = load_function_csv_file(input, space);
  const std::vector<PseudometricId> ps = parse_ps(opts.p_list);

  nlohmann::json per_p = nlohmann::json::array();
  std::ostringstream summary;
  std::ostringstream csv;
  csv << "t";
  for (PseudometricId p : ps) csv << ",prefix_p" << p.index();
  csv << "\n";
  std::vector<std::vector<double>> prefixes;
  for (PseudometricId p : ps) {
    const double v = jordan_variation(f, p);
    const double osc = oscillation(f, p);
    per_p.push_back({{"p", p.index()}, {"variation", v}, {"oscillation", osc}});
    summary << "p=" << p.index() << ": V = " << v << ", oscillation = " << osc << "\n";
    prefixes.push_back(prefix_variation(f, p));
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    csv << format_double(f.t(i));
    for (const auto& prefix : prefixes) csv << "," << format_double(prefix[i]);
    csv << "\n";
  }
  const nlohmann::json report = {{"command", "var"},
                                 {"input", input},
                                 {"points", f.size()},
                                 {"results", std::move(per_p)}};
  emit_bundle(resolve_out_dir(opts.out_dir), "var", report, summary.str(),
              {{"var_prefix.csv", csv.str()}});
  return 0;
}

int cmd_profile(const CommonOpts& opts, const std::string& input, bool witnesses) {
  const GageSpace space = parse_space(opts.space_json);
  const SampledFunction f = load_function_csv_file(input, space);
  const std::vector<PseudometricId> ps = parse_ps(opts.p_list);
  const std::vector<double> ladder = parse_ladder(opts.eps_list);

  nlohmann::json profiles = nlohmann::json::array();
  std::ostringstream summary;
  std::vector<std::pair<std::string, std::string>> files;
  for (PseudometricId p : ps) {
    const Profile prof = profile(f, p, ladder, opts.jobs);
    profiles.push_back(profile_to_json(prof));
    std::ostringstream csv;
    csv << "eps,lower,upper,exact\n";
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const Bracket& b = prof.brackets[i];
      csv << format_double(ladder[i]) << "," << ext_csv(b.lower) << ","
          << ext_csv(b.upper) << "," << bool_csv(b.exact) << "\n";
      summary << "p=" << p.index() << " eps=" << ladder[i] << ": ["
              << ext_csv(b.lower) << ", " << ext_csv(b.upper) << "]"
              << (b.exact ? " exact" : "") << "\n";
      if (witnesses && b.witness) {
        std::ostringstream w;
        save_function_csv(w, *b.witness);
        std::ostringstream name;
        name << "witness_p" << p.index() << "_eps" << i << ".csv";
        files.emplace_back(name.str(), w.str());
      }
    }
    files.emplace_back("profile_p" + std::to_string(p.index()) + ".csv", csv.str());
  }
  const nlohmann::json report = {{"command", "profile"},
                                 {"input", input},
                                 {"profiles", std::move(profiles)}};
  emit_bundle(resolve_out_dir(opts.out_dir), "profile", report, summary.str(), files);
  return 0;
}

int cmd_eps_var(const CommonOpts& opts, const std::string& input) {
  const GageSpace space = parse_space(opts.space_json);
  const SampledFunction f = load_function_csv_file(input, space);
  const std::vector<PseudometricId> ps = parse_ps(opts.p_list);
  const std::vector<double> ladder = parse_ladder(opts.eps_list);
  if (ladder.size() != 1) throw std::invalid_argument("eps-var takes exactly one --eps value");

  nlohmann::json results = nlohmann::json::array();
  std::ostringstream summary;
  std::vector<std::pair<std::string, std::string>> files;
  for (PseudometricId p : ps) {
    const Bracket b = eps_variation(f, p, ladder[0]);
    nlohmann::json jb = bracket_to_json(b);
    jb["p"] = p.index();
    jb["eps"] = ladder[0];
    results.push_back(std::move(jb));
    summary << "p=" << p.index() << " eps=" << ladder[0] << ": ["
            << ext_csv(b.lower) << ", " << ext_csv(b.upper) << "]"
            << (b.exact ? " exact" : "") << "\n";
    if (b.witness) {
      std::ostringstream w;
      save_function_csv(w, *b.witness);
      files.emplace_back("witness_p" + std::to_string(p.index()) + ".csv", w.str());
    }
  }
  const nlohmann::json report = {{"command", "eps-var"},
                                 {"input", input},
                                 {"results", std::move(results)}};
  emit_bundle(resolve_out_dir(opts.out_dir), "epsvar", report, summary.str(), files);
  return 0;
}

int cmd_step_approx(const CommonOpts& opts, const std::string& input) {
  const GageSpace space = parse_space(opts.space_json);
  const SampledFunction f = load_function_csv_file(input, space);
  const std::vector<PseudometricId> ps = parse_ps(opts.p_list);
  const std::vector<double> ladder = parse_ladder(opts.eps_list);
  if (ladder.size() != 1) throw std::invalid_argument("step-approx takes exactly one --eps value");

  nlohmann::json results = nlohmann::json::array();
  std::ostringstream summary;
  std::vector<std::pair<std::string, std::string>> files;
  for (PseudometricId p : ps) {
    const StepApproximant step = step_approximant(f, p, ladder[0]);
    const double vg = jordan_variation(step.g, p);
    results.push_back({{"p", p.index()},
                       {"eps", ladder[0]},
                       {"jumps", step.jump_count},
                       {"variation", vg}});
    summary << "p=" << p.index() << ": " << step.jump_count
            << " jumps, V(g) = " << vg << "\n";
    std::ostringstream w;
    save_function_csv(w, step.g);
    files.emplace_back("step_p" + std::to_string(p.index()) + ".csv", w.str());
  }
  const nlohmann::json report = {{"command", "step-approx"},
                                 {"input", input},
                                 {"results", std::move(results)}};
  emit_bundle(resolve_out_dir(opts.out_dir), "stepapprox", report, summary.str(), files);
  return 0;
}

int cmd_classify(const CommonOpts& opts, const std::string& family_spec, int depth) {
  const std::vector<PseudometricId> ps = parse_ps(opts.p_list);
  const std::vector<double> ladder = parse_ladder(opts.eps_list);
  const RefiningFamily family = make_refining_family(family_spec, depth);
  const GrowthReport report = classify_regulated(family, ladder, ps);

  std::ostringstream summary;
  std::ostringstream csv;
  csv << "p,eps,depth,size,lower\n";
  for (const GrowthCell& cell : report.cells) {
    summary << "p=" << cell.p << " eps=" << cell.eps << ": "
            << to_string(cell.verdict) << " (slope " << cell.slope << ")\n";
    for (std::size_t k = 0; k < cell.lowers.size(); ++k) {
      csv << cell.p << "," << format_double(cell.eps) << "," << k + 1 << ","
          << cell.sizes[k] << "," << format_double(cell.lowers[k]) << "\n";
    }
  }
  nlohmann::json jreport = report.to_json();
  jreport["command"] = "classify";
  jreport["family"] = family_spec;
  emit_bundle(resolve_out_dir(opts.out_dir), "classify", jreport, summary.str(),
              {{"classify.csv", csv.str()}});
  return 0;
}

int cmd_select(const CommonOpts& opts, const std::string& family_spec, int probe,
               const std::string& window_spec, double conv_tol) {
  const GageSpace space = parse_space(opts.space_json);
  const FunctionSequence family = make_sequence(family_spec, space, opts.seed);
  SelectionConfig cfg;
  cfg.eps_ladder = parse_ladder(opts.eps_list);
  cfg.ps = parse_ps(opts.p_list);
  cfg.probe_depth = probe;
  cfg.conv_tol = conv_tol;

  std::ostringstream summary;
  nlohmann::json report;
  std::vector<std::pair<std::string, std::string>> files;
  int exit_code = 0;

  if (!window_spec.empty()) {
    const LocalSelectionResult result =
        local_select(family, cfg, parse_windows(window_spec));
    report = result.to_json();
    report["command"] = "select";
    report["family"] = family_spec;
    for (const WindowOutcome& w : result.windows) {
      summary << "window [" << w.lo << ", " << w.hi << "]: ";
      if (w.outcome.certified()) {
        summary << "certified, " << w.outcome.trace->selected.size()
                << " indices selected\n";
      } else {
        summary << *w.outcome.diagnosis << "\n";
        exit_code = 2;
      }
    }
    if (result.limit) {
      std::ostringstream w;
      save_function_csv(w, *result.limit);
      files.emplace_back("limit.csv", w.str());
    }
  } else {
    const SelectionOutcome outcome = select_pointwise(family, cfg);
    report["command"] = "select";
    report["family"] = family_spec;
    report["hypothesis"] = outcome.hypothesis.to_json();
    if (outcome.certified()) {
      report["trace"] = outcome.trace->to_json();
      summary << "certified: selected {";
      for (std::size_t i = 0; i < outcome.trace->selected.size(); ++i) {
        summary << (i ? ", " : " ") << outcome.trace->selected[i];
      }
      summary << " }, converged = "
              << (outcome.trace->converged ? "yes" : "no") << "\n";
      std::ostringstream w;
      save_function_csv(w, outcome.trace->limit);
      files.emplace_back("limit.csv", w.str());
    } else {
      report["diagnosis"] = *outcome.diagnosis;
      summary << "refused: " << *outcome.diagnosis << "\n";
      exit_code = 2;
    }
  }
  emit_bundle(resolve_out_dir(opts.out_dir), "select", report, summary.str(), files);
  return exit_code;
}

int cmd_check(const CommonOpts& opts, const std::string& suite) {
  const std::vector<SuiteReport> reports = run_suites(suite, opts.seed);
  nlohmann::json jsuites = nlohmann::json::array();
  std::ostringstream summary;
  bool all = true;
  for (const SuiteReport& r : reports) {
    jsuites.push_back(r.to_json());
    for (const PropertyResult& pr : r.results) {
      summary << (pr.passed ? "[pass] " : "[FAIL] ") << r.suite << "/" << pr.name;
      if (!pr.passed) summary << ": " << pr.detail;
      summary << "\n";
      all = all && pr.passed;
    }
  }
  const nlohmann::json report = {{"command", "check"},
                                 {"suite", suite},
                                 {"seed", opts.seed},
                                 {"all_passed", all},
                                 {"suites", std::move(jsuites)}};
  emit_bundle(resolve_out_dir(opts.out_dir), "check", report, summary.str(), {});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate-variation toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string input, family_spec, suite = "all", window_spec;
  int depth = 5, probe = 8;
  double conv_tol = 1e-9;
  bool witnesses = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--space", opts.space_json, "space config JSON");
    cmd->add_option("--p", opts.p_list, "pseudometric indices, comma separated");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--jobs", opts.jobs, "worker threads for profile maps");
  };

  CLI::App* var = app.add_subcommand("var", "variation, oscillation, prefix CSV");
  var->add_option("--input", input, "function CSV")->required();
  add_common(var);

  CLI::App* prof = app.add_subcommand("profile", "eps ladder profile CSV");
  prof->add_option("--input", input, "function CSV")->required();
  prof->add_option("--eps", opts.eps_list, "eps ladder, decreasing")->required();
  prof->add_flag("--witnesses", witnesses, "emit witness CSVs per eps");
  add_common(prof);

  CLI::App* ev = app.add_subcommand("eps-var", "single-eps bracket + witness");
  ev->add_option("--input", input, "function CSV")->required();
  ev->add_option("--eps", opts.eps_list, "one eps value")->required();
  add_common(ev);

  CLI::App* sa = app.add_subcommand("step-approx", "piecewise-constant tube witness");
  sa->add_option("--input", input, "function CSV")->required();
  sa->add_option("--eps", opts.eps_list, "one eps value")->required();
  add_common(sa);

  CLI::App* cl = app.add_subcommand("classify", "growth classification over refinements");
  cl->add_option("--family", family_spec, "dirichlet|ramp|constant[:args]")->required();
  cl->add_option("--eps", opts.eps_list, "eps ladder")->required();
  cl->add_option("--depth", depth, "refinement depth (>= 3)");
  add_common(cl);

  CLI::App* sel = app.add_subcommand("select", "pointwise selection pipeline");
  sel->add_option("--family", family_spec,
                  "constant|alternate|persistent-gap|factorial|shrinking-gap[:args] or a CSV directory")
      ->required();
  sel->add_option("--eps", opts.eps_list, "eps ladder")->required();
  sel->add_option("--probe", probe, "probe depth J (>= 3)");
  sel->add_option("--window", window_spec, "local windows a:b[,a:b...]");
  sel->add_option("--conv-tol", conv_tol, "convergence tolerance");
  add_common(sel);

  CLI::App* chk = app.add_subcommand("check", "seeded property suites");
  chk->add_option("--suite", suite, "ess|unif|selection|all");
  add_common(chk);

  CLI11_PARSE(app, argc, argv);

  try {
    if (var->parsed()) return cmd_var(opts, input);
    if (prof->parsed()) return cmd_profile(opts, input, witnesses);
    if (ev->parsed()) return cmd_eps_var(opts, input);
    if (sa->parsed()) return cmd_step_approx(opts, input);
    if (cl->parsed()) return cmd_classify(opts, family_spec, depth);
    if (sel->parsed()) return cmd_select(opts, family_spec, probe, window_spec, conv_tol);
    if (chk->parsed()) return cmd_check(opts, suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
