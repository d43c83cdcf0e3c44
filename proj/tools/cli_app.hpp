#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "adjustkit/adjustment.hpp"
#include "adjustkit/fixtures.hpp"
#include "adjustkit/ida.hpp"
#include "adjustkit/io.hpp"
#include "adjustkit/meek.hpp"
#include "adjustkit/separation.hpp"
#include "adjustkit/simharness.hpp"
#include "adjustkit/varselect.hpp"

namespace adjustkit::cli {

enum Exit { ok = 0, usage = 1, negative = 2, numeric = 3 };

// Thrown for a result that is an answer rather than a failure (no valid set,
// FAIL, not amenable).
struct Negative {
  std::string message;
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    auto t = detail::trim(cur);
    if (!t.empty()) out.emplace_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline void write_lines(std::ostream& out, const std::vector<std::string>& names) {
  for (const auto& n : names) out << n << "\n";
}

// Writes to the named file, or to out when the name is empty.
template <class F>
void emit(const std::string& path, std::ostream& out, F write) {
  if (path.empty()) return write(out);
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  write(f);
}

struct GraphSource {
  std::string file, fixture;

  void add(CLI::App* sub) {
    auto* g = sub->add_option("--graph", file, "edge-list file");
    auto* f = sub->add_option("--fixture", fixture, "built-in fixture name");
    g->excludes(f);
  }
  Graph load() const {
    if (!file.empty()) return read_graph_file(file);
    if (!fixture.empty()) return fixture_graph(fixture);
    throw PreconditionError("one of --graph or --fixture is required");
  }
};

inline std::string upper(std::string s) {
  for (auto& c : s) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Every long option can also be set from ADJUSTKIT_<NAME>.
inline void bind_env(CLI::App& app) {
  for (auto* sub : app.get_subcommands({}))
    for (auto* opt : sub->get_options())
      if (!opt->get_lnames().empty() && opt->get_lnames()[0] != "help" && opt->get_envname().empty())
        opt->envname("ADJUSTKIT_" + upper(opt->get_lnames()[0]));
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariate adjustment sets, IDA and simulation"};
  app.require_subcommand(1);
  GraphSource src;
  std::string xs, ys, zs, out_path, data_path;

  auto* oset = app.add_subcommand("oset", "optimal adjustment set");
  bool via_projection = false;
  src.add(oset);
  oset->add_option("--x", xs)->required();
  oset->add_option("--y", ys)->required();
  oset->add_flag("--via-projection", via_projection, "compute through the forbidden projection");

  auto* project = app.add_subcommand("project", "forbidden projection");
  src.add(project);
  project->add_option("--x", xs)->required();
  project->add_option("--y", ys)->required();
  project->add_option("--out", out_path);

  auto* validate = app.add_subcommand("validate", "check an adjustment set");
  src.add(validate);
  validate->add_option("--x", xs)->required();
  validate->add_option("--y", ys)->required();
  validate->add_option("--z", zs);

  auto* separate = app.add_subcommand("separate", "d/m-separation query");
  std::string as, bs, cs;
  src.add(separate);
  separate->add_option("--a", as)->required();
  separate->add_option("--b", bs)->required();
  separate->add_option("--c", cs);

  auto* orient = app.add_subcommand("orient", "maxPDAG under required orientations");
  std::vector<std::string> required;
  src.add(orient);
  orient->add_option("--require", required, "edge such as A->B");

  auto* ida = app.add_subcommand("ida", "semi-local or optimal IDA");
  std::string method = "optimal";
  bool dedupe = false, require_descendant = false;
  src.add(ida);
  ida->add_option("--data", data_path)->required();
  ida->add_option("--x", xs)->required();
  ida->add_option("--y", ys)->required();
  ida->add_option("--method", method)->check(CLI::IsMember({"optimal", "semilocal"}));
  ida->add_flag("--dedupe", dedupe, "one row per distinct adjustment set");
  ida->add_flag("--require-descendant", require_descendant, "semilocal: zero unless Y descends from X");

  auto* select = app.add_subcommand("select", "backward selection of covariates");
  std::string alpha = "0.05";
  select->add_option("--data", data_path)->required();
  select->add_option("--x", xs)->required();
  select->add_option("--y", ys)->required();
  select->add_option("--z", zs);
  select->add_option("--alpha", alpha, "level, aic or bic");

  auto* simulate_cmd = app.add_subcommand("simulate", "RMSE of optimal vs semi-local IDA");
  ScenarioConfig cfg;
  std::optional<std::uint64_t> seed;
  bool estimated = false;
  simulate_cmd->add_option("--p", cfg.p);
  simulate_cmd->add_option("--d", cfg.d);
  simulate_cmd->add_option("--n", cfg.n);
  simulate_cmd->add_option("--reps", cfg.reps);
  simulate_cmd->add_option("--dpg", cfg.datasets_per_graph, "datasets per graph");
  simulate_cmd->add_option("--seed", seed)->required();
  simulate_cmd->add_option("--threads", cfg.threads);
  simulate_cmd->add_option("--max-draws", cfg.max_draws);
  simulate_cmd->add_option("--error-var", cfg.error_var);
  simulate_cmd->add_option("--out", out_path, "per-replication CSV");
  simulate_cmd->add_flag("--estimated", estimated, "use an estimated CPDAG");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "print built-in graphs");
  std::string name;
  fixtures_cmd->add_option("--name", name);

  auto* sample = app.add_subcommand("sample", "simulate a dataset from a linear model");
  std::size_t n = 100;
  std::optional<double> coef;
  std::string law = "gaussian";
  double error_var = 1;
  src.add(sample);
  sample->add_option("--n", n);
  sample->add_option("--seed", seed)->required();
  sample->add_option("--coef", coef, "constant coefficient (default: built-in model or random)");
  sample->add_option("--errors", law)->check(CLI::IsMember({"gaussian", "uniform"}));
  sample->add_option("--error-var", error_var);
  sample->add_option("--out", out_path);

  auto* density = app.add_subcommand("density", "IDA estimates over repeated datasets");
  std::string model;
  std::size_t reps = 1000;
  src.add(density);
  density->add_option("--model", model, "fixture with a built-in model")->required();
  density->add_option("--x", xs)->required();
  density->add_option("--y", ys)->required();
  density->add_option("--n", n);
  density->add_option("--reps", reps);
  density->add_option("--seed", seed)->required();
  density->add_option("--out", out_path);

  bind_env(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return usage;
  }

  try {
    if (*oset) {
      Graph g = src.load();
      NodeSet x = g.ids(split_list(xs)), y = g.ids(split_list(ys));
      bool exists = true;
      try {
        exists = adjustment_set_exists(g, x, y);
      } catch (const PreconditionError&) {
        // outcomes outside the possible descendants of X: the set is still defined
      }
      if (!exists) throw Negative{"no valid adjustment set exists"};
      NodeSet o = via_projection ? projected_optimal_set(g, x, y) : optimal_adjustment_set(g, x, y);
      write_lines(out, g.names_of(o));
    } else if (*project) {
      Graph g = src.load();
      auto p = forbidden_projection(g, g.ids(split_list(xs)), g.ids(split_list(ys)));
      emit(out_path, out, [&](std::ostream& o) { o << format_graph(p.graph); });
    } else if (*validate) {
      Graph g = src.load();
      NodeSet x = g.ids(split_list(xs)), y = g.ids(split_list(ys)), z = g.ids(split_list(zs));
      auto r = check_adjustment_set(g, x, y, z);
      if (r.reason == ValidityReport::Reason::not_amenable) throw Negative{"graph is not amenable relative to (X, Y)"};
      if (!r.valid()) {
        bool exists = true;
        try {
          exists = adjustment_set_exists(g, x, y);
        } catch (const PreconditionError&) {
        }
        if (!exists) throw Negative{"no valid adjustment set exists"};
        if (r.reason == ValidityReport::Reason::forbidden_member)
          throw Negative{"invalid: forbidden members " + join(g.names_of(r.forbidden_members), ",")};
        throw Negative{"invalid: open path " + (r.open_path ? format_path(g, *r.open_path) : std::string("(none)"))};
      }
      out << "valid\n";
    } else if (*separate) {
      Graph g = src.load();
      NodeSet a = g.ids(split_list(as)), b = g.ids(split_list(bs)), c = g.ids(split_list(cs));
      auto path = find_open_path(g, a, b, c);
      if (!path) out << "separated\n";
      else out << "connected\n" << format_path(g, *path) << "\n";
    } else if (*orient) {
      Graph g = src.load();
      BackgroundKnowledge bg;
      for (const auto& r : required) {
        auto pos = r.find("->");
        if (pos == std::string::npos) throw PreconditionError("expected A->B, got '" + r + "'");
        bg.required.emplace_back(g.id(detail::trim(r.substr(0, pos))), g.id(detail::trim(r.substr(pos + 2))));
      }
      auto m = construct_max_pdag(g, bg);
      if (!m) throw Negative{"FAIL"};
      out << format_graph(*m);
    } else if (*ida) {
      Graph g = src.load();
      auto xn = split_list(xs), yn = split_list(ys);
      if (xn.size() != 1 || yn.size() != 1) throw PreconditionError("IDA needs a single treatment and outcome");
      Dataset data = read_dataset_file(data_path);
      auto m = method == "optimal" ? IdaMethod::optimal : IdaMethod::semi_local;
      auto res = run_ida(g, g.id(xn[0]), g.id(yn[0]), data, m, require_descendant);
      out << "subset,adjustment_set,estimate\n";
      out.precision(17);
      std::vector<std::optional<NodeSet>> seen;
      std::string failure;
      for (const auto& e : res.entries) {
        if (dedupe && std::find(seen.begin(), seen.end(), e.adjustment) != seen.end()) continue;
        seen.push_back(e.adjustment);
        out << join_names(g, e.subset) << ',' << (e.adjustment ? join_names(g, *e.adjustment) : "ZERO") << ',';
        if (e.error.empty()) out << e.estimate << "\n";
        else out << "NA\n";
        if (failure.empty()) failure = e.error;
      }
      if (!failure.empty()) throw NumericError(failure);
    } else if (*select) {
      Dataset data = read_dataset_file(data_path);
      double level = 0;
      if (alpha == "aic") level = alpha_for_criterion(Criterion::aic, static_cast<double>(data.rows()));
      else if (alpha == "bic") level = alpha_for_criterion(Criterion::bic, static_cast<double>(data.rows()));
      else {
        try {
          std::size_t used = 0;
          level = std::stod(alpha, &used);
          if (used != alpha.size()) throw std::invalid_argument(alpha);
        } catch (const std::logic_error&) {
          throw PreconditionError("--alpha must be a number, aic or bic");
        }
        if (level < 0 || level > 1) throw PreconditionError("--alpha must lie in [0, 1]");
      }
      auto xn = split_list(xs), yn = split_list(ys);
      if (xn.size() != 1 || yn.size() != 1) throw PreconditionError("selection needs a single treatment and outcome");
      auto r = backward_select(data, xn[0], yn[0], split_list(zs), level);
      out << "selected: " << join(r.selected, ",") << "\n";
      for (const auto& s : r.trace) out << "removed " << s.removed << " p=" << s.p_value << "\n";
    } else if (*simulate_cmd) {
      if (estimated) throw PreconditionError("the estimated-CPDAG track requires structure learning (out of scope)");
      cfg.seed = *seed;
      auto s = run_rmse_scenario(cfg);
      if (!out_path.empty()) emit(out_path, out, [&](std::ostream& o) { write_rmse_csv(o, s.records); });
      out << "p,d,n,reps,dpg,geometric_mean,median,failed,mean_draws\n";
      out << cfg.p << ',' << cfg.d << ',' << cfg.n << ',' << cfg.reps << ',' << cfg.datasets_per_graph << ','
          << s.geometric_mean << ',' << s.median << ',' << s.failed << ',' << s.mean_draws << "\n";
      if (s.failed == cfg.reps) throw NumericError("every replication failed");
    } else if (*fixtures_cmd) {
      if (name.empty()) {
        for (const auto& f : fixtures()) out << f.name << "\n";
      } else {
        out << format_graph(fixture_graph(name));
      }
    } else if (*sample) {
      Graph g = src.load();
      std::optional<LinearScm> m;
      if (coef) m = constant_scm(g.is_dag() ? g : consistent_extension(g), *coef);
      else if (!src.fixture.empty() && (src.fixture == "SSQ-DAG" || src.fixture == "FIG4-B")) m = fixture_model(src.fixture);
      else m = random_scm(g.is_dag() ? g : consistent_extension(g), derive_seed(*seed, 1));
      if (!(error_var > 0)) throw PreconditionError("--error-var must be positive");
      m->err_var.setConstant(error_var);
      Dataset d = simulate(*m, n, derive_seed(*seed, 0), law == "uniform" ? ErrorLaw::uniform : ErrorLaw::gaussian);
      emit(out_path, out, [&](std::ostream& o) { write_dataset(o, d); });
    } else if (*density) {
      Graph g = src.load();
      auto xn = split_list(xs), yn = split_list(ys);
      if (xn.size() != 1 || yn.size() != 1) throw PreconditionError("density needs a single treatment and outcome");
      LinearScm m = fixture_model(model);
      if (!std::ranges::any_of(enumerate_class_dags(g), [&](const Graph& d) { return d == m.dag; }))
        throw PreconditionError("the model's DAG is not in the class of the graph");
      auto rows = density_experiment(g, m, g.id(xn[0]), g.id(yn[0]), n, reps, *seed);
      emit(out_path, out, [&](std::ostream& o) { write_density_csv(o, g, rows); });
    }
  } catch (const Negative& e) {
    out << e.message << "\n";
    return negative;
  } catch (const NotAmenableError& e) {
    out << e.what() << "\n";
    return negative;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return numeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return ok;
}

}  // namespace adjustkit::cli
