#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "efftree/decompose.hpp"
#include "efftree/error.hpp"
#include "efftree/logic.hpp"
#include "efftree/relator.hpp"
#include "efftree/syntax.hpp"

namespace efl {

using namespace efftree;

namespace {

struct Options {
  std::string effect;
  std::string program;
  std::string formula;
  std::string obs;
  std::string side = "alpha";
  std::uint64_t fuel = 64;
  std::uint64_t index_bound = 32;
  std::uint64_t samples = 100;
  std::uint64_t depth = 4;
  std::uint64_t seed = 42;
  std::uint64_t lemma_pairs = 50;
  bool trace = false;
  bool no_cycle_rule = false;

  Budget budget() const { return Budget{fuel, index_bound}; }
  std::optional<std::string> effect_opt() const {
    return effect.empty() ? std::nullopt : std::optional<std::string>(effect);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Proved: return kProved;
    case Verdict::Refuted: return kRefuted;
    case Verdict::Unknown: break;
  }
  return kUnknown;
}

CheckOptions check_options(const Options& o, std::ostream& out) {
  CheckOptions c;
  c.cycle_rule = !o.no_cycle_rule;
  if (o.trace) c.trace = [&out](const std::string& line) { out << line << '\n'; };
  return c;
}

Program load_program(const Options& o) {
  if (o.program.empty()) throw Error(ErrorKind::Usage, "--program is required");
  return parse_program(slurp(o.program), o.effect_opt());
}

EffectKit program_kit(const Program& p) {
  if (!p.effect) throw Error(ErrorKind::Usage, "no effect given: add (sig NAME) or pass --effect");
  return kit_by_name(*p.effect);
}

int cmd_check(const Options& o, std::ostream& out) {
  if (o.formula.empty()) throw Error(ErrorKind::Usage, "--formula is required");
  Program p = load_program(o);
  if (!p.main) throw Error(ErrorKind::Usage, "the program has no (main ...)");
  EffectKit kit = program_kit(p);
  Formula f = parse_formula(o.formula, p.main->sort, p.main->ty, &kit.spec(), &p);
  Verdict v = satisfies(kit, *p.main, f, o.budget(), check_options(o, out));
  out << "RESULT: " << v << '\n';
  return verdict_exit(v);
}

int cmd_lift(const Options& o, std::ostream& out) {
  if (o.obs.empty()) throw Error(ErrorKind::Usage, "--obs is required");
  Program p = load_program(o);
  if (!p.main || p.main->sort != Sort::Cpt)
    throw Error(ErrorKind::Usage, "lift needs a (main cpt ...) term");
  EffectKit kit = program_kit(p);
  Side side;
  if (o.side == "alpha") side = Side::Alpha;
  else if (o.side == "beta") side = Side::Beta;
  else throw Error(ErrorKind::Usage, "--side must be alpha or beta");
  Obs obs = parse_obs(o.obs);
  if (!kit.spec().accepts(obs))
    throw Error(ErrorKind::UnknownObservation,
                "observation " + to_string(obs) + " is not valid for effect '" +
                    kit.name + "'");
  const Term& m = *p.main;
  Formula pred_f = o.formula.empty()
                       ? Formula::test(FormulaTest::tt())
                       : parse_formula(o.formula, Sort::Val, m.ty, &kit.spec(), &p);
  Budget b = o.budget();
  Pred pred = [&](const Value& v) {
    return satisfies(kit, Term::val(m.ty, v, m.env), pred_f, b);
  };
  Verdict v = kit.pair.lift(side, obs, pred, m.env, m.tree, b, check_options(o, out));
  out << "RESULT: " << v << '\n';
  return verdict_exit(v);
}

int cmd_decompose(const Options& o, std::ostream& out) {
  if (o.effect.empty()) throw Error(ErrorKind::Usage, "--effect is required");
  EffectKit kit = kit_by_name(o.effect);
  SuiteReport r = strong_decomposability_suite(kit, o.samples, o.depth, o.seed,
                                               o.budget(), o.lemma_pairs);
  out << "effect " << kit.name << ", " << r.samples << " double trees, depth "
      << o.depth << ", seed " << o.seed << '\n';
  out << "decomposition comparisons: " << r.comparisons
      << ", disagreements: " << r.disagreements
      << ", unknown: " << r.unknowns << '\n';
  out << "refinement pairs: " << r.lemma_pairs
      << ", violations: " << r.lemma_violations
      << ", unknown: " << r.lemma_unknowns << '\n';
  for (const auto& f : r.failures) out << "  " << f << '\n';
  if (r.disagreements > 0 || r.lemma_violations > 0) {
    out << "FAIL " << r.passed << '/' << r.samples << '\n';
    return kRefuted;
  }
  if (r.unknowns > 0) {
    out << "INCONCLUSIVE " << r.passed << '/' << r.samples << '\n';
    return kUnknown;
  }
  out << "PASS " << r.passed << '/' << r.samples << '\n';
  return kProved;
}

int cmd_gamma(const Options& o, std::ostream& out) {
  if (o.program.empty()) throw Error(ErrorKind::Usage, "--program is required");
  GammaProblem g = parse_gamma_problem(slurp(o.program), o.effect_opt());
  GammaResult r = gamma_check(g.kit, g.carrier, g.relation, g.program.env,
                              g.left, g.right, g.sample, o.budget());
  out << "checks: " << r.checks << ", unknown: " << r.unknowns << '\n';
  if (r.counterexample) {
    out << "COUNTEREXAMPLE: S = ";
    print_subset(out, g.carrier, r.counterexample->subset);
    out << " at " << r.counterexample->obs << " ("
        << to_string(r.counterexample->side) << ")\n";
    out << "FAIL\n";
    return kRefuted;
  }
  if (r.unknowns > 0) {
    out << "INCONCLUSIVE\n";
    return kUnknown;
  }
  out << "PASS\n";
  return kProved;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.program.empty()) throw Error(ErrorKind::Usage, "--program is required");
  SimulationProblem sp = parse_simulation_problem(slurp(o.program), o.effect_opt());
  sp.budget = o.budget();
  SimulationReport r = simulation_check(sp);
  if (!r.pass) {
    out << "VIOLATION: " << r.violation << '\n';
    out << "FAIL\n";
    return kRefuted;
  }
  if (r.unknowns > 0) {
    out << "unknown: " << r.unknowns << '\n';
    out << "INCONCLUSIVE\n";
    return kUnknown;
  }
  out << "PASS\n";
  return kProved;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  Options o;
  CLI::App app{"Checks effectful programs represented as coinductive trees", "efl"};
  app.require_subcommand(1);

  auto budget = [&o](CLI::App* c) {
    c->add_option("--fuel", o.fuel, "Maximum depth of node obligations")
        ->capture_default_str();
    c->add_option("--index-bound", o.index_bound,
                  "Window explored by countable connectives")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto lifting = [&o](CLI::App* c) {
    c->add_flag("--trace", o.trace, "Print one line per node obligation");
    c->add_flag("--no-cycle-rule", o.no_cycle_rule,
                "Answer cyclic obligations by fuel only");
  };

  auto* check = app.add_subcommand("check", "Check a formula against a program's main term");
  check->add_option("--effect", o.effect, "pure, timed, nondet, store or input");
  check->add_option("--program", o.program, "Program file")->required();
  check->add_option("--formula", o.formula, "Formula")->required();
  budget(check);
  lifting(check);

  auto* lift = app.add_subcommand("lift", "Run one lifting on a program's main computation");
  lift->add_option("--effect", o.effect, "pure, timed, nondet, store or input");
  lift->add_option("--program", o.program, "Program file")->required();
  lift->add_option("--obs", o.obs, "Observation token")->required();
  lift->add_option("--side", o.side, "alpha or beta")->capture_default_str();
  lift->add_option("--formula", o.formula, "Value formula used as the predicate");
  budget(lift);
  lifting(lift);

  auto* dec = app.add_subcommand("decompose-verify",
                                 "Randomized check of an effect's decompositions");
  dec->add_option("--effect", o.effect, "pure, timed, nondet, store or input")->required();
  dec->add_option("--samples", o.samples, "Number of double trees")->capture_default_str();
  dec->add_option("--depth", o.depth, "Height of each layer")->capture_default_str();
  dec->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  dec->add_option("--lemma-pairs", o.lemma_pairs,
                  "Refinement pairs checked for preservation under sequencing")
      ->capture_default_str();
  budget(dec);

  auto* gamma = app.add_subcommand("gamma", "Check the relation lifting on a problem file");
  gamma->add_option("--effect", o.effect, "pure, timed, nondet, store or input");
  gamma->add_option("--program,--problem", o.program, "Problem file")->required();
  budget(gamma);

  auto* sim = app.add_subcommand("simulate", "Check an applicative simulation candidate");
  sim->add_option("--effect", o.effect, "pure, timed, nondet, store or input");
  sim->add_option("--program,--problem", o.program, "Problem file")->required();
  budget(sim);

  std::vector<std::string> argv_store{"efl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kProved;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kProved;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kError;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*lift) return cmd_lift(o, out);
    if (*dec) return cmd_decompose(o, out);
    if (*gamma) return cmd_gamma(o, out);
    if (*sim) return cmd_simulate(o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace efl
