// loopchern: verification driver.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "loopchern/commands.hpp"
#include "loopchern/errors.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string backend;
  bool oracle = false;
  std::optional<std::uint64_t> budget;
  std::optional<double> tol;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "write the full JSON report here");
  sub->add_option("--seed", o.seed, "seed for the randomized suites");
  sub->add_option("--backend", o.backend, "coefficient backend")->check(CLI::IsMember({"exact", "float"}));
  sub->add_option("--budget", o.budget, "work ceiling applied to every budget")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "tolerance override (eval_tol for evaluate, sweep_tol for invariance)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace loopchern;
  CLI::App app{"Path-integral Chern current on flat tori: evaluation and verification"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);
  Options o;
  auto* algebra = app.add_subcommand("verify-algebra", "exact nilpotency and anticommutation suite");
  auto* eval = app.add_subcommand("evaluate", "evaluate the current on the configured chains");
  auto* inv = app.add_subcommand("invariance", "cocycles, localization, metric and diffeomorphism invariance");
  auto* lemma = app.add_subcommand("lemma", "randomized operator bound");
  auto* all = app.add_subcommand("all", "every suite");
  for (auto* s : {algebra, eval, inv, lemma, all}) add_common(s, o);
  for (auto* s : {eval, all}) s->add_flag("--oracle", o.oracle, "cross-check against the brute-force oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = o.seed;
    if (!o.backend.empty()) cfg.backend = o.backend;
    if (o.budget) {
      cfg.budgets.words = *o.budget;
      cfg.budgets.evaluation = static_cast<double>(*o.budget);
      cfg.budgets.oracle = static_cast<double>(*o.budget);
      cfg.budgets.cocycle_entries = *o.budget;
    }
    if (o.tol) {
      if (eval->parsed() || all->parsed()) cfg.tolerances.eval_tol = *o.tol;
      if (inv->parsed() || all->parsed()) cfg.tolerances.sweep_tol = *o.tol;
    }

    Report rep = algebra->parsed() ? cmd_verify_algebra(cfg)
                 : eval->parsed()  ? cmd_evaluate(cfg, o.oracle)
                 : inv->parsed()   ? cmd_invariance(cfg)
                 : lemma->parsed() ? cmd_lemma(cfg)
                                   : cmd_all(cfg, o.oracle);
    std::cout << rep.summary();
    if (!o.out.empty()) {
      std::ofstream f(o.out);
      if (!f) throw std::runtime_error("cannot open " + o.out);
      f << rep.to_json().dump(2) << '\n';
    }
    return rep.pass() ? 0 : 1;
  } catch (const ResourceError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
