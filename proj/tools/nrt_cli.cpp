#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nrt/cli.hpp"
#include "nrt/data.hpp"
#include "nrt/likelihood.hpp"

namespace {

void add_data_flags(CLI::App* cmd, nrt::cli::DataSource& src) {
  cmd->add_option("--data", src.content, "LINQS content file (<id> <word values> <label>)");
  cmd->add_option("--cites", src.cites, "LINQS cites file (<target> <source>)");
  cmd->add_option("--synthetic-dir", src.synthetic_dir, "directory written by `generate`");
}

void add_chain_flags(CLI::App* cmd, nrt::cli::ChainOptions& c, bool& skip_checks) {
  const std::map<std::string, nrt::SamplerMode> modes{{"truncated", nrt::SamplerMode::truncated},
                                                      {"slice", nrt::SamplerMode::slice}};
  cmd->add_option("--sampler", c.sampler, "truncated or slice")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->default_str("truncated");
  cmd->add_option("--iters", c.iters, "sweeps")->capture_default_str();
  cmd->add_option("--burnin", c.burnin, "sweeps discarded before summaries")->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--a0", c.hyper.a0, "beta prior on q, first shape")->capture_default_str();
  cmd->add_option("--c0", c.hyper.c0, "beta prior on q, second shape")->capture_default_str();
  cmd->add_option("--b0", c.hyper.b0, "gamma shape of document scales")->capture_default_str();
  cmd->add_option("--alpha", c.hyper.alpha, "gamma-process concentration")->capture_default_str();
  cmd->add_option("--alpha0", c.hyper.alpha0, "Dirichlet concentration of topics")->capture_default_str();
  cmd->add_option("--gamma", c.hyper.gamma_mass, "base-measure mass")->capture_default_str();
  cmd->add_option("--trunc-K", c.hyper.truncation_K, "truncation level, 0 = min(10 D, 2000)")
      ->capture_default_str();
  cmd->add_option("--zeta-ratio", c.hyper.zeta_ratio, "slice sequence zeta_k = ratio^-k")->capture_default_str();
  cmd->add_flag("--skip-invariants", skip_checks, "do not verify state invariants after each sweep");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric relational topic model: synthetic data, chains and held-out evaluation"};
  app.require_subcommand(1);

  nrt::cli::GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "write a synthetic document network");
  g->add_option("--K", gen.K, "true number of topics")->required();
  g->add_option("--D", gen.D, "documents")->required();
  g->add_option("--W", gen.W, "vocabulary size")->required();
  g->add_option("--N", gen.N, "maximum document length")->required();
  g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  g->add_option("--out", gen.out, "output directory")->required();

  nrt::cli::FitOptions fit;
  bool fit_skip = false;
  auto* f = app.add_subcommand("fit", "run one chain and write its trace and summaries");
  add_data_flags(f, fit.source);
  add_chain_flags(f, fit.chain, fit_skip);
  f->add_option("--out", fit.out, "output directory")->required();

  nrt::cli::EvalOptions ev;
  bool eval_skip = false;
  auto* e = app.add_subcommand("eval", "k-fold held-out link and word prediction");
  add_data_flags(e, ev.source);
  add_chain_flags(e, ev.chain, eval_skip);
  e->add_option("--folds", ev.folds, "number of folds")->capture_default_str();
  e->add_option("--threads", ev.threads, "folds run concurrently")->capture_default_str();
  e->add_option("--out", ev.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(g)) {
      nrt::cli::cmd_generate(gen);
    } else if (app.got_subcommand(f)) {
      fit.chain.check_invariants = !fit_skip;
      nrt::cli::cmd_fit(fit);
    } else {
      ev.chain.check_invariants = !eval_skip;
      nrt::cli::cmd_eval(ev);
    }
  } catch (const nrt::ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "invalid argument: " << ex.what() << '\n';
    return 2;
  } catch (const nrt::DegenerateState& ex) {
    std::cerr << "degenerate state: " << ex.what() << '\n';
    return 4;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
