// Command-line front end: build-graph | align | predict | eval | pipeline.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ecot/error.hpp"
#include "ecot/pipeline.hpp"

namespace {

constexpr const char* kOutDirEnv = "ECOT_OUT_DIR";

struct Overrides {
  std::string corpus;
  std::optional<std::string> params;
  std::optional<std::string> config;
  std::optional<std::string> predictions;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::size_t> d_s;
  std::optional<double> alpha, beta, epsilon, tau_s, tau_e, tau_r, threshold;
  std::optional<int> window, layers;
  bool dump_encoder = false;
  bool table = false;
};

void add_common_flags(CLI::App& sub, Overrides& o) {
  sub.add_option("--corpus", o.corpus, "Corpus JSON")->required();
  sub.add_option("--params", o.params, "Params JSON; absent blocks are seeded");
  sub.add_option("--config", o.config, "JSON config; CLI flags take precedence");
  sub.add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
  sub.add_option("--seed", o.seed, "Seed for absent parameter blocks");
  sub.add_option("--threads", o.threads, "Worker threads");
  sub.add_option("--speaker-dim", o.d_s, "Speaker embedding width when params do not fix it");
  sub.add_option("--alpha", o.alpha, "Attribute/structure trade-off");
  sub.add_option("--beta", o.beta, "Alignment/local-score fusion weight");
  sub.add_option("--epsilon", o.epsilon, "Entropic regularization");
  sub.add_option("--window", o.window, "Local-edge window");
  sub.add_option("--tau-s", o.tau_s, "Global-edge threshold");
  sub.add_option("--tau-e", o.tau_e, "Temporal decay");
  sub.add_option("--tau-r", o.tau_r, "Row-softmax temperature");
  sub.add_option("--threshold", o.threshold, "Pair decision threshold");
  sub.add_option("--layers", o.layers, "Encoder layers");
}

ecot::RunConfig build_config(ecot::Command command, const Overrides& o) {
  ecot::RunConfig cfg;
  cfg.command = command;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) cfg.output_dir = env;
  if (o.config) ecot::apply_config_json(ecot::read_json_file(*o.config), cfg);

  cfg.corpus_path = o.corpus;
  if (o.params) cfg.params_path = *o.params;
  if (o.predictions) cfg.predictions_path = *o.predictions;
  if (o.out) cfg.output_dir = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.d_s) cfg.speaker_dim = *o.d_s;
  auto& hp = cfg.hyperparams;
  if (o.alpha) hp.alpha = *o.alpha;
  if (o.beta) hp.beta = *o.beta;
  if (o.epsilon) hp.epsilon = *o.epsilon;
  if (o.window) hp.window = *o.window;
  if (o.tau_s) hp.tau_s = *o.tau_s;
  if (o.tau_e) hp.tau_e = *o.tau_e;
  if (o.tau_r) hp.tau_r = *o.tau_r;
  if (o.threshold) hp.decision_threshold = *o.threshold;
  if (o.layers) hp.layers = *o.layers;
  cfg.dump_encoder = o.dump_encoder;
  cfg.write_table = o.table;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion-cause pair extraction by graph alignment"};
  app.require_subcommand(1);

  Overrides o;
  struct Sub {
    ecot::Command command;
    const char* help;
  };
  const Sub subs[] = {
      {ecot::Command::BuildGraph, "Build conversation graphs (adjacency and edge types)"},
      {ecot::Command::Align, "Encode and align; emit T, T_tilde and objective traces"},
      {ecot::Command::Predict, "Score pairs; emit s, y_hat, decisions and losses"},
      {ecot::Command::Eval, "Evaluate predictions (or run predict first) against gold"},
      {ecot::Command::Pipeline, "Run every stage and write all artifacts"},
  };
  std::optional<ecot::Command> chosen;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(ecot::command_name(s.command), s.help);
    add_common_flags(*sub, o);
    if (s.command == ecot::Command::Eval)
      sub->add_option("--predictions", o.predictions, "predictions.json from a predict run");
    if (s.command == ecot::Command::Align || s.command == ecot::Command::Pipeline)
      sub->add_flag("--dump-encoder", o.dump_encoder, "Also write encoder H and A_induced");
    if (s.command == ecot::Command::Eval || s.command == ecot::Command::Pipeline)
      sub->add_flag("--table", o.table, "Also write a plain-text P/R/F1 table");
    sub->callback([&chosen, c = s.command] { chosen = c; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const ecot::RunConfig cfg = build_config(*chosen, o);
    ecot::run(cfg);
  } catch (const ecot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ecot::CorpusFormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const ecot::EvalInputError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
