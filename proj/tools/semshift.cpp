// semshift: characterize lexical semantic change with LLM judgments.
//
// Subcommands:
//   validate     check datasets and sidecars, print totals
//   render      print the exact prompt bundle for one item
//   run         sample every endpoint x pole x method (resumable)
//   score       accuracy tables from the run logs
//   correlate   agreement matrices (raw + kappa) and heatmaps
//   characterize word-level change typology
//
// Exit codes: 0 ok, 1 data errors, 2 config errors, 3 incomplete run.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semshift/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lexical semantic change characterization harness"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string only_spec;
  bool resume = false;  // resumption is the default; flag kept as an alias
  std::string render_pole, render_method, render_id;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", manifest_path, "run manifest (JSON)")
        ->required();
    cmd->add_option("--only", only_spec,
                    "restrict to one pole, e.g. pole=dimension");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check datasets and sidecars, print totals");
  add_common(validate);

  CLI::App* render =
      app.add_subcommand("render", "print the prompt bundle for one item");
  render->add_option("--manifest", manifest_path, "run manifest (JSON)")
      ->required();
  render->add_option("--pole", render_pole, "dimension|relation|orientation")
      ->required();
  render->add_option("--method", render_method, "fewshot|cot|rhetoric")
      ->required();
  render->add_option("--id", render_id, "item id")->required();

  CLI::App* run = app.add_subcommand("run", "sample all configured runs");
  add_common(run);
  run->add_flag("--resume", resume,
                "resume from existing logs (this is also the default)");

  CLI::App* score = app.add_subcommand("score", "accuracy tables from logs");
  add_common(score);

  CLI::App* correlate =
      app.add_subcommand("correlate", "agreement matrices and heatmaps");
  add_common(correlate);

  CLI::App* characterize =
      app.add_subcommand("characterize", "word-level change typology");
  add_common(characterize);

  CLI11_PARSE(app, argc, argv);
  (void)resume;

  return semshift::guarded(std::cerr, [&]() -> int {
    auto manifest = semshift::load_manifest(manifest_path);
    auto opts = semshift::parse_only_filter(only_spec);

    if (validate->parsed()) {
      return semshift::cmd_validate(manifest, opts, std::cout, std::cerr);
    }
    if (render->parsed()) {
      auto pole = semshift::parse_pole(render_pole);
      if (!pole) throw semshift::ConfigError("unknown pole: " + render_pole);
      auto method = semshift::parse_method(render_method);
      if (!method)
        throw semshift::ConfigError("unknown method: " + render_method);
      return semshift::cmd_render(manifest, *pole, *method, render_id,
                                  std::cout);
    }
    if (run->parsed()) {
      return semshift::cmd_run(manifest, opts, std::cout, std::cerr);
    }
    if (score->parsed()) {
      return semshift::cmd_score(manifest, opts, std::cout, std::cerr);
    }
    if (correlate->parsed()) {
      return semshift::cmd_correlate(manifest, opts, std::cout, std::cerr);
    }
    if (characterize->parsed()) {
      return semshift::cmd_characterize(manifest, opts, std::cout,
                                        std::cerr);
    }
    throw semshift::ConfigError("no subcommand");
  });
}
