// Command-line entry point; everything goes through the C interface.

#include <unistd.h>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kbp/kbp.h"

namespace {

struct Args {
  std::string config;
  std::vector<std::string> relations;
  std::string system = "satori";
  bool refresh = false;
  bool explain = false;
  bool pooled = false;
  bool quiet = false;
  int jobs = 0;
  std::optional<uint64_t> seed;
  double fraction = 0.0;
  int repetitions = 0;
  std::string thresholds;
  std::string predictions;
  std::string kind = "all";
};

void progress(size_t done, size_t total, void*) {
  std::fprintf(stderr, "\r[%zu/%zu]", done, total);
  if (done == total) std::fputc('\n', stderr);
}

using Command = kbp_status (*)(kbp_session*, const kbp_run_options*, char**);

int run(const std::string& name, Command command, const Args& args) {
  kbp_session* session = nullptr;
  kbp_status status = kbp_session_open(args.config.c_str(), &session);
  if (status != KBP_OK) {
    std::fprintf(stderr, "kbp %s: %s: %s\n", name.c_str(), kbp_status_name(status), kbp_last_error());
    return kbp_exit_code(status);
  }

  std::vector<const char*> relations;
  for (const auto& r : args.relations) relations.push_back(r.c_str());
  kbp_run_options options;
  kbp_run_options_init(&options);
  options.system = args.system.c_str();
  options.relations = relations.data();
  options.relation_count = relations.size();
  options.refresh = args.refresh;
  options.explain = args.explain;
  options.pooled = args.pooled;
  options.jobs = args.jobs;
  options.has_seed = args.seed.has_value();
  options.seed = args.seed.value_or(0);
  options.fraction = args.fraction;
  options.repetitions = args.repetitions;
  options.thresholds_path = args.thresholds.empty() ? nullptr : args.thresholds.c_str();
  options.predictions_path = args.predictions.empty() ? nullptr : args.predictions.c_str();
  options.kind = args.kind.c_str();
  if (!args.quiet && isatty(STDERR_FILENO)) options.progress = progress;

  char* summary = nullptr;
  status = command(session, &options, &summary);
  if (status == KBP_OK) {
    std::printf("%s\n", summary);
  } else {
    std::fprintf(stderr, "kbp %s: %s: %s\n", name.c_str(), kbp_status_name(status), kbp_last_error());
  }
  kbp_string_free(summary);
  kbp_session_close(session);
  return kbp_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge base population from language models, search snippets and textual entailment"};
  app.set_version_flag("--version", std::string(kbp_version()));
  app.require_subcommand(1);
  Args args;

  struct Spec {
    const char* name;
    const char* help;
    Command command;
  };
  const Spec specs[] = {
      {"fetch-premises", "Retrieve and cache search snippets for every input pair", kbp_fetch_premises},
      {"predict", "Predict objects for the dataset's pairs", kbp_predict},
      {"calibrate", "Grid-search per-relation thresholds on the training data", kbp_calibrate},
      {"evaluate", "Score a predictions file against the dataset", kbp_evaluate},
      {"traingen", "Generate fine-tuning datasets", kbp_traingen},
      {"regime", "Repeat calibration on sampled training subsets and average the reports", kbp_regime},
  };

  std::string chosen;
  Command command = nullptr;
  for (const auto& spec : specs) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", args.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--relation", args.relations, "Only this relation (repeatable)");
    sub->add_option("--jobs", args.jobs, "Worker threads (default: available processors)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet", args.quiet, "No progress counter");
    const std::string name = spec.name;
    if (name != "traingen") sub->add_option("--system", args.system, "satori, lm-baseline, qa-baseline or re-baseline");
    if (name == "fetch-premises" || name == "predict" || name == "calibrate" || name == "regime")
      sub->add_flag("--refresh", args.refresh, "Ignore cached premises and search again");
    if (name == "predict") {
      sub->add_flag("--explain", args.explain, "Include per-candidate verdicts");
      sub->add_option("--thresholds", args.thresholds, "Threshold overlay written by calibrate")->check(CLI::ExistingFile);
    }
    if (name == "evaluate" || name == "regime") sub->add_flag("--pooled", args.pooled, "Also report pooled micro scores");
    if (name == "evaluate")
      sub->add_option("--predictions", args.predictions, "Predictions file (default: output dir, per system)")
          ->check(CLI::ExistingFile);
    if (name == "traingen")
      sub->add_option("--kind", args.kind, "mlm, entailment, qa, re or all")
          ->check(CLI::IsMember({"mlm", "entailment", "qa", "re", "all"}));
    if (name == "regime") {
      sub->add_option("--seed", args.seed, "Sampling seed");
      sub->add_option("--fraction", args.fraction, "Fraction of each relation's subjects")->check(CLI::Range(0.0, 1.0));
      sub->add_option("--repetitions", args.repetitions, "Repetitions")->check(CLI::PositiveNumber);
    }
    sub->callback([&chosen, &command, spec] {
      chosen = spec.name;
      command = spec.command;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(chosen, command, args);
}
