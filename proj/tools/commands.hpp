#pragma once

// Verb implementations behind the relcurr executable. Each command reads and
// writes files under the context's output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relcurr/config.hpp"
#include "relcurr/evaluation.hpp"
#include "relcurr/io.hpp"

namespace relcurr::cli {

namespace fs = std::filesystem;

inline constexpr const char* kEndpointEnv = "RELCURR_ANNOTATOR_URL";

struct Context {
  PipelineConfig config;
  std::string hash;
  fs::path out_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  Exec exec = Exec::Parallel;
  std::string endpoint_url;  // empty selects the synthetic oracle

  Context(PipelineConfig cfg, std::ostream& o, std::ostream& e);
  fs::path path(const std::string& name) const { return out_dir / name; }
};

struct GenerateResult {
  fs::path train, train_sidecar, test, test_sidecar;
};
GenerateResult cmd_generate(const Context& ctx);

struct AnnotateOptions {
  std::vector<fs::path> datasets;  // empty: train.jsonl and test.jsonl when present
  fs::path cache;                  // empty: annotations.jsonl
};
struct AnnotateSummary {
  std::size_t new_count = 0;
  std::size_t cached = 0;
  std::size_t failed = 0;
};
/// Throws AnnotationUnavailable after saving the cache if any sample failed.
AnnotateSummary cmd_annotate(const Context& ctx, const AnnotateOptions& opts);

struct PartitionOptions {
  fs::path dataset;      // empty: train.jsonl
  fs::path annotations;  // empty: annotations.jsonl
  fs::path output;       // empty: <stem>.split.json
};
SplitFile cmd_partition(const Context& ctx, const PartitionOptions& opts);

struct TrainOptions {
  fs::path dataset;      // empty: train.jsonl
  fs::path annotations;  // empty: annotations.jsonl
  std::string regime;    // empty: config value; "all" runs every regime
  bool sweep_alpha = false;
  fs::path eval_dataset;  // empty: test.jsonl when present
};
void cmd_train(const Context& ctx, const TrainOptions& opts);

struct EvaluateOptions {
  fs::path checkpoint;  // empty: model_<config regime>.json
  fs::path dataset;     // empty: test.jsonl
  fs::path split;       // empty: <stem>.split.json
  fs::path sidecar;     // empty: <stem>.latent.jsonl when present
  fs::path output;      // empty: eval_<checkpoint stem>_<stem>.json
};
EvalReport cmd_evaluate(const Context& ctx, const EvaluateOptions& opts);

struct SweepOptions {
  fs::path dataset;
  fs::path annotations;
  /// "grid" (alpha x w_ambiguous), "frames" or "questions".
  std::string over = "grid";
};
void cmd_sweep(const Context& ctx, const SweepOptions& opts);

/// Parses argv and runs one verb; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relcurr::cli
