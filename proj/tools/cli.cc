// Copyright 2026 The PruMerge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <glob.h>

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "CLI11.hpp"
#include "prumerge/prumerge.h"
#include "reports.h"

namespace prumerge::tools {

namespace {

// Bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_size(const std::string& text, const std::string& flag) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(flag + ": expected a non-negative integer, got '" + text +
                     "'");
  }
  return v;
}

// "HxW" / "RxC"
std::pair<std::size_t, std::size_t> parse_dims(const std::string& text,
                                               const std::string& flag) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) {
    throw UsageError(flag + ": expected AxB, got '" + text + "'");
  }
  return {parse_size(text.substr(0, x), flag),
          parse_size(text.substr(x + 1), flag)};
}

std::optional<std::size_t> parse_auto_size(const std::string& text,
                                           const std::string& flag) {
  if (text == "auto") return std::nullopt;
  return parse_size(text, flag);
}

std::optional<double> parse_auto_ratio(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("--ratio: expected a number or 'auto', got '" + text + "'");
  }
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// The reduced set as a token dump: one row of m tokens, keys of the kept
// tokens, merged embeddings as Y.
TokenSet reduced_token_set(const TokenSet& source, const ReducedTokenSet& r) {
  const std::size_t m = r.source_indices.size();
  const std::size_t d_k = source.d_k();
  std::vector<float> keys;
  keys.reserve(source.n_heads() * m * d_k);
  for (std::size_t h = 0; h < source.n_heads(); ++h) {
    for (std::size_t i : r.source_indices) {
      const auto k = source.key(h, i);
      keys.insert(keys.end(), k.begin(), k.end());
    }
  }
  std::vector<float> y(r.tokens.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = static_cast<float>(r.tokens[i]);
  }
  return TokenSet(Grid{1, m}, source.d(), d_k, source.n_heads(),
                  std::vector<float>(source.q_cls().begin(),
                                     source.q_cls().end()),
                  std::move(keys), std::move(y));
}

struct ReduceArgs {
  std::string input;
  std::string mode;
  std::string k = "auto";
  std::size_t floor = 1;
  std::string ratio = "auto";
  std::size_t budget = 40;
  std::string grid = "6x6";
  bool raw_weights = false;
  bool partition = false;
  bool merge_baselines = false;
  std::string fences = "upper";
  std::string out;
  std::string stats;
  std::string mask;
  std::size_t jobs = 1;
};

struct SynthArgs {
  std::string grid;
  std::size_t d = 0;
  std::size_t dk = 0;
  std::size_t heads = 1;
  std::size_t spikes = 0;
  double gain = 6.0;
  std::size_t clusters = 4;
  std::uint64_t seed = 0;
  std::string out;
};

struct CostArgs {
  std::string model;
  std::string hw = "v100";
  std::size_t tokens_full = 0;
  std::size_t tokens_reduced = 0;
  bool int4 = false;
  std::string report;
};

struct StatsArgs {
  std::string inputs;
  std::size_t jobs = 1;
};

PipelineConfig pipeline_config(const ReduceArgs& a) {
  PipelineConfig c;
  if (a.mode == "prumerge") {
    c.mode = ReductionMode::kPruMerge;
  } else if (a.mode == "prumerge+") {
    c.mode = ReductionMode::kPruMergePlus;
  } else if (a.mode == "sequential") {
    c.mode = ReductionMode::kSequential;
  } else if (a.mode == "spatial") {
    c.mode = ReductionMode::kSpatial;
  } else {
    throw UsageError("--mode: unknown mode '" + a.mode + "'");
  }
  c.k = parse_auto_size(a.k, "--k");
  c.floor = a.floor;
  c.supplement_ratio = parse_auto_ratio(a.ratio);
  c.budget = a.budget;
  std::tie(c.grid_rows, c.grid_cols) = parse_dims(a.grid, "--grid");
  c.normalize_weights = !a.raw_weights;
  c.cluster_mode = a.partition ? ClusterMode::kPartition : ClusterMode::kKnn;
  c.merge_baselines = a.merge_baselines;
  if (a.fences == "upper") {
    c.fence_sides = FenceSides::kUpper;
  } else if (a.fences == "both") {
    c.fence_sides = FenceSides::kBoth;
  } else {
    throw UsageError("--fences: expected upper or both");
  }
  if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
  c.threads = a.jobs;
  if (!a.mask.empty() && !ends_with(a.mask, ".txt") &&
      !ends_with(a.mask, ".pgm")) {
    throw UsageError("--mask: path must end in .txt or .pgm");
  }
  return c;
}

int run_reduce(const ReduceArgs& a, std::ostream& out) {
  const PipelineConfig config = pipeline_config(a);
  const TokenSet tokens = read_token_dump(a.input);
  const ReducedTokenSet reduced = reduce(tokens, config);

  write_token_dump(reduced_token_set(tokens, reduced), a.out);
  if (!a.stats.empty()) {
    write_file(a.stats, reduce_report(reduced, config.mode).dump(2) + "\n");
  }
  if (!a.mask.empty()) {
    const bool pgm = ends_with(a.mask, ".pgm");
    std::string mask = render_mask(reduced.selection, tokens.grid(),
                                   pgm ? MaskFormat::kPgm : MaskFormat::kText);
    if (!pgm) mask.push_back('\n');
    write_file(a.mask, mask);
  }
  out << "kept " << reduced.stats.m << " of " << reduced.stats.n
      << " tokens (" << method_name(reduced.stats.method) << ")\n";
  return kExitOk;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  SynthSpec spec;
  std::tie(spec.grid.h, spec.grid.w) = parse_dims(a.grid, "--grid");
  spec.d = a.d;
  spec.d_k = a.dk;
  spec.n_heads = a.heads;
  spec.n_spikes = a.spikes;
  spec.spike_gain = a.gain;
  spec.cluster_count = a.clusters;
  spec.seed = a.seed;
  try {
    validate_synth_spec(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const std::size_t bytes = write_token_dump(synth_generate(spec), a.out);
  out << "wrote " << bytes << " bytes to " << a.out << "\n";
  return kExitOk;
}

int run_cost(const CostArgs& a, std::ostream& out) {
  ModelProfile model = (a.model == "7b" || a.model == "13b")
                           ? model_preset(a.model)
                           : load_model_profile(a.model);
  if (a.int4) model.bytes_per_param = 0.5;
  const HardwareProfile hw =
      a.hw == "v100" ? hardware_preset(a.hw) : load_hardware_profile(a.hw);
  const CostComparison c =
      cost_comparison(model, hw, a.tokens_full, a.tokens_reduced);
  write_file(a.report, cost_report_json(c, a.model, a.hw, model).dump(2) + "\n");
  out << "flops " << c.full.flops_total << " -> " << c.reduced.flops_total
      << " (x" << c.flops_ratio << ")\n";
  return kExitOk;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> paths;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) {
    throw Error(ErrorCode::kIo, "glob failed for " + pattern);
  }
  if (paths.empty()) {
    throw Error(ErrorCode::kIo, "no files match " + pattern);
  }
  return paths;
}

int run_stats(const StatsArgs& a, std::ostream& out) {
  if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
  const auto paths = expand_glob(a.inputs);
  std::vector<ImageStats> stats(paths.size());
  std::vector<std::string> errors(paths.size());
  {
    // One reader per job; results land at their input position.
    std::vector<std::jthread> workers;
    const std::size_t jobs = std::min(a.jobs, paths.size());
    for (std::size_t t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < paths.size(); i += jobs) {
          try {
            const Json report = Json::parse(read_file(paths[i]));
            stats[i] = image_stats_from_report(report);
          } catch (const std::exception& e) {
            errors[i] = paths[i] + ": " + e.what();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(ErrorCode::kInvalidArgument, e);
  }
  out << corpus_report(corpus_stats(stats)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Adaptive visual-token reduction (PruMerge / PruMerge+)",
               "prumerge"};
  app.require_subcommand(1);

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a token dump");
  reduce_cmd->add_option("--input", reduce_args.input, "PRMG token dump")
      ->required();
  reduce_cmd
      ->add_option("--mode", reduce_args.mode,
                   "prumerge | prumerge+ | sequential | spatial")
      ->required();
  reduce_cmd->add_option("--k", reduce_args.k, "Cluster size or 'auto'");
  reduce_cmd->add_option("--floor", reduce_args.floor,
                         "Minimum number of selected tokens");
  reduce_cmd->add_option("--ratio", reduce_args.ratio,
                         "PruMerge+ supplement ratio or 'auto'");
  reduce_cmd->add_option("--budget", reduce_args.budget,
                         "Sequential baseline token count");
  reduce_cmd->add_option("--grid", reduce_args.grid,
                         "Spatial baseline sample grid RxC");
  reduce_cmd->add_flag("--raw-weights", reduce_args.raw_weights,
                       "Use raw attention values as merge weights");
  reduce_cmd->add_flag("--partition", reduce_args.partition,
                       "Assign each token to its most similar center");
  reduce_cmd->add_flag("--merge-baselines", reduce_args.merge_baselines,
                       "Run k-NN merging for baseline modes too");
  reduce_cmd->add_option("--fences", reduce_args.fences, "upper | both");
  reduce_cmd->add_option("--out", reduce_args.out, "Reduced PRMG output")
      ->required();
  reduce_cmd->add_option("--stats", reduce_args.stats, "Per-image JSON report");
  reduce_cmd->add_option("--mask", reduce_args.mask,
                         "Selection mask (.txt or .pgm)");
  reduce_cmd->add_option("--jobs", reduce_args.jobs, "Worker threads");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dump");
  synth_cmd->add_option("--grid", synth_args.grid, "Token grid HxW")->required();
  synth_cmd->add_option("--d", synth_args.d, "Embedding dimension")->required();
  synth_cmd->add_option("--dk", synth_args.dk, "Key dimension")->required();
  synth_cmd->add_option("--heads", synth_args.heads, "Attention heads");
  synth_cmd->add_option("--spikes", synth_args.spikes, "Planted spikes")
      ->required();
  synth_cmd->add_option("--gain", synth_args.gain, "Spike logit boost");
  synth_cmd->add_option("--clusters", synth_args.clusters, "Key clusters");
  synth_cmd->add_option("--seed", synth_args.seed, "PRNG seed")->required();
  synth_cmd->add_option("--out", synth_args.out, "PRMG output")->required();

  CostArgs cost_args;
  auto* cost_cmd = app.add_subcommand("cost", "Prefill cost comparison");
  cost_cmd->add_option("--model", cost_args.model, "7b | 13b | profile path")
      ->required();
  cost_cmd->add_option("--hw", cost_args.hw, "v100 | profile path");
  cost_cmd->add_option("--tokens-full", cost_args.tokens_full,
                       "Prefill tokens, full input")
      ->required();
  cost_cmd->add_option("--tokens-reduced", cost_args.tokens_reduced,
                       "Prefill tokens, reduced input")
      ->required();
  cost_cmd->add_flag("--int4", cost_args.int4, "4-bit weights");
  cost_cmd->add_option("--report", cost_args.report, "JSON report path")
      ->required();

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize reduce reports");
  stats_cmd->add_option("--inputs", stats_args.inputs,
                        "Glob of reduce --stats JSON files")
      ->required();
  stats_cmd->add_option("--jobs", stats_args.jobs, "Reader threads");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("prumerge");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*reduce_cmd) return run_reduce(reduce_args, out);
    if (*synth_cmd) return run_synth(synth_args, out);
    if (*cost_cmd) return run_cost(cost_args, out);
    return run_stats(stats_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace prumerge::tools
