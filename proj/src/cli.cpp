// Copyright 2026 The fairscore Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairscore/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "fairscore/arrangement.hpp"
#include "fairscore/error.hpp"
#include "fairscore/estimators.hpp"
#include "fairscore/io.hpp"

namespace fairscore {

namespace {

// Flag-level mistakes detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string data;
  std::vector<std::string> scoring_cols;
  std::string sensitive;
  std::string id_col;
  std::string normalize = "none";
  std::vector<std::string> declared_groups;
  std::vector<double> weights;
  double theta = 0.0;
  double cos_sim = 0.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t k = 0;
  std::vector<std::string> constraints;
  std::size_t top = 10;
  std::string format = "json";
  std::size_t d = 3;
  std::size_t threads = 0;
  std::string scope = "full";
  std::string mode = "closest";
  std::size_t gamma = kDefaultGamma;
  std::string method;
  std::size_t max_tries = 1'000'000;
  std::size_t max_hyperplanes = 10'000;
  bool timestamp = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* cos_opt = nullptr;
  CLI::Option* k_opt = nullptr;
};

struct Context {
  const Flags& flags;
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  std::string command;
  Json metadata;
};

// ---- shared option sets -------------------------------------------------

void add_data_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--data", f.data, "CSV file with a header row")->required();
  cmd->add_option("--scoring-cols", f.scoring_cols, "Scoring columns, comma separated")
      ->delimiter(',')
      ->required();
  cmd->add_option("--sensitive", f.sensitive, "Sensitive attribute column");
  cmd->add_option("--id-col", f.id_col, "Id column (default: t1, t2, ... in row order)");
  cmd->add_option("--normalize", f.normalize, "none or minmax")
      ->check(CLI::IsMember({"none", "minmax"}));
  cmd->add_option("--declare-group", f.declared_groups,
                  "Sensitive value that may have no rows (repeatable)");
}

void add_region_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--weights", f.weights, "Reference weights, comma separated")
      ->delimiter(',')
      ->required();
  f.theta_opt = cmd->add_option("--theta", f.theta, "Vicinity half-angle in radians");
  f.cos_opt = cmd->add_option("--cos-sim", f.cos_sim, "Vicinity as minimum cosine similarity");
  f.theta_opt->excludes(f.cos_opt);
  f.cos_opt->excludes(f.theta_opt);
  cmd->add_option("--gamma", f.gamma, "Inverse-CDF table partitions");
}

void add_run_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--samples", f.samples, "Number of sampled functions")->capture_default_str();
  f.seed_opt = cmd->add_option("--seed", f.seed, "Random seed (falls back to FAIRSCORE_SEED)");
  cmd->add_option("--threads", f.threads, "Worker threads (0: all cores); never changes results");
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "json or csv");
  cmd->add_flag("--timestamp", f.timestamp, "Record the wall-clock time in the metadata");
}

// ---- helpers ------------------------------------------------------------

std::uint64_t resolve_seed(const Flags& f) {
  if (f.seed_opt != nullptr && f.seed_opt->count() > 0) return f.seed;
  if (const char* env = std::getenv("FAIRSCORE_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("FAIRSCORE_SEED must be a non-negative integer");
    }
    return value;
  }
  return 0;
}

RunOptions run_options(const Flags& f) {
  RunOptions options;
  options.threads = f.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : f.threads;
  options.gamma = f.gamma;
  return options;
}

Dataset load(Context& ctx) {
  const Flags& f = ctx.flags;
  IngestConfig config;
  config.scoring_columns = f.scoring_cols;
  if (!f.id_col.empty()) config.id_column = f.id_col;
  if (!f.sensitive.empty()) config.sensitive_column = f.sensitive;
  config.normalization = parse_normalization(f.normalize);
  config.declared_groups = f.declared_groups;
  Dataset data = load_csv(f.data, config);
  ctx.metadata["dataset"] = dataset_json(data);
  if (const auto& info = data.normalization(); info && !info->constant_columns.empty()) {
    std::string names;
    for (const std::string& c : info->constant_columns) names += (names.empty() ? "" : ", ") + c;
    const std::string warning = "constant scoring columns mapped to 0: " + names;
    ctx.metadata["warnings"].push_back(warning);
    ctx.err << "warning: " << warning << '\n';
  }
  return data;
}

RegionOfInterest region(Context& ctx) {
  const Flags& f = ctx.flags;
  const bool has_theta = f.theta_opt->count() > 0;
  const bool has_cos = f.cos_opt->count() > 0;
  if (!has_theta && !has_cos) throw UsageError("one of --theta or --cos-sim is required");
  const RegionOfInterest roi = has_theta ? RegionOfInterest::around(f.weights, f.theta)
                                         : RegionOfInterest::from_cosine_similarity(f.weights, f.cos_sim);
  ctx.metadata["roi"] = region_json(roi);
  return roi;
}

std::vector<FairnessConstraint> constraints(Context& ctx) {
  std::vector<FairnessConstraint> out;
  Json echo = Json::array();
  for (const std::string& text : ctx.flags.constraints) {
    out.push_back(parse_constraint(text));
    echo.push_back({{"group", out.back().group},
                    {"k", out.back().k},
                    {"min", out.back().min_count},
                    {"max", out.back().max_count}});
  }
  ctx.metadata["constraints"] = std::move(echo);
  return out;
}

RankingScope scope(const Flags& f) {
  if (f.scope == "full") return RankingScope::full();
  if (f.k_opt == nullptr || f.k_opt->count() == 0 || f.k == 0) throw UsageError("--scope " + f.scope + " needs --k >= 1");
  if (f.scope == "topk" || f.scope == "topk-set") return RankingScope::top_k(f.k, true);
  if (f.scope == "topk-order") return RankingScope::top_k(f.k, false);
  throw UsageError("unknown scope '" + f.scope + "'");
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void emit(Context& ctx, const std::string& kind, Json payload) {
  const ReportFormat format = parse_format(ctx.flags.format);
  ctx.metadata["command"] = ctx.command;
  ctx.metadata["args"] = ctx.args;
  if (ctx.flags.timestamp) ctx.metadata["timestamp"] = utc_now();
  ctx.out << export_report({kind, std::move(payload), std::move(ctx.metadata)}, format);
}

// ---- commands -----------------------------------------------------------

void cmd_sample(Context& ctx) {
  const Flags& f = ctx.flags;
  if (f.d < 2) throw UsageError("--d must be at least 2");
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  const std::string method = f.method.empty() ? "sphere" : f.method;
  RngStream rng(seed);
  Json samples = Json::array();
  for (std::size_t i = 0; i < f.samples; ++i) {
    if (method == "sphere") {
      samples.push_back(sample_sphere(f.d, rng));
    } else if (method == "nonnegative") {
      samples.push_back(sample_sphere_nonnegative(f.d, rng));
    } else if (method == "angles") {
      samples.push_back(sample_uniform_angles(f.d, rng));
    } else {
      throw UsageError("unknown --method '" + method + "' (sphere, nonnegative, angles)");
    }
  }
  emit(ctx, "samples",
       {{"dimension", f.d}, {"method", method}, {"samples", std::move(samples)}});
}

void cmd_sample_roi(Context& ctx) {
  const Flags& f = ctx.flags;
  const RegionOfInterest roi = region(ctx);
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  const std::string method = f.method.empty() ? "inverse-cdf" : f.method;
  RngStream rng(seed);
  Json samples = Json::array();
  Json payload = {{"dimension", roi.dimension()}, {"method", method}};
  if (method == "inverse-cdf") {
    const CapSampler sampler(roi, f.gamma);
    for (std::size_t i = 0; i < f.samples; ++i) samples.push_back(sampler(rng));
  } else if (method == "rejection") {
    if (f.max_tries < 1) throw UsageError("--max-tries must be at least 1");
    std::size_t tries = 0;
    for (std::size_t i = 0; i < f.samples; ++i) {
      std::size_t used = 0;
      samples.push_back(sample_cap_rejection(roi, rng, f.max_tries, &used));
      tries += used;
    }
    payload["tries"] = tries;
  } else {
    throw UsageError("unknown --method '" + method + "' (inverse-cdf, rejection)");
  }
  payload["samples"] = std::move(samples);
  emit(ctx, "samples", std::move(payload));
}

void cmd_rank(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const auto rules = constraints(ctx);
  const Ranking r = rank(data, f.weights);
  Json payload = ranking_json(r, data);
  payload["weights"] = f.weights;
  std::size_t k = f.k_opt != nullptr && f.k_opt->count() > 0 ? f.k : 0;
  for (const FairnessConstraint& c : rules) k = std::max(k, c.k);
  if (k == 0) k = data.size();
  payload["k"] = k;
  payload["group_counts"] = group_counts(r, data, k);
  if (!rules.empty()) payload["fair"] = check_fairness(r, data, rules);
  emit(ctx, "ranking", std::move(payload));
}

void cmd_up(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const RegionOfInterest roi = region(ctx);
  const auto rules = constraints(ctx);
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  RngStream rng(seed);
  emit(ctx, "up", to_json(estimate_up(data, rules, roi, f.samples, f.alpha, rng, run_options(f))));
}

void cmd_suggest(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const RegionOfInterest roi = region(ctx);
  const auto rules = constraints(ctx);
  SuggestMode mode;
  if (f.mode == "closest") {
    mode = SuggestMode::kClosest;
  } else if (f.mode == "first-hit") {
    mode = SuggestMode::kFirstHit;
  } else {
    throw UsageError("unknown --mode '" + f.mode + "' (closest, first-hit)");
  }
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  RngStream rng(seed);
  const Suggestion s = suggest_fair(data, rules, roi, f.samples, rng, mode, run_options(f));
  Json payload = to_json(s, data);
  payload["mode"] = f.mode;
  emit(ctx, "suggestion", std::move(payload));
}

void cmd_audit(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const RegionOfInterest roi = region(ctx);
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  RngStream rng(seed);
  emit(ctx, "audit",
       to_json(audit_reference(data, f.weights, roi, f.samples, f.alpha, rng, scope(f),
                               run_options(f)),
               data));
}

void cmd_stable(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const RegionOfInterest roi = region(ctx);
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  RngStream rng(seed);
  emit(ctx, "stability",
       to_json(stable_rankings(data, roi, f.samples, f.top, scope(f), rng, f.alpha, run_options(f)),
               data));
}

void cmd_arrange(Context& ctx) {
  const Flags& f = ctx.flags;
  const Dataset data = load(ctx);
  const RegionOfInterest roi = region(ctx);
  if (roi.dimension() != data.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "weights and dataset differ in dimension");
  }
  const std::uint64_t seed = resolve_seed(f);
  ctx.metadata["seed"] = seed;
  RngStream rng(seed);
  ApproxArrangement arr = new_arrangement(roi, f.samples, rng, f.gamma);
  std::size_t splits = 0;
  for (std::size_t i = 0; i < data.size() && arr.hyperplanes().size() < f.max_hyperplanes; ++i) {
    for (std::size_t j = i + 1; j < data.size() && arr.hyperplanes().size() < f.max_hyperplanes; ++j) {
      try {
        splits += arr.insert_hyperplane(ordering_exchange(data.tuple(i), data.tuple(j)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateExchange) throw;
      }
    }
  }
  Json payload = to_json(arr);
  payload["splits"] = splits;
  emit(ctx, "arrangement", std::move(payload));
}

int classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidRegion:
    case ErrorCode::kInvalidConstraint:
    case ErrorCode::kInvalidConfidence:
    case ErrorCode::kInvalidRadius:
    case ErrorCode::kInvalidDimension:
    case ErrorCode::kDegenerateVector:
    case ErrorCode::kTooCoarse:
    case ErrorCode::kFormatError:
      return kExitUsage;
    default:
      return is_data_error(code) ? kExitData : kExitComputation;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Sampling-based design and audit of linear scoring functions", "fairscore");
  app.require_subcommand(1);
  Flags f;

  struct Command {
    const char* name;
    const char* help;
    std::function<void(Context&)> run;
    bool data;
    bool region;
    bool run_opts;
  };
  const std::vector<Command> commands = {
      {"sample", "Uniform directions on the unit sphere", cmd_sample, false, false, true},
      {"sample-roi", "Uniform directions within a vicinity of a reference function", cmd_sample_roi,
       false, true, true},
      {"rank", "Rank a dataset by a scoring function", cmd_rank, true, false, false},
      {"up", "Estimate the unfair portion of a vicinity", cmd_up, true, true, true},
      {"suggest", "Find a fair function near a reference", cmd_suggest, true, true, true},
      {"audit", "Stability of the reference function's ranking", cmd_audit, true, true, true},
      {"stable", "Most stable rankings within a vicinity", cmd_stable, true, true, true},
      {"arrange", "Sample-based arrangement of ordering exchanges", cmd_arrange, true, true, true},
  };

  std::vector<CLI::App*> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    if (c.data) add_data_options(sub, f);
    if (c.region) add_region_options(sub, f);
    if (c.run_opts) add_run_options(sub, f);
    add_common(sub, f);
    subs.push_back(sub);
  }
  auto find = [&](const char* name) { return app.get_subcommand(name); };

  find("sample")->add_option("--d", f.d, "Dimension")->capture_default_str();
  find("sample")->add_option("--method", f.method, "sphere, nonnegative or angles");
  find("sample-roi")->add_option("--method", f.method, "inverse-cdf or rejection");
  find("sample-roi")->add_option("--max-tries", f.max_tries, "Rejection attempts per sample");
  find("rank")->add_option("--weights", f.weights, "Weights, comma separated")
      ->delimiter(',')
      ->required();
  for (const char* name : {"rank", "up", "suggest"}) {
    find(name)->add_option("--constraint", f.constraints, "GROUP:K:MIN[:MAX] (repeatable)");
  }
  for (const char* name : {"up", "audit", "stable"}) {
    find(name)->add_option("--alpha", f.alpha, "Confidence level parameter")->capture_default_str();
  }
  for (const char* name : {"rank", "audit", "stable"}) {
    find(name)->add_option("--k", f.k, "Top-k cutoff");
  }
  for (const char* name : {"audit", "stable"}) {
    find(name)->add_option("--scope", f.scope, "full, topk (= topk-set) or topk-order");
  }
  find("stable")->add_option("--top", f.top, "Number of top rankings to report");
  find("suggest")->add_option("--mode", f.mode, "closest or first-hit");
  find("arrange")->add_option("--max-hyperplanes", f.max_hyperplanes, "Cap on inserted exchanges");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (CLI::App* sub : subs) {
      if (sub->parsed()) target = sub;
    }
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    // Options shared across subcommands are looked up on the parsed one.
    f.k_opt = subs[i]->get_option_no_throw("--k");
    f.seed_opt = subs[i]->get_option_no_throw("--seed");
    f.theta_opt = subs[i]->get_option_no_throw("--theta");
    f.cos_opt = subs[i]->get_option_no_throw("--cos-sim");
    Context ctx{f, args, out, err, commands[i].name, Json::object()};
    try {
      commands[i].run(ctx);
      return kExitOk;
    } catch (const UsageError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitData;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return classify(e.code());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitComputation;
    }
  }
  return kExitUsage;
}

}  // namespace fairscore
