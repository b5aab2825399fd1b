// Copyright 2026 The HybridSim Authors
//
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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridsim/analysis.hpp"
#include "hybridsim/cost.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/event_gen.hpp"
#include "hybridsim/modeler.hpp"
#include "hybridsim/plan.hpp"
#include "hybridsim/search.hpp"
#include "hybridsim/spec_io.hpp"
#include "hybridsim/timeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

struct SimulateArgs {
  std::string model_path;
  std::string cluster_path;
  std::string strategy;  // file path or compact "2M2P4D"
  std::string costs_path;
  std::string cost_policy = "strict";
  std::string pipeline_alg;
  std::int64_t micro_batch_size = 0;
  bool charge_receiver = false;
  std::string out_dir;
};

void add_common_inputs(CLI::App* cmd, SimulateArgs* args) {
  cmd->add_option("--model", args->model_path, "Model spec JSON file")
      ->required();
  cmd->add_option("--cluster", args->cluster_path, "Cluster spec JSON file")
      ->required();
  cmd->add_option("--costs", args->costs_path, "Cost table JSON file");
  cmd->add_option("--cost-policy", args->cost_policy,
                  "What to do for unmeasured events: strict or analytical")
      ->check(CLI::IsMember({"strict", "analytical"}));
}

void add_strategy_inputs(CLI::App* cmd, SimulateArgs* args) {
  cmd->add_option("--strategy", args->strategy,
                  "Strategy JSON file or compact form like 2M2P4D")
      ->required();
  cmd->add_option("--pipeline-alg", args->pipeline_alg,
                  "Pipeline algorithm override: gpipe or dapple")
      ->check(CLI::IsMember({"gpipe", "dapple"}));
  cmd->add_option("--micro-batch-size", args->micro_batch_size,
                  "Micro-batch size override")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--charge-receiver", args->charge_receiver,
                "Also occupy the receiving device during transfers");
}

hybridsim::StrategyConfig resolve_strategy(const SimulateArgs& args) {
  hybridsim::StrategyConfig strategy;
  if (hybridsim::looks_like_compact_strategy(args.strategy)) {
    strategy = hybridsim::parse_compact_strategy(
        args.strategy,
        args.micro_batch_size > 0 ? args.micro_batch_size : 1);
  } else {
    strategy = hybridsim::load_strategy_file(args.strategy);
    if (args.micro_batch_size > 0) {
      strategy.micro_batch_size = args.micro_batch_size;
    }
  }
  if (!args.pipeline_alg.empty()) {
    strategy.pipeline_algorithm =
        hybridsim::pipeline_algorithm_from_string(args.pipeline_alg);
    hybridsim::check_strategy(strategy);
  }
  return strategy;
}

hybridsim::CostTable load_costs(const SimulateArgs& args) {
  if (args.costs_path.empty()) return hybridsim::CostTable{};
  return hybridsim::CostTable::from_json(
      hybridsim::read_file(args.costs_path));
}

hybridsim::CostPolicy resolve_policy(const SimulateArgs& args) {
  return args.cost_policy == "analytical"
             ? hybridsim::CostPolicy::kAnalyticalFallback
             : hybridsim::CostPolicy::kStrict;
}

std::string format_micros(hybridsim::Seconds seconds) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f ms", seconds * 1e3);
  return std::string(buffer);
}

std::string events_to_json(const hybridsim::EventSet& events,
                           const hybridsim::CostResolver& costs) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [canon, event] : events.events()) {
    nlohmann::json record;
    record["key"] = canon;
    record["multiplicity"] = events.multiplicities().at(canon);
    record["description"] = event.description;
    if (event.key.kind == hybridsim::EventKind::kCompute) {
      record["flops"] = event.flops;
    }
    if (event.source_layer.has_value()) {
      record["source_layer"] = *event.source_layer;
    }
    try {
      const hybridsim::ResolvedCost resolved = costs.resolve(event);
      record["elapsed_us"] = static_cast<std::int64_t>(
          std::llround(resolved.elapsed * hybridsim::kMicrosPerSecond));
      record["provenance"] = hybridsim::to_string(resolved.provenance);
    } catch (const hybridsim::ValidationError&) {
      record["unresolved"] = true;
    }
    records.push_back(std::move(record));
  }
  nlohmann::json document;
  document["events"] = std::move(records);
  return document.dump(2) + "\n";
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(out_dir) / name;
  hybridsim::write_file(path.string(), content);
}

int run_simulate(const SimulateArgs& args) {
  std::vector<std::string> warnings;
  const hybridsim::ModelSpec model =
      hybridsim::load_model_file(args.model_path);
  const hybridsim::ClusterSpec cluster =
      hybridsim::load_cluster_file(args.cluster_path, &warnings);
  const hybridsim::StrategyConfig strategy = resolve_strategy(args);
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  const hybridsim::ValidatedPlan plan =
      hybridsim::validate_plan(model, cluster, strategy);
  const hybridsim::CostTable table = load_costs(args);
  const hybridsim::CostPolicy policy = resolve_policy(args);
  hybridsim::ModelerOptions options;
  options.charge_receiver = args.charge_receiver;

  const hybridsim::Timeline timeline =
      hybridsim::simulate(plan, table, policy, options);
  const hybridsim::Seconds total = hybridsim::batch_time(timeline);
  const hybridsim::ActivityReport act = hybridsim::activity(timeline);
  const hybridsim::BubbleReport bubbles = hybridsim::bubble_report(timeline);

  std::cout << "strategy " << hybridsim::format_strategy(strategy) << " ("
            << hybridsim::to_string(strategy.pipeline_algorithm) << ", "
            << plan.num_micro_batches << " micro-batches of "
            << strategy.micro_batch_size << ")\n";
  std::cout << "batch time: " << format_micros(total) << "\n";
  std::cout << "device utilization:\n";
  for (const hybridsim::DeviceActivity& device : act.per_device) {
    const hybridsim::RankCoord& coord = plan.coord(device.rank);
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  rank %3d (node %d, device %d, stage %d)  busy %s  "
                  "util %5.1f%%",
                  device.rank, coord.node_id, coord.local_device_id,
                  coord.pp_idx, format_micros(device.busy).c_str(),
                  device.utilization * 100.0);
    std::cout << line << "\n";
  }
  std::cout << "bubble time: " << format_micros(bubbles.total_bubble_time)
            << " across " << bubbles.bubbles.size() << " gaps\n";

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    const hybridsim::EventSet events = hybridsim::generate_events(plan);
    const hybridsim::CostResolver costs(table, plan.cluster, policy);

    nlohmann::json summary;
    summary["strategy"] = hybridsim::format_strategy(strategy);
    summary["pipeline_algorithm"] =
        hybridsim::to_string(strategy.pipeline_algorithm);
    summary["num_micro_batches"] = plan.num_micro_batches;
    summary["micro_batch_size"] = strategy.micro_batch_size;
    summary["devices"] = cluster.total_devices();
    summary["batch_time_us"] = static_cast<std::int64_t>(
        std::llround(total * hybridsim::kMicrosPerSecond));
    summary["throughput_per_s"] = total > 0.0 ? 1.0 / total : 0.0;
    summary["event_classes"] = events.size();
    summary["event_instances"] = events.total_instances();
    summary["timeline_instances"] = timeline.total_instances();
    summary["total_bubble_us"] = static_cast<std::int64_t>(
        std::llround(bubbles.total_bubble_time *
                     hybridsim::kMicrosPerSecond));

    write_output(args.out_dir, "summary.json", summary.dump(2) + "\n");
    write_output(args.out_dir, "timeline.json",
                 hybridsim::timeline_to_json(timeline));
    write_output(args.out_dir, "trace.json",
                 hybridsim::export_trace(timeline));
    write_output(args.out_dir, "activity.json",
                 hybridsim::activity_to_json(act));
    write_output(args.out_dir, "bubbles.json",
                 hybridsim::bubbles_to_json(bubbles));
    write_output(args.out_dir, "stage_report.json",
                 hybridsim::stage_report_to_json(
                     hybridsim::stage_report(timeline)));
    write_output(args.out_dir, "events.json",
                 events_to_json(events, costs));
    std::cout << "reports written to " << args.out_dir << "\n";
  }
  return kExitOk;
}

int run_search(const SimulateArgs& args, const std::string& sizes_text,
               int threads, const std::string& out_path) {
  std::vector<std::string> warnings;
  const hybridsim::ModelSpec model =
      hybridsim::load_model_file(args.model_path);
  const hybridsim::ClusterSpec cluster =
      hybridsim::load_cluster_file(args.cluster_path, &warnings);
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  hybridsim::SearchSpace space;
  if (args.micro_batch_size > 0) {
    space.micro_batch_size = args.micro_batch_size;
  }
  if (!args.pipeline_alg.empty()) {
    space.pipeline_algorithm =
        hybridsim::pipeline_algorithm_from_string(args.pipeline_alg);
  }
  if (!sizes_text.empty()) {
    space.allowed_sizes.clear();
    std::stringstream stream(sizes_text);
    std::string item;
    while (std::getline(stream, item, ',')) {
      try {
        space.allowed_sizes.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw hybridsim::ValidationError("--allowed-sizes: \"" + item +
                                         "\" is not an integer");
      }
    }
  }

  const hybridsim::CostTable table = load_costs(args);
  const hybridsim::CostPolicy policy = resolve_policy(args);
  const hybridsim::SearchResult result = hybridsim::grid_search(
      model, cluster, table, policy, space, threads);

  std::cout << "evaluated " << result.ranked.size() << " strategies on "
            << cluster.total_devices() << " devices\n";
  char header[160];
  std::snprintf(header, sizeof(header), "%4s  %-10s  %14s  %14s", "rank",
                "strategy", "batch time", "batches/s");
  std::cout << header << "\n";
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const hybridsim::RankedStrategy& entry = result.ranked[i];
    char line[160];
    std::snprintf(line, sizeof(line), "%4zu  %-10s  %14s  %14.4f", i + 1,
                  hybridsim::format_strategy(entry.strategy).c_str(),
                  format_micros(entry.batch_time).c_str(), entry.throughput);
    std::cout << line << "\n";
  }
  char summary[160];
  std::snprintf(summary, sizeof(summary),
                "best %s, worst %s, speedup %.3fx",
                hybridsim::format_strategy(result.ranked.front().strategy)
                    .c_str(),
                hybridsim::format_strategy(result.ranked.back().strategy)
                    .c_str(),
                result.speedup);
  std::cout << summary << "\n";

  if (!out_path.empty()) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const hybridsim::RankedStrategy& entry : result.ranked) {
      nlohmann::json record;
      record["strategy"] = hybridsim::format_strategy(entry.strategy);
      record["mp"] = entry.strategy.mp;
      record["pp"] = entry.strategy.pp;
      record["dp"] = entry.strategy.dp;
      record["pipeline_algorithm"] =
          hybridsim::to_string(entry.strategy.pipeline_algorithm);
      record["batch_time_us"] = static_cast<std::int64_t>(
          std::llround(entry.batch_time * hybridsim::kMicrosPerSecond));
      record["throughput_per_s"] = entry.throughput;
      ranked.push_back(std::move(record));
    }
    nlohmann::json document;
    document["ranked"] = std::move(ranked);
    document["best"] =
        hybridsim::format_strategy(result.ranked.front().strategy);
    document["worst"] =
        hybridsim::format_strategy(result.ranked.back().strategy);
    document["speedup"] = result.speedup;
    hybridsim::write_file(out_path, document.dump(2) + "\n");
    std::cout << "ranking written to " << out_path << "\n";
  }
  return kExitOk;
}

int run_ingest(const std::string& measurements_path,
               const std::string& aggregate_text,
               const std::string& out_path) {
  hybridsim::SampleAggregate aggregate = hybridsim::SampleAggregate::kMedian;
  if (aggregate_text == "mean") {
    aggregate = hybridsim::SampleAggregate::kMean;
  } else if (aggregate_text == "p95") {
    aggregate = hybridsim::SampleAggregate::kP95;
  }
  const std::vector<hybridsim::RawMeasurement> measurements =
      hybridsim::measurements_from_json(
          hybridsim::read_file(measurements_path));
  const hybridsim::CostTable table =
      hybridsim::ingest_measurements(measurements, aggregate);
  hybridsim::write_file(out_path, table.to_json());
  std::cout << "ingested " << measurements.size() << " measurement records "
            << "into " << table.size() << " cost entries at " << out_path
            << "\n";
  return kExitOk;
}

int run_trace(const SimulateArgs& args, const std::string& timeline_path,
              const std::string& out_path) {
  hybridsim::Timeline timeline;
  if (!timeline_path.empty()) {
    timeline = hybridsim::timeline_from_json(
        hybridsim::read_file(timeline_path));
  } else {
    if (args.model_path.empty() || args.cluster_path.empty() ||
        args.strategy.empty()) {
      throw hybridsim::ValidationError(
          "trace needs either --timeline or --model/--cluster/--strategy");
    }
    const hybridsim::ModelSpec model =
        hybridsim::load_model_file(args.model_path);
    const hybridsim::ClusterSpec cluster =
        hybridsim::load_cluster_file(args.cluster_path, nullptr);
    const hybridsim::StrategyConfig strategy = resolve_strategy(args);
    const hybridsim::ValidatedPlan plan =
        hybridsim::validate_plan(model, cluster, strategy);
    hybridsim::ModelerOptions options;
    options.charge_receiver = args.charge_receiver;
    timeline = hybridsim::simulate(plan, load_costs(args),
                                   resolve_policy(args), options);
  }
  const std::string trace = hybridsim::export_trace(timeline);
  hybridsim::validate_trace(trace);
  if (out_path.empty()) {
    std::cout << trace;
  } else {
    hybridsim::write_file(out_path, trace);
    std::cout << "trace written to " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic timeline simulator for hybrid-parallel "
               "training"};
  app.require_subcommand(1);

  SimulateArgs simulate_args;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Predict the per-device timeline of one strategy");
  add_common_inputs(simulate_cmd, &simulate_args);
  add_strategy_inputs(simulate_cmd, &simulate_args);
  simulate_cmd->add_option("--out-dir", simulate_args.out_dir,
                           "Directory for the JSON reports");

  SimulateArgs search_args;
  std::string allowed_sizes;
  int threads = 0;
  std::string search_out;
  CLI::App* search_cmd = app.add_subcommand(
      "search", "Rank every parallelization fitting the cluster");
  add_common_inputs(search_cmd, &search_args);
  search_cmd->add_option("--allowed-sizes", allowed_sizes,
                         "Comma-separated degrees, default 1,2,4,8,16");
  search_cmd->add_option("--micro-batch-size", search_args.micro_batch_size,
                         "Micro-batch size for every candidate")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--pipeline-alg", search_args.pipeline_alg,
                         "Pipeline algorithm for pp > 1 candidates")
      ->check(CLI::IsMember({"gpipe", "dapple"}));
  search_cmd->add_option("--threads", threads,
                         "Worker threads, 0 = hardware concurrency");
  search_cmd->add_option("--out", search_out, "Ranking JSON file");

  std::string measurements_path;
  std::string aggregate_text = "median";
  std::string ingest_out;
  CLI::App* ingest_cmd = app.add_subcommand(
      "ingest", "Turn raw profiler samples into a cost table");
  ingest_cmd->add_option("--measurements", measurements_path,
                         "Raw measurements JSON file")
      ->required();
  ingest_cmd->add_option("--aggregate", aggregate_text,
                         "Sample aggregation: median, mean, or p95")
      ->check(CLI::IsMember({"median", "mean", "p95"}));
  ingest_cmd->add_option("--out", ingest_out, "Cost table output file")
      ->required();

  SimulateArgs trace_args;
  std::string timeline_path;
  std::string trace_out;
  CLI::App* trace_cmd = app.add_subcommand(
      "trace", "Export a timeline in Chrome trace event format");
  trace_cmd->add_option("--timeline", timeline_path,
                        "Serialized timeline JSON file");
  trace_cmd->add_option("--model", trace_args.model_path,
                        "Model spec JSON file");
  trace_cmd->add_option("--cluster", trace_args.cluster_path,
                        "Cluster spec JSON file");
  trace_cmd->add_option("--strategy", trace_args.strategy,
                        "Strategy JSON file or compact form");
  trace_cmd->add_option("--costs", trace_args.costs_path,
                        "Cost table JSON file");
  trace_cmd->add_option("--cost-policy", trace_args.cost_policy,
                        "strict or analytical")
      ->check(CLI::IsMember({"strict", "analytical"}));
  trace_cmd->add_option("--pipeline-alg", trace_args.pipeline_alg,
                        "Pipeline algorithm override")
      ->check(CLI::IsMember({"gpipe", "dapple"}));
  trace_cmd->add_option("--micro-batch-size", trace_args.micro_batch_size,
                        "Micro-batch size override")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_flag("--charge-receiver", trace_args.charge_receiver,
                      "Also occupy the receiving device during transfers");
  trace_cmd->add_option("--out", trace_out,
                        "Trace output file, stdout when omitted");

  try {
    app.parse(argc, argv);
    if (simulate_cmd->parsed()) return run_simulate(simulate_args);
    if (search_cmd->parsed()) {
      return run_search(search_args, allowed_sizes, threads, search_out);
    }
    if (ingest_cmd->parsed()) {
      return run_ingest(measurements_path, aggregate_text, ingest_out);
    }
    if (trace_cmd->parsed()) {
      return run_trace(trace_args, timeline_path, trace_out);
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const CLI::ParseError& error) {
    if (error.get_name() == "CallForHelp" ||
        error.get_name() == "CallForAllHelp") {
      app.exit(error);
      return kExitOk;
    }
    std::cerr << "usage error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const hybridsim::ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitValidation;
  } catch (const hybridsim::InternalError& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return kExitInternal;
  }
}
