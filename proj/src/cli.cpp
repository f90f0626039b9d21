#include "coarrest/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coarrest/errors.hpp"
#include "coarrest/ingest.hpp"
#include "coarrest/network.hpp"
#include "coarrest/pipeline.hpp"
#include "coarrest/report.hpp"
#include "coarrest/synth.hpp"

namespace coarrest {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(what + " is not valid JSON: " + ex.what());
  }
}

// `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const fs::path& path) {
  std::map<std::string, std::string> values;
  std::istringstream in(read_file(path));
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(static_cast<std::size_t>(number), "expected key = value in config");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

template <class T>
T convert(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw InputError("config value for '" + key + "' is not valid: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> parse_bins(const std::string& text) {
  std::vector<double> bins;
  for (const auto& item : split_list(text)) bins.push_back(convert<double>("bins", item));
  return bins;
}

// Applies config entries for options the command line did not set.
class ConfigMerger {
 public:
  ConfigMerger(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  template <class T>
  void apply(const std::string& key, const CLI::Option* flag, T& target) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    used_.insert(key);
    if (flag && flag->count() > 0) return;
    target = convert<T>(key, it->second);
  }

  void apply_text(const std::string& key, const CLI::Option* flag, std::string& target) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    used_.insert(key);
    if (flag && flag->count() > 0) return;
    target = it->second;
  }

  void check_unused() const {
    for (const auto& [key, value] : values_) {
      if (!used_.contains(key)) throw InputError("unknown config key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

struct IngestArgs {
  std::string arrests;
  std::string relationships;
};

struct Ingested {
  CoArrestNetwork network;
  nlohmann::json summary;
  std::map<std::string, std::string> digests;
};

Ingested ingest_files(const IngestArgs& args, std::ostream& err) {
  Ingested result;
  const auto arrest_bytes = read_file(args.arrests);
  result.digests["arrests"] = fnv1a64_hex(arrest_bytes);
  std::istringstream arrest_in(arrest_bytes);
  auto arrests = parse_arrests(arrest_in);
  for (const auto& w : arrests.stats.warnings) err << "warning: " << w << "\n";

  std::vector<RelationshipRecord> edges;
  std::optional<Parsed<RelationshipRecord>> relationships;
  if (!args.relationships.empty()) {
    const auto rel_bytes = read_file(args.relationships);
    result.digests["relationships"] = fnv1a64_hex(rel_bytes);
    std::istringstream rel_in(rel_bytes);
    relationships = parse_relationships(rel_in);
    for (const auto& w : relationships->stats.warnings) err << "warning: " << w << "\n";
    edges = relationships->records;
  } else {
    edges = derive_coarrest_edges(arrests.records);
  }
  result.network = build_network(arrests.records, edges);
  if (result.network.num_vertices() == 0) err << "warning: network is empty\n";
  result.summary = ingest_summary_json(arrests.stats, relationships ? &relationships->stats : nullptr);
  result.summary["network"] = {{"vertices", result.network.num_vertices()},
                               {"edges", result.network.num_edges()},
                               {"total_weight", result.network.total_weight()}};
  return result;
}

void write_artifacts(const AnalysisReport& report, const fs::path& out) {
  write_file(out / "report.md", render_markdown(report));
  for (const auto& [name, content] : chart_data(report)) write_file(out / "figures" / name, content);
  for (const auto& eco : report.ecosystems) {
    write_file(out / "graphs" / ecosystem_file_name(eco.focal), render_dot(eco));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-arrest network analysis: membership inference, seed sets, ecosystems"};
  app.require_subcommand(1);

  // ingest
  IngestArgs ingest_args;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Build network.json from arrest CSV files");
  ingest->add_option("--arrests", ingest_args.arrests, "arrests.csv")->required();
  ingest->add_option("--relationships", ingest_args.relationships,
                     "relationships.csv (replaces pairs derived from arrests)");
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // analyze
  std::string network_path, from_csv, analyze_rel, analyze_out, groups_path, config_path;
  std::string bins_text;
  double tau = -1.0;
  int connector_threshold = 2, threads = 0, moderate = 2, strong = 5;
  std::vector<std::string> gang_filter;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the full analysis pipeline");
  auto* network_opt = analyze_cmd->add_option("--network", network_path, "network.json");
  auto* csv_opt = analyze_cmd->add_option("--from-csv", from_csv, "arrests.csv (ingest inline)");
  network_opt->excludes(csv_opt);
  analyze_cmd->add_option("--relationships", analyze_rel, "relationships.csv for --from-csv")
      ->needs(csv_opt);
  analyze_cmd->add_option("--out", analyze_out, "Output directory")->required();
  auto* groups_opt = analyze_cmd->add_option("--groups", groups_path,
                                             "truth.json with gang styles");
  auto* tau_opt = analyze_cmd->add_option(
      "--tau", tau, "Admit inferred members with confidence >= tau to communities");
  auto* bins_opt = analyze_cmd->add_option("--bins", bins_text, "Histogram edges, e.g. 0,0.5,1");
  auto* conn_opt = analyze_cmd->add_option("--connector-threshold", connector_threshold,
                                           "Foreign subgroups a connector must touch");
  auto* threads_opt = analyze_cmd->add_option("--threads", threads, "Worker threads (0 = all)");
  auto* moderate_opt = analyze_cmd->add_option("--moderate-ties", moderate,
                                               "Shared members for a moderate tie");
  auto* strong_opt = analyze_cmd->add_option("--strong-ties", strong,
                                             "Shared members for a strong tie");
  auto* gang_opt = analyze_cmd->add_option("--gang", gang_filter, "Restrict sections to gang(s)");
  analyze_cmd->add_option("--config", config_path, "key = value overrides");

  // gen
  SynthConfig synth;
  std::string gen_out, gen_config;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic arrest dataset");
  auto* gangs_opt = gen->add_option("--gangs", synth.gangs, "Number of gangs");
  auto* seed_opt = gen->add_option("--seed", synth.seed, "RNG seed");
  auto* disclosure_opt = gen->add_option("--disclosure", synth.disclosure_rate,
                                         "Chance a member admits on arrest");
  auto* min_opt = gen->add_option("--members-min", synth.members_min, "Smallest gang size");
  auto* max_opt = gen->add_option("--members-max", synth.members_max, "Largest gang size");
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--config", gen_config, "key = value overrides");

  // report
  std::string report_in, report_out;
  auto* report_cmd = app.add_subcommand("report", "Re-render artifacts from report.json");
  report_cmd->add_option("--in", report_in, "report.json")->required();
  report_cmd->add_option("--out", report_out, "Output directory")->required();

  std::vector<const char*> argv{"coarrest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ingest) {
      auto result = ingest_files(ingest_args, err);
      const fs::path dir(ingest_out);
      write_file(dir / "network.json", dump(to_json(result.network)));
      write_file(dir / "ingest_summary.json", dump(result.summary));
      out << fmt::format("network: {} individuals, {} relationships\n",
                         result.network.num_vertices(), result.network.num_edges());
      return 0;
    }

    if (*analyze_cmd) {
      if (network_path.empty() && from_csv.empty()) {
        err << "error: analyze needs --network or --from-csv\n";
        return 2;
      }
      if (!config_path.empty()) {
        ConfigMerger merge(read_config(config_path));
        merge.apply("tau", tau_opt, tau);
        merge.apply_text("bins", bins_opt, bins_text);
        merge.apply("connector_threshold", conn_opt, connector_threshold);
        merge.apply("threads", threads_opt, threads);
        merge.apply("moderate_ties", moderate_opt, moderate);
        merge.apply("strong_ties", strong_opt, strong);
        merge.apply_text("groups", groups_opt, groups_path);
        std::string gang_text;
        merge.apply_text("gang", nullptr, gang_text);
        if (gang_opt->count() == 0 && !gang_text.empty()) gang_filter = split_list(gang_text);
        merge.check_unused();
      }

      const fs::path dir(analyze_out);
      CoArrestNetwork net;
      std::map<std::string, std::string> digests;
      if (!from_csv.empty()) {
        auto result = ingest_files({from_csv, analyze_rel}, err);
        net = std::move(result.network);
        digests = result.digests;
        write_file(dir / "network.json", dump(to_json(net)));
        write_file(dir / "ingest_summary.json", dump(result.summary));
      } else {
        const auto text = read_file(network_path);
        digests["network"] = fnv1a64_hex(text);
        net = network_from_json(parse_json(text, network_path));
      }

      AnalysisOptions options;
      if (tau_opt->count() > 0 || tau >= 0.0) {
        if (tau < 0.0 || tau > 1.0) throw InputError("--tau must lie in [0, 1]");
        options.report.tau = tau;
      }
      if (!bins_text.empty()) options.report.bins = parse_bins(bins_text);
      options.report.connector_threshold = connector_threshold;
      options.report.moderate_ties = moderate;
      options.report.strong_ties = strong;
      options.threads = threads;
      options.gang_filter = gang_filter;
      if (!groups_path.empty()) {
        options.groups = group_tags_from_truth(parse_json(read_file(groups_path), groups_path));
      }

      StageTimings timings;
      auto report = analyze(net, options, &timings, digests);
      write_file(dir / "report.json", dump(to_json(report)));
      write_artifacts(report, dir);
      write_file(dir / "graphs" / "network.dot", render_dot(net));

      nlohmann::json timing_doc;
      for (const auto& [stage, seconds] : timings.seconds) timing_doc["stages"][stage] = seconds;
      timing_doc["total_seconds"] = timings.total();
      write_file(dir / "timings.json", dump(timing_doc));

      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      out << fmt::format("analyzed {} individuals, {} gangs in {:.3f} s\n", net.num_vertices(),
                         report.summary.gangs, timings.total());
      return 0;
    }

    if (*gen) {
      if (!gen_config.empty()) {
        ConfigMerger merge(read_config(gen_config));
        merge.apply("gangs", gangs_opt, synth.gangs);
        merge.apply("seed", seed_opt, synth.seed);
        merge.apply("disclosure", disclosure_opt, synth.disclosure_rate);
        merge.apply("members_min", min_opt, synth.members_min);
        merge.apply("members_max", max_opt, synth.members_max);
        merge.apply("hub_fraction", nullptr, synth.hub_fraction);
        merge.apply("hub_core_density", nullptr, synth.hub_core_density);
        merge.apply("extra_hub_rate", nullptr, synth.extra_hub_rate);
        merge.apply("cell_min", nullptr, synth.cell_min);
        merge.apply("cell_max", nullptr, synth.cell_max);
        merge.apply("intra_density", nullptr, synth.intra_density);
        merge.apply("inter_subgroup_rate", nullptr, synth.inter_subgroup_rate);
        merge.apply("inter_gang_rate", nullptr, synth.inter_gang_rate);
        merge.apply("multi_claim_rate", nullptr, synth.multi_claim_rate);
        merge.check_unused();
      }
      auto data = generate(synth);
      const fs::path dir(gen_out);
      write_file(dir / "arrests.csv", data.arrests_csv);
      write_file(dir / "relationships.csv", data.relationships_csv);
      write_file(dir / "truth.json", dump(data.truth()));
      out << fmt::format("generated {} persons in {} gangs\n", data.persons.size(), synth.gangs);
      return 0;
    }

    if (*report_cmd) {
      auto report = report_from_json(parse_json(read_file(report_in), report_in));
      write_artifacts(report, report_out);
      out << fmt::format("rendered {} gang sections\n", report.gangs.size());
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace coarrest
