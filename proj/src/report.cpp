#include "coarrest/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "coarrest/errors.hpp"

namespace coarrest {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json options_json(const ReportOptions& o) {
  return {{"tau", optional_number(o.tau)},
          {"bins", o.bins},
          {"connector_threshold", o.connector_threshold},
          {"moderate_ties", o.moderate_ties},
          {"strong_ties", o.strong_ties}};
}

ReportOptions options_from(const json& j) {
  ReportOptions o;
  o.tau = read_optional(j.at("tau"));
  o.bins = j.at("bins").get<std::vector<double>>();
  o.connector_threshold = j.at("connector_threshold").get<int>();
  o.moderate_ties = j.at("moderate_ties").get<int>();
  o.strong_ties = j.at("strong_ties").get<int>();
  return o;
}

json seeds_json(const GangSeedReport& s) {
  auto trace = json::array();
  for (const auto& [id, dist] : s.trace) trace.push_back({{"id", id}, {"dist", dist}});
  return {{"gang", s.gang},     {"group", s.group},         {"members", s.members},
          {"seed", s.seed},     {"seed_pct", s.seed_pct},   {"trace", std::move(trace)},
          {"shells", s.shells}};
}

GangSeedReport seeds_from(const json& j) {
  GangSeedReport s;
  s.gang = j.at("gang").get<std::string>();
  s.group = j.at("group").get<std::string>();
  s.members = j.at("members").get<std::size_t>();
  s.seed = j.at("seed").get<std::vector<std::string>>();
  s.seed_pct = j.at("seed_pct").get<double>();
  for (const auto& t : j.at("trace")) {
    s.trace.emplace_back(t.at("id").get<std::string>(), t.at("dist").get<int>());
  }
  s.shells = j.at("shells").get<std::map<std::string, int>>();
  return s;
}

json subgroup_json(const Subgroup& sg) {
  return {{"id", sg.id}, {"gang", sg.gang}, {"size", sg.members.size()}, {"members", sg.members}};
}

Subgroup subgroup_from(const json& j) {
  return {j.at("id").get<std::string>(), j.at("gang").get<std::string>(),
          j.at("members").get<std::vector<std::string>>()};
}

json community_json(const GangPartition& p) {
  auto subgroups = json::array();
  for (const auto& sg : p.subgroups) subgroups.push_back(subgroup_json(sg));
  return {{"gang", p.gang},
          {"group", p.group},
          {"modularity", optional_number(p.modularity)},
          {"subgroups", std::move(subgroups)}};
}

GangPartition community_from(const json& j) {
  GangPartition p;
  p.gang = j.at("gang").get<std::string>();
  p.group = j.at("group").get<std::string>();
  p.modularity = read_optional(j.at("modularity"));
  for (const auto& sg : j.at("subgroups")) p.subgroups.push_back(subgroup_from(sg));
  return p;
}

json connectors_json(const std::vector<Connector>& cs) {
  auto out = json::array();
  for (const auto& c : cs) out.push_back({{"person", c.person}, {"touched", c.touched}});
  return out;
}

std::vector<Connector> connectors_from(const json& j) {
  std::vector<Connector> out;
  for (const auto& c : j) {
    out.push_back({c.at("person").get<std::string>(),
                   c.at("touched").get<std::vector<std::string>>()});
  }
  return out;
}

json ecosystem_json(const Ecosystem& eco) {
  auto nodes = json::array();
  for (const auto& sg : eco.nodes) nodes.push_back(subgroup_json(sg));
  auto edges = json::array();
  for (const auto& e : eco.edges) {
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"weight", e.weight()},
                     {"ties", e.ties},
                     {"shared_members", e.shared_members},
                     {"co_arrest_weight", e.co_arrest_weight},
                     {"provenance", e.provenance()}});
  }
  return {{"focal", eco.focal},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"connectors", connectors_json(eco.connectors)}};
}

Ecosystem ecosystem_from(const json& j) {
  Ecosystem eco;
  eco.focal = j.at("focal").get<std::string>();
  for (const auto& n : j.at("nodes")) eco.nodes.push_back(subgroup_from(n));
  for (const auto& e : j.at("edges")) {
    EcosystemEdge edge;
    edge.a = e.at("a").get<std::string>();
    edge.b = e.at("b").get<std::string>();
    edge.ties = e.at("ties").get<std::int64_t>();
    edge.shared_members = e.at("shared_members").get<std::int64_t>();
    edge.co_arrest_weight = e.at("co_arrest_weight").get<std::int64_t>();
    eco.edges.push_back(std::move(edge));
  }
  eco.connectors = connectors_from(j.at("connectors"));
  return eco;
}

}  // namespace

json to_json(const AnalysisReport& r) {
  const auto& s = r.summary;
  auto influence = json::array();
  for (const auto& f : r.influence) influence.push_back(to_json(f));
  auto assignments = json::array();
  for (const auto& a : r.assignments) {
    assignments.push_back({{"person", a.person}, {"gang", a.gang}, {"confidence", a.confidence}});
  }
  auto gangs = json::array();
  for (const auto& g : r.gangs) {
    gangs.push_back({{"gang", g.gang},
                     {"group", g.group},
                     {"seeds", seeds_json(g.seeds)},
                     {"community", community_json(g.community)}});
  }
  auto ecosystems = json::array();
  for (const auto& e : r.ecosystems) ecosystems.push_back(ecosystem_json(e));

  return {
      {"meta",
       {{"version", r.meta.version},
        {"input_digests", r.meta.input_digests},
        {"options", options_json(r.meta.options)}}},
      {"summary",
       {{"vertices", s.vertices},
        {"edges", s.edges},
        {"total_weight", s.total_weight},
        {"gangs", s.gangs},
        {"components", s.components},
        {"unadmitted_connected", s.unadmitted_connected},
        {"unadmitted_assigned", s.unadmitted_assigned},
        {"unadmitted_over_half", s.unadmitted_over_half}}},
      {"influence", std::move(influence)},
      {"membership",
       {{"assignments", std::move(assignments)},
        {"histogram",
         {{"edges", r.histogram.edges},
          {"per_assignment", r.histogram.per_assignment},
          {"per_person_max", r.histogram.per_person_max}}}}},
      {"gangs", std::move(gangs)},
      {"group_mean_seed_pct", r.group_mean_seed_pct},
      {"group_mean_modularity", r.group_mean_modularity},
      {"ecosystems", std::move(ecosystems)},
      {"connectors", connectors_json(r.connectors)},
      {"warnings", r.warnings},
  };
}

AnalysisReport report_from_json(const json& doc) {
  try {
    AnalysisReport r;
    const auto& meta = doc.at("meta");
    r.meta.version = meta.at("version").get<std::string>();
    r.meta.input_digests = meta.at("input_digests").get<std::map<std::string, std::string>>();
    r.meta.options = options_from(meta.at("options"));

    const auto& s = doc.at("summary");
    r.summary = {s.at("vertices").get<std::int64_t>(),
                 s.at("edges").get<std::int64_t>(),
                 s.at("total_weight").get<std::int64_t>(),
                 s.at("gangs").get<std::int64_t>(),
                 s.at("components").get<std::int64_t>(),
                 s.at("unadmitted_connected").get<std::int64_t>(),
                 s.at("unadmitted_assigned").get<std::int64_t>(),
                 s.at("unadmitted_over_half").get<std::int64_t>()};

    for (const auto& f : doc.at("influence")) r.influence.push_back(influence_from_json(f));
    const auto& membership = doc.at("membership");
    for (const auto& a : membership.at("assignments")) {
      r.assignments.push_back({a.at("person").get<std::string>(), a.at("gang").get<std::string>(),
                               a.at("confidence").get<double>()});
    }
    const auto& h = membership.at("histogram");
    r.histogram.edges = h.at("edges").get<std::vector<double>>();
    r.histogram.per_assignment = h.at("per_assignment").get<std::vector<std::int64_t>>();
    r.histogram.per_person_max = h.at("per_person_max").get<std::vector<std::int64_t>>();

    for (const auto& g : doc.at("gangs")) {
      r.gangs.push_back({g.at("gang").get<std::string>(), g.at("group").get<std::string>(),
                         seeds_from(g.at("seeds")), community_from(g.at("community"))});
    }
    r.group_mean_seed_pct = doc.at("group_mean_seed_pct").get<std::map<std::string, double>>();
    r.group_mean_modularity = doc.at("group_mean_modularity").get<std::map<std::string, double>>();
    for (const auto& e : doc.at("ecosystems")) r.ecosystems.push_back(ecosystem_from(e));
    r.connectors = connectors_from(doc.at("connectors"));
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("malformed report JSON: ") + ex.what());
  }
}

std::string strength_band(std::int64_t ties, const ReportOptions& options) {
  if (ties >= options.strong_ties) return "strong";
  if (ties >= options.moderate_ties) return "moderate";
  return "weak";
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '*' || c == '_' || c == '`' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Breakpoints of a step function: "1+: 0.2964, 3+: 0.5000".
std::string steps(const InfluenceFunction& f) {
  std::vector<std::string> parts;
  double last = 0.0;
  for (int i = 1; i <= f.max_signals(); ++i) {
    if (f.values[i] != last) {
      parts.push_back(fmt::format("{}+: {:.4f}", i, f.values[i]));
      last = f.values[i];
    }
  }
  return parts.empty() ? "0 everywhere" : join(parts, ", ");
}

std::string modularity_text(const std::optional<double>& m) {
  return m ? fmt::format("{:.4f}", *m) : "n/a (no internal ties)";
}

}  // namespace

std::string render_markdown(const AnalysisReport& r) {
  std::string md;
  auto out = std::back_inserter(md);
  const auto& s = r.summary;

  fmt::format_to(out, "# Co-arrest network analysis report\n\n");
  fmt::format_to(out, "## Summary\n\n");
  fmt::format_to(out, "| Measure | Value |\n|---|---|\n");
  fmt::format_to(out, "| Individuals | {} |\n", s.vertices);
  fmt::format_to(out, "| Relationships | {} |\n", s.edges);
  fmt::format_to(out, "| Co-arrest incidents (total weight) | {} |\n", s.total_weight);
  fmt::format_to(out, "| Gangs | {} |\n", s.gangs);
  fmt::format_to(out, "| Connected components | {} |\n", s.components);
  fmt::format_to(out, "| Unadmitted, connected | {} |\n", s.unadmitted_connected);
  fmt::format_to(out, "| Unadmitted, assigned a degree of membership | {} |\n",
                 s.unadmitted_assigned);
  fmt::format_to(out, "| Unadmitted, membership > 0.5 for some gang | {} |\n",
                 s.unadmitted_over_half);
  if (!r.warnings.empty()) {
    fmt::format_to(out, "\nWarnings:\n\n");
    for (const auto& w : r.warnings) fmt::format_to(out, "- {}\n", md_escape(w));
  }
  if (s.vertices == 0) return md;

  fmt::format_to(out, "\n## Degree of membership\n\n### Influence functions\n\n");
  fmt::format_to(out, "| Gang | Admitted-neighbour steps |\n|---|---|\n");
  for (const auto& f : r.influence) {
    fmt::format_to(out, "| {} | {}{} |\n", md_escape(f.gang), steps(f),
                   f.degenerate ? " (degenerate)" : "");
  }
  fmt::format_to(out, "\n### Membership histogram\n\n");
  fmt::format_to(out, "| Range | Assignments | Individuals (max over gangs) |\n|---|---|---|\n");
  for (std::size_t k = 0; k + 1 < r.histogram.edges.size(); ++k) {
    fmt::format_to(out, "| ({:.2f}, {:.2f}] | {} | {} |\n", r.histogram.edges[k],
                   r.histogram.edges[k + 1], r.histogram.per_assignment[k],
                   r.histogram.per_person_max[k]);
  }
  fmt::format_to(out, "\n### Inferred assignments\n\n");
  if (r.assignments.empty()) {
    fmt::format_to(out, "No unadmitted individual has an admitted neighbour.\n");
  } else {
    fmt::format_to(out, "| Individual | Gang | Degree of membership |\n|---|---|---|\n");
    for (const auto& a : r.assignments) {
      fmt::format_to(out, "| {} | {} | {:.4f} |\n", md_escape(a.person), md_escape(a.gang),
                     a.confidence);
    }
  }

  fmt::format_to(out, "\n## Seed sets\n\n");
  for (const auto& g : r.gangs) {
    const auto& sd = g.seeds;
    fmt::format_to(out, "### {}{}\n\n", md_escape(g.gang),
                   g.group.empty() ? "" : " (" + md_escape(g.group) + ")");
    fmt::format_to(out, "Members: {}. Seed size: {} ({:.2f}% of the gang).\n\n", sd.members,
                   sd.seed.size(), sd.seed_pct);
    if (sd.seed.empty()) {
      fmt::format_to(out,
                     "Empty seed set: no member has enough ties inside the gang to resist "
                     "adoption, so no initial adopters are needed.\n\n");
    } else {
      std::vector<std::string> items;
      for (const auto& id : sd.seed) {
        auto it = sd.shells.find(id);
        items.push_back(fmt::format("{} (shell {})", md_escape(id),
                                    it == sd.shells.end() ? 0 : it->second));
      }
      fmt::format_to(out, "Seed members: {}\n\n", join(items, ", "));
    }
  }
  if (!r.group_mean_seed_pct.empty()) {
    fmt::format_to(out, "| Group | Mean seed size (% of gang) |\n|---|---|\n");
    for (const auto& [group, mean] : r.group_mean_seed_pct) {
      fmt::format_to(out, "| {} | {:.2f} |\n", md_escape(group), mean);
    }
    fmt::format_to(out, "\n");
  }

  fmt::format_to(out, "## Communities\n\n");
  fmt::format_to(out, "| Gang | Group | Modularity | Subgroups | Sizes |\n|---|---|---|---|---|\n");
  for (const auto& g : r.gangs) {
    std::vector<std::string> sizes;
    for (const auto& sg : g.community.subgroups) sizes.push_back(std::to_string(sg.members.size()));
    fmt::format_to(out, "| {} | {} | {} | {} | {} |\n", md_escape(g.gang), md_escape(g.group),
                   modularity_text(g.community.modularity), g.community.subgroups.size(),
                   join(sizes, " "));
  }
  if (!r.group_mean_modularity.empty()) {
    fmt::format_to(out, "\n| Group | Mean modularity |\n|---|---|\n");
    for (const auto& [group, mean] : r.group_mean_modularity) {
      fmt::format_to(out, "| {} | {:.4f} |\n", md_escape(group), mean);
    }
  }

  fmt::format_to(out, "\n## Ecosystems\n");
  for (const auto& eco : r.ecosystems) {
    fmt::format_to(out, "\n### Ecosystem of {}\n\n", md_escape(eco.focal));
    std::vector<std::string> names;
    for (const auto& n : eco.nodes) {
      names.push_back(fmt::format("{} ({})", md_escape(n.id), n.members.size()));
    }
    fmt::format_to(out, "Subgroups: {}\n\n", join(names, ", "));
    if (eco.edges.empty()) fmt::format_to(out, "No relations between subgroups.\n");
    for (const auto& e : eco.edges) {
      fmt::format_to(out, "- {} and {}: {} ties ({}), {}; co-arrest weight {}\n", md_escape(e.a),
                     md_escape(e.b), e.weight(), e.provenance(),
                     strength_band(e.weight(), r.meta.options), e.co_arrest_weight);
    }
  }

  fmt::format_to(out, "\n## Connectors\n\n");
  if (r.connectors.empty()) fmt::format_to(out, "No connectors found.\n");
  for (const auto& c : r.connectors) {
    std::vector<std::string> touched;
    for (const auto& t : c.touched) touched.push_back(md_escape(t));
    fmt::format_to(out, "- {} connects {} subgroups: {}\n", md_escape(c.person), c.touched.size(),
                   join(touched, ", "));
  }
  return md;
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

constexpr std::array<const char*, 12> kPalette = {
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string css_class(std::string_view gang) {
  std::string out = "gang-";
  for (char c : gang) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

std::string render_dot(const CoArrestNetwork& net, const DotStyle& style) {
  std::string dot;
  auto out = std::back_inserter(dot);
  const auto gangs = net.gangs();
  fmt::format_to(out, "graph network {{\n  node [shape=circle, style=filled];\n");
  for (const auto& node : net.nodes()) {
    std::string cls = "unaffiliated";
    std::string color = "#ffffff";
    if (node.admitted_gangs.size() > 1) {
      cls = "multi";
      color = "#999999";
    } else if (node.admitted_gangs.size() == 1) {
      const auto& g = *node.admitted_gangs.begin();
      cls = css_class(g);
      auto pos = std::lower_bound(gangs.begin(), gangs.end(), g) - gangs.begin();
      color = kPalette[static_cast<std::size_t>(pos) % kPalette.size()];
    }
    fmt::format_to(out, "  {} [label={}, class={}, fillcolor=\"{}\"];\n", dot_quote(node.id),
                   dot_quote(node.id), dot_quote(cls), color);
  }
  for (const auto& e : net.edges()) {
    fmt::format_to(out, "  {} -- {} [penwidth={:.2f}", dot_quote(net.id(e.u)),
                   dot_quote(net.id(e.v)), style.penwidth_per_weight * static_cast<double>(e.weight));
    if (style.weight_labels && e.weight > 1) fmt::format_to(out, ", label=\"{}\"", e.weight);
    fmt::format_to(out, "];\n");
  }
  fmt::format_to(out, "}}\n");
  return dot;
}

std::string render_dot(const Ecosystem& eco, const DotStyle& style) {
  std::string dot;
  auto out = std::back_inserter(dot);
  std::vector<std::string> gangs;
  for (const auto& n : eco.nodes) {
    if (std::find(gangs.begin(), gangs.end(), n.gang) == gangs.end()) gangs.push_back(n.gang);
  }
  fmt::format_to(out, "graph {} {{\n  node [shape=box, style=filled];\n",
                 dot_quote("ecosystem " + eco.focal));
  for (const auto& n : eco.nodes) {
    auto pos = std::find(gangs.begin(), gangs.end(), n.gang) - gangs.begin();
    fmt::format_to(out, "  {} [label={}, class={}, fillcolor=\"{}\"{}];\n", dot_quote(n.id),
                   dot_quote(fmt::format("{}\n{} members", n.id, n.members.size())),
                   dot_quote(css_class(n.gang)),
                   kPalette[static_cast<std::size_t>(pos) % kPalette.size()],
                   n.gang == eco.focal ? ", penwidth=2" : "");
  }
  for (const auto& e : eco.edges) {
    fmt::format_to(out, "  {} -- {} [penwidth={:.2f}", dot_quote(e.a), dot_quote(e.b),
                   style.penwidth_per_weight * static_cast<double>(e.weight()));
    if (style.weight_labels) fmt::format_to(out, ", label=\"{}\"", e.weight());
    if (e.shared_members > 0 && e.ties == 0) fmt::format_to(out, ", style=dashed");
    fmt::format_to(out, "];\n");
  }
  fmt::format_to(out, "}}\n");
  return dot;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::map<std::string, std::string> chart_data(const AnalysisReport& r) {
  std::map<std::string, std::string> files;

  std::string influence = "gang,i,R\n";
  for (const auto& f : r.influence) {
    for (int i = 1; i <= f.max_signals(); ++i) {
      influence += fmt::format("{},{},{}\n", csv_field(f.gang), i, f.values[i]);
    }
  }
  files["influence.csv"] = std::move(influence);

  std::string histogram = "lower,upper,assignments,individuals\n";
  for (std::size_t k = 0; k + 1 < r.histogram.edges.size(); ++k) {
    histogram += fmt::format("{},{},{},{}\n", r.histogram.edges[k], r.histogram.edges[k + 1],
                             r.histogram.per_assignment[k], r.histogram.per_person_max[k]);
  }
  files["histogram.csv"] = std::move(histogram);

  std::string seeds = "gang,group,members,seed_size,seed_pct\n";
  std::string modularity = "gang,group,modularity\n";
  for (const auto& g : r.gangs) {
    seeds += fmt::format("{},{},{},{},{}\n", csv_field(g.gang), csv_field(g.group),
                         g.seeds.members, g.seeds.seed.size(), g.seeds.seed_pct);
    modularity += fmt::format("{},{},{}\n", csv_field(g.gang), csv_field(g.group),
                              g.community.modularity ? fmt::format("{}", *g.community.modularity)
                                                     : std::string());
  }
  files["seed_pct.csv"] = std::move(seeds);
  files["modularity.csv"] = std::move(modularity);
  return files;
}

std::string ecosystem_file_name(const std::string& gang) {
  std::string safe;
  for (char c : gang) {
    safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  }
  if (safe != gang) safe += "_" + fnv1a64_hex(gang).substr(0, 8);
  return "ecosystem_" + safe + ".dot";
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace coarrest
