#include "socialfilter/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "socialfilter/errors.hpp"
#include "socialfilter/version.hpp"

namespace socialfilter {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& scope) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown config key '" + (scope.empty() ? key : scope + "." + key) + "'");
    }
  }
}

Engine engine_from_string(const std::string& s) {
  if (s == "socialfilter") return Engine::kSocialFilter;
  if (s == "ostra") return Engine::kOstra;
  if (s == "both") return Engine::kBoth;
  throw ConfigError("unknown engine '" + s + "' (expected socialfilter|ostra|both)");
}

std::string engine_to_string(Engine e) {
  switch (e) {
    case Engine::kSocialFilter: return "socialfilter";
    case Engine::kOstra: return "ostra";
    case Engine::kBoth: return "both";
  }
  return "socialfilter";
}

SybilTopology topology_from_string(const std::string& s) {
  if (s == "clique") return SybilTopology::kClique;
  if (s == "ring") return SybilTopology::kRing;
  if (s == "small-world") return SybilTopology::kSmallWorld;
  throw ConfigError("unknown sybil topology '" + s + "'");
}

std::string topology_to_string(SybilTopology t) {
  switch (t) {
    case SybilTopology::kClique: return "clique";
    case SybilTopology::kRing: return "ring";
    case SybilTopology::kSmallWorld: return "small-world";
  }
  return "clique";
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

SimConfig sim_config_from_json(const json& j) {
  SimConfig cfg;
  reject_unknown_keys(
      j,
      {"graph", "sim_hours", "legit_rate", "dest_mix", "spammer_fraction", "spam_rate",
       "instant_classifier_fraction", "human_delay_mean_hours", "view_size", "pre_trusted_size",
       "threshold", "alpha", "validity_window_days", "epsilon", "sync_interval_hours", "p_verify",
       "id_l", "id_r", "id_w", "ostra_credit_bound", "false_reporter_fraction",
       "false_report_rate", "sybil", "engine", "seed", "trace_decisions"},
      "");
  if (const auto it = j.find("graph"); it != j.end()) {
    reject_unknown_keys(*it, {"file", "n", "k", "beta"}, "graph");
    read(*it, "file", cfg.graph.file);
    read(*it, "n", cfg.graph.n);
    read(*it, "k", cfg.graph.k);
    read(*it, "beta", cfg.graph.beta);
  }
  read(j, "sim_hours", cfg.sim_hours);
  read(j, "legit_rate", cfg.legit_rate);
  if (const auto it = j.find("dest_mix"); it != j.end()) {
    reject_unknown_keys(*it, {"friend", "friend_of_friend", "random"}, "dest_mix");
    read(*it, "friend", cfg.dest_friend);
    read(*it, "friend_of_friend", cfg.dest_friend_of_friend);
    read(*it, "random", cfg.dest_random);
  }
  read(j, "spammer_fraction", cfg.spammer_fraction);
  read(j, "spam_rate", cfg.spam_rate);
  read(j, "instant_classifier_fraction", cfg.instant_classifier_fraction);
  read(j, "human_delay_mean_hours", cfg.human_delay_mean_hours);
  read(j, "view_size", cfg.view_size);
  read(j, "pre_trusted_size", cfg.pre_trusted_size);
  read(j, "threshold", cfg.threshold);
  read(j, "alpha", cfg.alpha);
  read(j, "validity_window_days", cfg.validity_window_days);
  read(j, "epsilon", cfg.epsilon);
  read(j, "sync_interval_hours", cfg.sync_interval_hours);
  read(j, "p_verify", cfg.p_verify);
  read(j, "id_l", cfg.id_l);
  read(j, "id_r", cfg.id_r);
  read(j, "id_w", cfg.id_w);
  read(j, "ostra_credit_bound", cfg.ostra_credit_bound);
  read(j, "false_reporter_fraction", cfg.false_reporter_fraction);
  read(j, "false_report_rate", cfg.false_report_rate);
  if (const auto it = j.find("sybil"); it != j.end()) {
    reject_unknown_keys(*it, {"num_sybils", "attack_edges", "attacker", "topology"}, "sybil");
    read(*it, "num_sybils", cfg.sybil.num_sybils);
    read(*it, "attack_edges", cfg.sybil.attack_edges);
    read(*it, "attacker", cfg.sybil.attacker);
    if (const auto t = it->find("topology"); t != it->end()) {
      cfg.sybil.topology = topology_from_string(t->get<std::string>());
    }
  }
  if (const auto it = j.find("engine"); it != j.end()) {
    cfg.engine = engine_from_string(it->get<std::string>());
  }
  read(j, "seed", cfg.seed);
  read(j, "trace_decisions", cfg.trace_decisions);
  return cfg;
}

json sim_config_to_json(const SimConfig& cfg) {
  json j;
  if (cfg.graph.file.empty()) {
    j["graph"] = {{"n", cfg.graph.n}, {"k", cfg.graph.k}, {"beta", cfg.graph.beta}};
  } else {
    j["graph"] = {{"file", cfg.graph.file}};
  }
  j["sim_hours"] = cfg.sim_hours;
  j["legit_rate"] = cfg.legit_rate;
  j["dest_mix"] = {{"friend", cfg.dest_friend},
                   {"friend_of_friend", cfg.dest_friend_of_friend},
                   {"random", cfg.dest_random}};
  j["spammer_fraction"] = cfg.spammer_fraction;
  j["spam_rate"] = cfg.spam_rate;
  j["instant_classifier_fraction"] = cfg.instant_classifier_fraction;
  j["human_delay_mean_hours"] = cfg.human_delay_mean_hours;
  j["view_size"] = cfg.view_size;
  j["pre_trusted_size"] = cfg.pre_trusted_size;
  j["threshold"] = cfg.threshold;
  j["alpha"] = cfg.alpha;
  j["validity_window_days"] = cfg.validity_window_days;
  j["epsilon"] = cfg.epsilon;
  j["sync_interval_hours"] = cfg.sync_interval_hours;
  j["p_verify"] = cfg.p_verify;
  j["id_l"] = cfg.id_l;
  j["id_r"] = cfg.id_r;
  j["id_w"] = cfg.id_w;
  j["ostra_credit_bound"] = cfg.ostra_credit_bound;
  j["false_reporter_fraction"] = cfg.false_reporter_fraction;
  j["false_report_rate"] = cfg.false_report_rate;
  if (cfg.sybil.num_sybils > 0) {
    j["sybil"] = {{"num_sybils", cfg.sybil.num_sybils},
                  {"attack_edges", cfg.sybil.attack_edges},
                  {"attacker", cfg.sybil.attacker},
                  {"topology", topology_to_string(cfg.sybil.topology)}};
  }
  j["engine"] = engine_to_string(cfg.engine);
  j["seed"] = cfg.seed;
  j["trace_decisions"] = cfg.trace_decisions;
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  reject_unknown_keys(j, {"base", "sweep", "seeds", "output_dir"}, "");
  ExperimentSpec spec;
  if (const auto it = j.find("base"); it != j.end()) spec.base = *it;
  if (const auto it = j.find("sweep"); it != j.end()) {
    for (const auto& entry : *it) {
      reject_unknown_keys(entry, {"key", "values"}, "sweep");
      spec.sweep.emplace_back(entry.at("key").get<std::string>(),
                              std::vector<json>(entry.at("values").begin(),
                                                entry.at("values").end()));
    }
  }
  if (const auto it = j.find("seeds"); it != j.end()) {
    spec.seeds = it->get<std::vector<std::uint64_t>>();
  }
  if (spec.seeds.empty()) throw ConfigError("config field 'seeds': must be nonempty");
  if (const auto it = j.find("output_dir"); it != j.end()) {
    spec.output_dir = it->get<std::string>();
  }
  // Validate the base config (and sweep keys) eagerly so errors carry names.
  json probe = spec.base;
  sim_config_from_json(probe).validate();
  return spec;
}

ExperimentSpec ExperimentSpec::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec file is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

json ExperimentSpec::to_json() const {
  json j;
  j["base"] = base;
  j["sweep"] = json::array();
  for (const auto& [key, values] : sweep) {
    j["sweep"].push_back({{"key", key}, {"values", values}});
  }
  j["seeds"] = seeds;
  j["output_dir"] = output_dir;
  return j;
}

void apply_override(json& spec_json, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // bare strings are fine
  }
  json* cursor = &spec_json;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override path '" + path + "' has an empty segment");
    if (dot == std::string::npos) {
      (*cursor)[part] = value;
      return;
    }
    cursor = &(*cursor)[part];
    start = dot + 1;
  }
}

namespace {

void set_dotted(json& doc, const std::string& path, const json& value) {
  json* cursor = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*cursor)[part] = value;
      return;
    }
    cursor = &(*cursor)[part];
    start = dot + 1;
  }
}

struct PlannedRun {
  std::uint32_t point_index;
  std::uint64_t seed;
  json params;
  SimConfig cfg;
  std::string file;
};

std::vector<PlannedRun> plan_runs(const ExperimentSpec& spec) {
  std::vector<json> points{json::object()};
  for (const auto& [key, values] : spec.sweep) {
    std::vector<json> expanded;
    for (const auto& point : points) {
      for (const auto& v : values) {
        json next = point;
        next[key] = v;
        expanded.push_back(std::move(next));
      }
    }
    points = std::move(expanded);
  }

  std::vector<PlannedRun> runs;
  char name[64];
  for (std::uint32_t pi = 0; pi < points.size(); ++pi) {
    for (const std::uint64_t seed : spec.seeds) {
      json cfg_json = spec.base;
      for (const auto& [key, v] : points[pi].items()) set_dotted(cfg_json, key, v);
      cfg_json["seed"] = seed;
      SimConfig cfg = sim_config_from_json(cfg_json);
      cfg.validate();
      std::snprintf(name, sizeof(name), "run_p%03u_s%llu.csv", pi,
                    static_cast<unsigned long long>(seed));
      runs.push_back(PlannedRun{pi, seed, points[pi], std::move(cfg), name});
    }
  }
  return runs;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                      unsigned jobs) {
  const std::string dir = out_dir.empty() ? spec.output_dir : out_dir;
  fs::create_directories(dir);
  std::vector<PlannedRun> runs = plan_runs(spec);

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, runs.size()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= runs.size()) return;
        try {
          const SimResult result = run_simulation(runs[i].cfg);
          std::ofstream out(fs::path(dir) / runs[i].file, std::ios::binary);
          result.write_csv(out);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  json manifest;
  manifest["tool_version"] = kVersion;
  manifest["spec"] = spec.to_json();
  manifest["runs"] = json::array();
  std::vector<RunRecord> records;
  for (const auto& run : runs) {
    manifest["runs"].push_back({{"file", run.file},
                                {"point_index", run.point_index},
                                {"seed", run.seed},
                                {"params", run.params},
                                {"config", sim_config_to_json(run.cfg)}});
    records.push_back(RunRecord{run.file, run.point_index, run.seed, run.params});
  }
  std::ofstream mout(fs::path(dir) / "manifest.json", std::ios::binary);
  mout << manifest.dump(2) << '\n';
  return records;
}

namespace {

struct CsvTotals {
  std::uint64_t spam_sent = 0, spam_blocked = 0, legit_sent = 0, legit_blocked = 0;
  double blocked_spam_pct() const {
    return spam_sent == 0 ? 0.0 : 100.0 * double(spam_blocked) / double(spam_sent);
  }
  double blocked_legit_pct() const {
    return legit_sent == 0 ? 0.0 : 100.0 * double(legit_blocked) / double(legit_sent);
  }
};

std::unordered_map<std::string, CsvTotals> read_run_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run CSV: " + path.string());
  std::unordered_map<std::string, CsvTotals> by_engine;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw ParseError("bad row in " + path.string() + ": " + line);
    CsvTotals& t = by_engine[fields[1]];
    t.spam_sent += std::stoull(fields[2]);
    t.spam_blocked += std::stoull(fields[3]);
    t.legit_sent += std::stoull(fields[4]);
    t.legit_blocked += std::stoull(fields[5]);
  }
  return by_engine;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::string& dir) {
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError("manifest.json not found in '" + dir + "'");
  }
  std::ifstream min(manifest_path);
  json manifest;
  min >> manifest;

  struct Key {
    std::uint32_t point;
    std::string engine;
    bool operator<(const Key& o) const {
      return point != o.point ? point < o.point : engine < o.engine;
    }
  };
  std::map<Key, std::vector<CsvTotals>> groups;
  std::map<std::uint32_t, std::string> params_of;
  for (const auto& run : manifest.at("runs")) {
    const auto point = run.at("point_index").get<std::uint32_t>();
    params_of[point] = run.at("params").dump();
    for (const auto& [engine, totals] : read_run_csv(fs::path(dir) / run.at("file").get<std::string>())) {
      groups[Key{point, engine}].push_back(totals);
    }
  }

  std::vector<SummaryRow> rows;
  for (const auto& [key, totals] : groups) {
    SummaryRow row;
    row.point_index = key.point;
    row.params = params_of[key.point];
    row.engine = key.engine;
    row.num_seeds = static_cast<std::uint32_t>(totals.size());
    double spam_sum = 0, legit_sum = 0;
    row.blocked_spam_pct_min = 1e300;
    row.blocked_legit_pct_min = 1e300;
    for (const auto& t : totals) {
      const double s = t.blocked_spam_pct();
      const double l = t.blocked_legit_pct();
      spam_sum += s;
      legit_sum += l;
      row.blocked_spam_pct_min = std::min(row.blocked_spam_pct_min, s);
      row.blocked_spam_pct_max = std::max(row.blocked_spam_pct_max, s);
      row.blocked_legit_pct_min = std::min(row.blocked_legit_pct_min, l);
      row.blocked_legit_pct_max = std::max(row.blocked_legit_pct_max, l);
    }
    row.blocked_spam_pct_mean = spam_sum / totals.size();
    row.blocked_legit_pct_mean = legit_sum / totals.size();
    rows.push_back(std::move(row));
  }

  std::ofstream out(fs::path(dir) / "summary.csv", std::ios::binary);
  out << "point_index,params,engine,num_seeds,blocked_spam_pct_mean,blocked_spam_pct_min,"
         "blocked_spam_pct_max,blocked_legit_pct_mean,blocked_legit_pct_min,"
         "blocked_legit_pct_max\n";
  char buf[160];
  for (const auto& r : rows) {
    std::string quoted = r.params;
    std::replace(quoted.begin(), quoted.end(), ',', ';');
    std::snprintf(buf, sizeof(buf), ",%s,%u,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", r.engine.c_str(),
                  r.num_seeds, r.blocked_spam_pct_mean, r.blocked_spam_pct_min,
                  r.blocked_spam_pct_max, r.blocked_legit_pct_mean, r.blocked_legit_pct_min,
                  r.blocked_legit_pct_max);
    out << r.point_index << ',' << quoted << buf << '\n';
  }
  return rows;
}

}  // namespace socialfilter
