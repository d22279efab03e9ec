#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <sstream>

#include "socialfilter/aggregator.hpp"
#include "socialfilter/errors.hpp"
#include "socialfilter/experiment.hpp"
#include "socialfilter/ostra.hpp"
#include "socialfilter/repository.hpp"
#include "socialfilter/simulation.hpp"
#include "socialfilter/social_graph.hpp"
#include "socialfilter/sybil_limit.hpp"
#include "socialfilter/trust.hpp"
#include "socialfilter/version.hpp"

namespace py = pybind11;
using namespace socialfilter;

namespace {

SimConfig config_from_dict(const py::dict& d) {
  py::object dumps = py::module_::import("json").attr("dumps");
  const std::string text = dumps(d).cast<std::string>();
  return sim_config_from_json(nlohmann::json::parse(text));
}

py::dict config_to_dict(const SimConfig& cfg) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(sim_config_to_json(cfg).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collaborative spam mitigation: trust-weighted report aggregation, "
            "social-graph Sybil scoring, and an Ostra credit baseline.";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<SocialGraph>(m, "SocialGraph")
      .def(py::init<>())
      .def_static("from_edges", &SocialGraph::from_edges, py::arg("n_hint"), py::arg("edges"))
      .def_static("load_file", &SocialGraph::load_file, py::arg("path"))
      .def_static("generate_small_world", &SocialGraph::generate_small_world, py::arg("n"),
                  py::arg("k"), py::arg("beta"), py::arg("seed"))
      .def("save_file", &SocialGraph::save_file, py::arg("path"))
      .def_property_readonly("node_count", &SocialGraph::node_count)
      .def_property_readonly("edge_count", &SocialGraph::edge_count)
      .def("degree", &SocialGraph::degree, py::arg("u"))
      .def("neighbors",
           [](const SocialGraph& g, NodeId u) {
             const auto nb = g.neighbors(u);
             return std::vector<NodeId>(nb.begin(), nb.end());
           })
      .def("has_edge", &SocialGraph::has_edge, py::arg("u"), py::arg("v"))
      .def("set_social_trust", &SocialGraph::set_social_trust, py::arg("i"), py::arg("j"),
           py::arg("st"))
      .def("social_trust",
           [](const SocialGraph& g, NodeId i, NodeId j) {
             const auto st = g.social_trust(i, j);
             return st ? py::cast(*st) : py::none().cast<py::object>();
           })
      .def("edges", &SocialGraph::edges)
      .def("__repr__", [](const SocialGraph& g) {
        std::ostringstream out;
        out << "SocialGraph(n=" << g.node_count() << ", m=" << g.edge_count() << ")";
        return out.str();
      });

  py::enum_<SybilTopology>(m, "SybilTopology")
      .value("CLIQUE", SybilTopology::kClique)
      .value("RING", SybilTopology::kRing)
      .value("SMALL_WORLD", SybilTopology::kSmallWorld);

  py::class_<SybilRegionSpec>(m, "SybilRegionSpec")
      .def(py::init([](NodeId attacker, std::uint32_t num_sybils, std::uint32_t attack_edges,
                       SybilTopology topology) {
             return SybilRegionSpec{attacker, num_sybils, attack_edges, topology};
           }),
           py::arg("attacker"), py::arg("num_sybils"), py::arg("attack_edges") = 1,
           py::arg("topology") = SybilTopology::kClique)
      .def_readwrite("attacker", &SybilRegionSpec::attacker)
      .def_readwrite("num_sybils", &SybilRegionSpec::num_sybils)
      .def_readwrite("attack_edges", &SybilRegionSpec::attack_edges)
      .def_readwrite("internal_topology", &SybilRegionSpec::internal_topology);

  m.def("attach_sybil_region", &attach_sybil_region, py::arg("graph"), py::arg("spec"),
        py::arg("seed"));

  py::class_<SybilLimitParams>(m, "SybilLimitParams")
      .def(py::init([](std::uint32_t l, std::uint32_t r, std::uint32_t w, std::uint64_t seed) {
             return SybilLimitParams{l, r, w, seed};
           }),
           py::arg("l") = 32, py::arg("r") = 0, py::arg("w") = 0, py::arg("seed") = 0)
      .def_readwrite("l", &SybilLimitParams::l)
      .def_readwrite("r", &SybilLimitParams::r)
      .def_readwrite("w", &SybilLimitParams::w)
      .def_readwrite("seed", &SybilLimitParams::seed);

  m.def(
      "compute_identity_uniqueness",
      [](const SocialGraph& g, const SybilLimitParams& params) {
        const auto result = compute_identity_uniqueness(g, params);
        std::vector<double> scores;
        scores.reserve(result.scores.size());
        for (const auto& s : result.scores) scores.push_back(s.id);
        return py::make_tuple(scores, result.verifiers);
      },
      py::arg("graph"), py::arg("params") = SybilLimitParams{},
      "Returns (scores, verifiers): per-node identity-uniqueness scores and "
      "the sampled verifier set.");

  m.def("report_similarity", &report_similarity, py::arg("c_i"), py::arg("c_j"));
  m.def("update_direct_trust", &update_direct_trust, py::arg("d_k"), py::arg("v_next"),
        py::arg("alpha"));

  py::class_<TrustGraph>(m, "TrustGraph")
      .def(py::init<std::vector<NodeId>>(), py::arg("nodes"))
      .def("set_direct_trust", &TrustGraph::set_direct_trust, py::arg("from_node"),
           py::arg("to_node"), py::arg("d"))
      .def("direct_trust", &TrustGraph::direct_trust, py::arg("from_node"), py::arg("to_node"))
      .def("reporter_trust", &TrustGraph::reporter_trust, py::arg("i"), py::arg("j"))
      .def("reporter_trust_all", &TrustGraph::reporter_trust_all, py::arg("i"));

  py::class_<SpammerReport>(m, "SpammerReport")
      .def(py::init([](NodeId reporter, HostId host, double confidence, double timestamp) {
             return SpammerReport{reporter, host, confidence, timestamp};
           }),
           py::arg("reporter"), py::arg("host"), py::arg("confidence"), py::arg("timestamp"))
      .def_readwrite("reporter", &SpammerReport::reporter)
      .def_readwrite("host", &SpammerReport::host)
      .def_readwrite("confidence", &SpammerReport::confidence)
      .def_readwrite("timestamp", &SpammerReport::timestamp);

  py::class_<ReportRepository>(m, "ReportRepository")
      .def(py::init([](double validity_window, double epsilon, double sync_interval) {
             return ReportRepository(RepositoryConfig{validity_window, epsilon, sync_interval});
           }),
           py::arg("validity_window") = 14.0 * 86400.0, py::arg("epsilon") = 0.05,
           py::arg("sync_interval") = 3600.0)
      .def("submit_spammer_report", &ReportRepository::submit_spammer_report, py::arg("report"))
      .def(
          "get_spammer_reports",
          [](const ReportRepository& repo, HostId host, NodeId requester,
             const std::vector<NodeId>& view, double now) {
            std::set<NodeId> members(view.begin(), view.end());
            return repo.get_spammer_reports(
                host, requester, [&](NodeId v) { return members.count(v) > 0; }, now);
          },
          py::arg("host"), py::arg("requester"), py::arg("view"), py::arg("now"))
      .def_property_readonly("live_report_count", &ReportRepository::live_report_count);

  m.def(
      "is_spammer",
      [](py::object local_confidence, NodeId node, HostId host, double now,
         const std::unordered_map<NodeId, double>& reporter_trust,
         const std::unordered_map<NodeId, double>& identity, const std::vector<NodeId>& view,
         const ReportRepository& repo) {
        std::optional<double> local;
        if (!local_confidence.is_none()) local = local_confidence.cast<double>();
        return is_spammer(node, host, now, local, reporter_trust, identity, view, repo);
      },
      py::arg("local_confidence"), py::arg("node"), py::arg("host"), py::arg("now"),
      py::arg("reporter_trust"), py::arg("identity"), py::arg("view"), py::arg("repository"));
  m.def(
      "aggregate_reports",
      [](py::object local_confidence,
         const std::vector<std::tuple<NodeId, double, double, double>>& rows) {
        std::optional<double> local;
        if (!local_confidence.is_none()) local = local_confidence.cast<double>();
        std::vector<WeightedReport> reports;
        for (const auto& [reporter, confidence, rt, id] : rows) {
          reports.push_back(WeightedReport{reporter, confidence, rt, id});
        }
        return is_spammer(local, reports);
      },
      py::arg("local_confidence"), py::arg("reports"),
      "Eq.-3 aggregation over (reporter, confidence, reporter_trust, identity) rows.");
  m.def("decide_block", &decide_block, py::arg("likelihood"), py::arg("threshold") = 0.5);

  py::enum_<OstraVerdict>(m, "OstraVerdict")
      .value("WANTED", OstraVerdict::kWanted)
      .value("UNWANTED", OstraVerdict::kUnwanted);

  py::class_<OstraCredit>(m, "OstraCredit")
      .def(py::init<const SocialGraph&, int>(), py::arg("graph"), py::arg("credit_bound") = 5,
           py::keep_alive<1, 2>())
      .def("find_social_path", &OstraCredit::find_social_path, py::arg("sender"),
           py::arg("receiver"))
      .def("issue_token", &OstraCredit::issue_token, py::arg("path"), py::arg("now") = 0.0)
      .def("classify", &OstraCredit::classify, py::arg("token"), py::arg("verdict"))
      .def("balance", &OstraCredit::balance, py::arg("u"), py::arg("v"))
      .def("bounds", &OstraCredit::bounds, py::arg("u"), py::arg("v"))
      .def_property_readonly("outstanding_tokens", &OstraCredit::outstanding_tokens);

  m.def(
      "run_simulation",
      [](const py::dict& config) {
        const SimResult result = run_simulation(config_from_dict(config));
        py::dict out;
        py::list timelines;
        for (const auto& tl : result.timelines) {
          py::dict t;
          t["engine"] = tl.engine;
          py::list rows;
          for (const auto& r : tl.rows) {
            rows.append(py::make_tuple(r.sim_hour, r.spam_sent, r.spam_blocked, r.legit_sent,
                                       r.legit_blocked));
          }
          t["rows"] = rows;
          t["blocked_spam_pct"] = tl.final_blocked_spam_pct();
          t["blocked_legit_pct"] = tl.final_blocked_legit_pct();
          timelines.append(t);
        }
        out["timelines"] = timelines;
        out["identity_scores"] = result.identity_scores;
        out["node_count"] = result.node_count;
        out["first_sybil"] = result.first_sybil;
        return out;
      },
      py::arg("config"),
      "Runs the discrete-event simulation for a config dict (same schema as "
      "the CLI spec's 'base' section).");

  m.def(
      "simulation_csv",
      [](const py::dict& config) {
        std::ostringstream out;
        run_simulation(config_from_dict(config)).write_csv(out);
        return out.str();
      },
      py::arg("config"));

  m.def("default_config", [] { return config_to_dict(SimConfig{}); });

  m.def(
      "run_experiment",
      [](const py::dict& spec, const std::string& out_dir, unsigned jobs) {
        py::object dumps = py::module_::import("json").attr("dumps");
        const auto parsed =
            ExperimentSpec::from_json(nlohmann::json::parse(dumps(spec).cast<std::string>()));
        const auto records = run_experiment(parsed, out_dir, jobs);
        py::list out;
        for (const auto& r : records) {
          out.append(py::make_tuple(r.file, r.point_index, r.seed));
        }
        return out;
      },
      py::arg("spec"), py::arg("out_dir") = std::string(), py::arg("jobs") = 1);

  m.def(
      "summarize",
      [](const std::string& dir) {
        py::list out;
        for (const auto& row : summarize(dir)) {
          py::dict d;
          d["point_index"] = row.point_index;
          d["params"] = row.params;
          d["engine"] = row.engine;
          d["num_seeds"] = row.num_seeds;
          d["blocked_spam_pct_mean"] = row.blocked_spam_pct_mean;
          d["blocked_spam_pct_min"] = row.blocked_spam_pct_min;
          d["blocked_spam_pct_max"] = row.blocked_spam_pct_max;
          d["blocked_legit_pct_mean"] = row.blocked_legit_pct_mean;
          d["blocked_legit_pct_min"] = row.blocked_legit_pct_min;
          d["blocked_legit_pct_max"] = row.blocked_legit_pct_max;
          out.append(d);
        }
        return out;
      },
      py::arg("dir"));
}
