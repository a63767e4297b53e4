#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ucx/bench.hpp"
#include "ucx/cx_model.hpp"
#include "ucx/discovery.hpp"
#include "ucx/errors.hpp"
#include "ucx/event_log.hpp"
#include "ucx/simplify.hpp"
#include "ucx/unification.hpp"
#include "ucx/verify.hpp"

namespace py = pybind11;
using namespace ucx;

namespace {

std::vector<std::string> edge_labels(const CXGraph& g) {
    std::vector<std::string> out;
    for (const auto& [e, c] : g.edges()) out.push_back(e.first + "->" + e.second);
    return out;
}

}  // namespace

PYBIND11_MODULE(_ucx, m) {
    m.doc() = "Causal execution graph discovery and unification for event logs";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
    py::register_exception<BoundExceeded>(m, "BoundExceeded", base.ptr());

    py::enum_<Direction>(m, "Direction").value("split", Direction::split).value("join", Direction::join);

    py::class_<ActivityEvent>(m, "ActivityEvent")
        .def_readonly("case_id", &ActivityEvent::case_id)
        .def_readonly("name", &ActivityEvent::name)
        .def_readonly("timestamp", &ActivityEvent::timestamp)
        .def_readonly("payload", &ActivityEvent::payload);

    py::class_<Trace>(m, "Trace")
        .def_readonly("case_id", &Trace::case_id)
        .def_readonly("events", &Trace::events)
        .def("sequence", &Trace::sequence);

    py::class_<EventLog>(m, "EventLog")
        .def_property_readonly("traces", &EventLog::traces)
        .def_property_readonly("alphabet", &EventLog::alphabet)
        .def("__len__", &EventLog::size)
        .def("event_count", &EventLog::event_count);

    m.def(
        "parse_csv",
        [](const std::string& text, const std::string& case_column, const std::string& activity_column,
           const std::string& timestamp_column) {
            CsvSchema schema;
            schema.case_column = case_column;
            schema.activity_column = activity_column;
            schema.timestamp_column = timestamp_column;
            std::istringstream in(text);
            return parse_csv(in, schema);
        },
        py::arg("text"), py::arg("case_column") = "case:concept:name", py::arg("activity_column") = "concept:name",
        py::arg("timestamp_column") = "time:timestamp");
    m.def(
        "read_log", [](const std::string& path) { return read_log(path); }, py::arg("path"));
    m.def("to_csv", [](const EventLog& log) {
        std::ostringstream out;
        serialize_csv(out, log);
        return out.str();
    });

    py::class_<Variant>(m, "Variant")
        .def_readonly("sequence", &Variant::sequence)
        .def_readonly("case_ids", &Variant::case_ids);
    py::class_<Partition>(m, "Partition")
        .def_readonly("activity_set", &Partition::activity_set)
        .def_readonly("case_ids", &Partition::case_ids);

    m.def("extract_variants", &extract_variants);
    m.def("partition", &partition, py::arg("log"), py::arg("selected") = std::nullopt,
          py::arg("split_by_variants") = false);

    py::class_<CXGraph>(m, "CXGraph")
        .def(py::init<>())
        .def(py::init<std::set<std::string>>())
        .def("add_node", &CXGraph::add_node)
        .def("add_edge", &CXGraph::add_edge, py::arg("cause"), py::arg("effect"), py::arg("coefficient") = std::nullopt)
        .def_property_readonly("nodes", &CXGraph::nodes)
        .def_property_readonly("edges",
                               [](const CXGraph& g) {
                                   std::vector<Edge> out;
                                   for (const auto& [e, c] : g.edges()) out.push_back(e);
                                   return out;
                               })
        .def("coefficient",
             [](const CXGraph& g, const std::string& a, const std::string& b) { return g.edges().at({a, b}); })
        .def("to_json", [](const CXGraph& g) { return to_json(g); })
        .def("to_dot", [](const CXGraph& g) { return to_dot(g); })
        .def_static("from_json", &cx_from_json)
        .def("__eq__", [](const CXGraph& a, const CXGraph& b) { return a == b; })
        .def("__repr__", [](const CXGraph& g) {
            std::string s = "CXGraph(";
            for (const auto& e : edge_labels(g)) s += e + " ";
            return s + ")";
        });

    py::class_<UCXGraph>(m, "UCXGraph")
        .def_property_readonly("direction", &UCXGraph::direction)
        .def_property_readonly("activities", &UCXGraph::activities)
        .def_property_readonly("gateways",
                               [](const UCXGraph& g) {
                                   std::map<std::string, std::string> out;
                                   for (const auto& [id, gw] : g.gateways()) out[id] = std::string(to_string(gw.kind));
                                   return out;
                               })
        .def_property_readonly("edges", &UCXGraph::edges)
        .def_property_readonly("or_alternatives", &UCXGraph::or_alternatives)
        .def("to_json", [](const UCXGraph& g) { return to_json(g); })
        .def("to_dot", [](const UCXGraph& g) { return to_dot(g); })
        .def_static("from_json", [](const std::string& text) { return ucx_from_json(text); })
        .def("__eq__", [](const UCXGraph& a, const UCXGraph& b) { return a == b; });

    py::class_<DiscoveryConfig>(m, "DiscoveryConfig")
        .def(py::init<>())
        .def_readwrite("theta", &DiscoveryConfig::theta)
        .def_readwrite("coeff_prune", &DiscoveryConfig::coeff_prune)
        .def_readwrite("min_traces", &DiscoveryConfig::min_traces)
        .def_readwrite("backend", &DiscoveryConfig::backend)
        .def_readwrite("filter_violations", &DiscoveryConfig::filter_violations);

    py::class_<DiscoveryOutcome>(m, "DiscoveryOutcome")
        .def_readonly("graph", &DiscoveryOutcome::graph)
        .def_readonly("skipped", &DiscoveryOutcome::skipped)
        .def_readonly("traces", &DiscoveryOutcome::traces)
        .def_readonly("blacklist", &DiscoveryOutcome::blacklist)
        .def_readonly("warnings", &DiscoveryOutcome::warnings);

    m.def("discover_cx", &discover_cx, py::arg("partition"), py::arg("config") = DiscoveryConfig{});

    m.def("unify_graphs", &unify_graphs, py::arg("graphs"), py::arg("direction") = Direction::split);
    m.def(
        "unify",
        [](const EventLog& log, const DiscoveryConfig& config, Direction direction, bool split_by_variants,
           std::size_t jobs) {
            UnifyConfig c;
            c.discovery = config;
            c.direction = direction;
            c.split_by_variants = split_by_variants;
            c.jobs = jobs;
            return unify(log, std::nullopt, c).graph;
        },
        py::arg("log"), py::arg("config") = DiscoveryConfig{}, py::arg("direction") = Direction::split,
        py::arg("split_by_variants") = false, py::arg("jobs") = 1);
    m.def("classify_family", [](const std::vector<NodeSet>& family) {
        return std::string(to_string(classify_family(family).annotation));
    });

    m.def("simplify_report", &simplify_report, py::arg("graph"), py::arg("ascii") = false,
          py::arg("factored") = true);
    m.def("render_factored", &render_factored);

    m.def(
        "verify",
        [](const UCXGraph& g, const std::vector<CXGraph>& inputs, std::size_t bound) {
            auto r = verify(g, inputs, bound);
            py::dict d;
            d["sound"] = r.sound;
            d["complete"] = r.complete;
            std::vector<std::string> narratives;
            for (const auto& v : r.violations) narratives.push_back(v.narrative);
            d["violations"] = narratives;
            return d;
        },
        py::arg("unified"), py::arg("inputs"), py::arg("bound") = kDefaultNodeBound);

    m.def(
        "synthetic_log",
        [](const std::string& spec_json) { return gen_synthetic_log(synthetic_spec_from_json(spec_json)); },
        py::arg("spec_json"));
    m.def(
        "random_synthetic_spec",
        [](std::size_t activities, double density, std::uint64_t seed) {
            return to_json(random_synthetic_spec(activities, density, seed));
        },
        py::arg("activities"), py::arg("density"), py::arg("seed"));
}
