// ucx: discover, unify, simplify, verify, bench and export from the command line.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal invariant failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucx/bench.hpp"
#include "ucx/cx_model.hpp"
#include "ucx/discovery.hpp"
#include "ucx/errors.hpp"
#include "ucx/event_log.hpp"
#include "ucx/parallel.hpp"
#include "ucx/simplify.hpp"
#include "ucx/unification.hpp"
#include "ucx/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

struct LogOptions {
    std::string case_column = "case:concept:name";
    std::string activity_column = "concept:name";
    std::string timestamp_column = "time:timestamp";
    std::vector<std::string> activity_key;
    std::string timestamp_format = "auto";
    char delimiter = ',';
    std::string lifecycle = "complete";

    ucx::EventLog read(const std::string& path) const {
        ucx::CsvSchema schema;
        schema.case_column = case_column;
        schema.activity_column = activity_column;
        schema.timestamp_column = timestamp_column;
        schema.activity_key_columns = activity_key;
        schema.delimiter = delimiter;
        if (timestamp_format == "auto")
            schema.timestamp_format = ucx::TimestampFormat::automatic;
        else if (timestamp_format == "iso8601")
            schema.timestamp_format = ucx::TimestampFormat::iso8601;
        else if (timestamp_format == "seconds")
            schema.timestamp_format = ucx::TimestampFormat::epoch_seconds;
        else if (timestamp_format == "millis")
            schema.timestamp_format = ucx::TimestampFormat::epoch_millis;
        else
            throw ucx::DataError("unknown timestamp format '" + timestamp_format + "'");
        ucx::XesOptions xes;
        xes.lifecycle = lifecycle == "all" ? "" : lifecycle;
        return ucx::read_log(path, schema, xes);
    }
};

struct DiscoveryOptions {
    ucx::DiscoveryConfig config;
    std::string anchor = "none";
    std::string repeat_policy = "first";
    bool keep_violations = false;

    ucx::DiscoveryConfig resolve() const {
        auto c = config;
        c.anchor = ucx::parse_anchor(anchor);
        c.repeat_policy = ucx::parse_repeat_policy(repeat_policy);
        c.filter_violations = !keep_violations;
        c.validate();
        return c;
    }
};

void add_log_options(CLI::App* cmd, LogOptions& o) {
    cmd->add_option("--case-column", o.case_column, "CSV case-id column")->capture_default_str();
    cmd->add_option("--activity-column", o.activity_column, "CSV activity column")->capture_default_str();
    cmd->add_option("--timestamp-column", o.timestamp_column, "CSV timestamp column")->capture_default_str();
    cmd->add_option("--activity-key", o.activity_key, "Columns whose joined values identify an activity")
        ->delimiter(',');
    cmd->add_option("--timestamp-format", o.timestamp_format, "auto|iso8601|seconds|millis")
        ->check(CLI::IsMember({"auto", "iso8601", "seconds", "millis"}))
        ->capture_default_str();
    cmd->add_option("--delimiter", o.delimiter, "CSV field delimiter");
    cmd->add_option("--lifecycle", o.lifecycle, "XES lifecycle transition to keep ('all' keeps every event)")
        ->capture_default_str();
}

void add_discovery_options(CLI::App* cmd, DiscoveryOptions& o) {
    cmd->add_option("--theta", o.config.theta, "Precedence threshold for the blacklist")->capture_default_str();
    cmd->add_option("--coeff-prune", o.config.coeff_prune, "Minimal |coefficient| kept")->capture_default_str();
    cmd->add_option("--min-traces", o.config.min_traces, "Partitions with fewer traces are skipped")
        ->capture_default_str();
    cmd->add_option("--backend", o.config.backend, "Discovery backend")->capture_default_str();
    cmd->add_option("--anchor", o.anchor, "none|first_event")->capture_default_str();
    cmd->add_option("--repeat-policy", o.repeat_policy, "first|last|drop_trace")->capture_default_str();
    cmd->add_flag("--keep-violations", o.keep_violations,
                  "Feed traces that order a blacklisted pair the forbidden way to the backend");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ucx::DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ucx::DataError("cannot write '" + path + "'");
    out << text;
}

std::optional<std::vector<ucx::ActivitySequence>> read_variants(const std::string& path) {
    if (path.empty()) return std::nullopt;
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ucx::ParseError(path + ": " + e.what());
    }
    if (!j.is_array()) throw ucx::ParseError(path + ": expected an array of activity sequences");
    std::vector<ucx::ActivitySequence> out;
    for (const auto& v : j) {
        if (!v.is_array()) throw ucx::ParseError(path + ": every variant must be an array of activity names");
        out.push_back(v.get<ucx::ActivitySequence>());
    }
    return out;
}

std::string partition_label(const ucx::Partition& p) {
    std::string s;
    for (std::size_t i = 0; i < p.activity_set.size(); ++i) s += (i ? "|" : "") + p.activity_set[i];
    return s;
}

std::string csv_field(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void print_warnings(const std::string& where, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << where << ": " << w << '\n';
}

std::string ucx_text(const ucx::UCXGraph& g) {
    std::ostringstream out;
    out << "direction: " << ucx::to_string(g.direction()) << '\n';
    out << "activities:";
    for (const auto& a : g.activities()) out << ' ' << a;
    out << "\ngateways:\n";
    for (const auto& [id, gw] : g.gateways()) out << "  " << id << " (" << ucx::to_string(gw.kind) << ")\n";
    out << "edges:\n";
    for (const auto& e : g.edges()) out << "  " << e.first << " -> " << e.second << '\n';
    for (const auto& [id, alts] : g.or_alternatives()) out << "alternatives " << id << ": " << ucx::format_alternatives(alts) << '\n';
    return out.str();
}

std::string cx_text(const ucx::CXGraph& g) {
    std::ostringstream out;
    out << "nodes:";
    for (const auto& n : g.nodes()) out << ' ' << n;
    out << "\nedges:\n";
    for (const auto& [e, c] : g.edges()) {
        out << "  " << e.first << " -> " << e.second;
        if (c) out << " (" << *c << ')';
        out << '\n';
    }
    return out.str();
}

bool is_ucx_json(const std::string& text) {
    try {
        auto j = json::parse(text);
        return j.value("type", "") == "ucx";
    } catch (const json::exception& e) {
        throw ucx::ParseError(e.what());
    }
}

// Config files hold "key = value" lines; [sections] and # comments are
// ignored. Each key becomes --key=value for the chosen subcommand unless the
// flag is already on the command line.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    CLI::App* sub = nullptr;
    for (const auto& a : args) {
        if (auto* s = app.get_subcommand_no_throw(a)) {
            sub = s;
            break;
        }
    }
    if (!sub) return args;

    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ucx::ParseError(path + ": expected key = value", lineno);
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        if (!sub->get_option_no_throw(flag)) throw ucx::DataError(path + ": unknown key '" + key + "' for " + sub->get_name());
        bool given = std::any_of(args.begin(), args.end(),
                                 [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal execution graph discovery and unification for event logs", "ucx"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.footer("Any subcommand accepts --config <file> with 'key = value' lines; flags override it.");

    LogOptions log_opts;
    DiscoveryOptions disc;
    std::size_t jobs = 0;
    std::uint64_t seed = 0;
    std::string format;  // per-subcommand default when empty
    std::string out_path;
    std::string direction = "split";
    bool split_by_variants = false;
    std::string variants_path;

    // discover
    std::string log_path, out_dir = ".";
    auto* discover = app.add_subcommand("discover", "One causal graph per partition plus summary.csv");
    discover->add_option("log", log_path, "Event log (.csv, .xes, .xes.gz)")->required();
    discover->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
    discover->add_option("--format", format, "json|dot")->check(CLI::IsMember({"json", "dot"}));
    discover->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    discover->add_flag("--split-by-variants", split_by_variants, "One partition per variant");
    discover->add_option("--variants", variants_path, "JSON array of selected activity sequences");
    add_log_options(discover, log_opts);
    add_discovery_options(discover, disc);

    // unify
    std::vector<std::string> graph_paths;
    auto* unify = app.add_subcommand("unify", "Unified graph from a log or from pre-built graphs");
    auto* unify_log = unify->add_option("--log", log_path, "Event log to discover and unify");
    auto* unify_graphs = unify->add_option("--graphs", graph_paths, "Pre-built graph JSON files")->expected(1, -1);
    unify_log->excludes(unify_graphs);
    unify->add_option("--direction", direction, "split|join")->check(CLI::IsMember({"split", "join"}));
    unify->add_flag("--split-by-variants", split_by_variants, "One partition per variant");
    unify->add_option("--variants", variants_path, "JSON array of selected activity sequences")->needs(unify_log);
    unify->add_option("--format", format, "json|dot|text")->check(CLI::IsMember({"json", "dot", "text"}));
    unify->add_option("-o,--out", out_path, "Output file (default stdout)");
    unify->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    add_log_options(unify, log_opts);
    add_discovery_options(unify, disc);

    // simplify
    std::string unified_path;
    bool ascii = false, no_factor = false, render = false;
    auto* simplify = app.add_subcommand("simplify", "OR alternatives as XOR-of-AND formulas");
    simplify->add_option("unified", unified_path, "Unified graph JSON")->required();
    simplify->add_flag("--ascii", ascii, "Use & and ^ instead of the logic symbols");
    simplify->add_flag("--no-factor", no_factor, "Skip common-factor extraction");
    simplify->add_flag("--render", render, "Emit the graph with OR gateways replaced by AND/XOR subgraphs");
    simplify->add_option("--format", format, "text|json|dot")->check(CLI::IsMember({"text", "json", "dot"}));
    simplify->add_option("-o,--out", out_path, "Output file (default stdout)");

    // verify
    std::vector<std::string> input_paths;
    std::size_t bound = ucx::kDefaultNodeBound;
    auto* verify = app.add_subcommand("verify", "Check a unified graph against its input graphs");
    verify->add_option("--inputs", input_paths, "Input graph JSON files")->required()->expected(1, -1);
    verify->add_option("--unified", unified_path, "Unified graph JSON")->required();
    verify->add_option("--bound", bound, "Refuse graphs with more activities")->capture_default_str();
    verify->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

    // bench
    std::vector<std::size_t> synthetic_counts;
    std::size_t traces = 500, repetitions = 3;
    auto* bench = app.add_subcommand("bench", "Time discovery per partition and fit cubic/linear models");
    auto* bench_log = bench->add_option("--log", log_path, "Event log to benchmark");
    auto* bench_syn = bench->add_option("--synthetic", synthetic_counts, "Activity counts of synthetic partitions")
                          ->delimiter(',');
    bench_log->excludes(bench_syn);
    bench->add_option("--traces", traces, "Traces per synthetic partition")->capture_default_str()->needs(bench_syn);
    bench->add_option("--repetitions", repetitions, "Timings per partition (median kept)")->capture_default_str();
    bench->add_option("--seed", seed, "Seed of the synthetic workload");
    bench->add_option("-o,--out", out_path, "CSV output (default stdout)");
    add_log_options(bench, log_opts);
    add_discovery_options(bench, disc);

    // export
    std::string graph_path, synthetic_path;
    auto* exp = app.add_subcommand("export", "Convert graphs, describe logs, or generate synthetic logs");
    auto* exp_graph = exp->add_option("--graph", graph_path, "Graph JSON to convert");
    auto* exp_log = exp->add_option("--log", log_path, "Event log to summarize");
    auto* exp_syn = exp->add_option("--synthetic", synthetic_path, "Synthetic spec JSON; writes a CSV log");
    exp_graph->excludes(exp_log)->excludes(exp_syn);
    exp_log->excludes(exp_syn);
    exp->add_option("--seed", seed, "Overrides the synthetic spec's seed");
    exp->add_option("--format", format, "json|dot|text")->check(CLI::IsMember({"json", "dot", "text"}));
    exp->add_option("-o,--out", out_path, "Output file (default stdout)");
    add_log_options(exp, log_opts);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const ucx::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    auto default_format = [&](const char* f) {
        if (format.empty()) format = f;
    };
    try {
        if (*discover) {
            default_format("json");
            auto config = disc.resolve();
            auto log = log_opts.read(log_path);
            if (log.empty()) {
                std::cerr << "warning: " << log_path << " contains no traces; nothing written\n";
                return 0;
            }
            auto parts = ucx::partition(log, read_variants(variants_path), split_by_variants);
            std::vector<ucx::DiscoveryOutcome> outcomes(parts.size());
            std::vector<double> seconds(parts.size());
            ucx::parallel_for(parts.size(), jobs, [&](std::size_t i) {
                auto start = std::chrono::steady_clock::now();
                outcomes[i] = ucx::discover_cx(parts[i], config);
                seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            });

            fs::create_directories(out_dir);
            std::ostringstream summary;
            summary << "file,partition,activities,traces,skipped,edges,seconds,warnings\n";
            const int width = static_cast<int>(std::to_string(parts.size()).size());
            for (std::size_t i = 0; i < parts.size(); ++i) {
                char name[64];
                std::snprintf(name, sizeof name, "partition_%0*zu.%s", std::max(width, 3), i + 1,
                              format == "dot" ? "dot" : "json");
                const auto& o = outcomes[i];
                write_output((fs::path(out_dir) / name).string(),
                             format == "dot" ? ucx::to_dot(o.graph) : ucx::to_json(o.graph) + "\n");
                print_warnings(partition_label(parts[i]), o.warnings);
                char secs[32];
                std::snprintf(secs, sizeof secs, "%.6f", seconds[i]);
                summary << name << ',' << csv_field(partition_label(parts[i])) << ',' << parts[i].activity_set.size()
                        << ',' << o.traces << ',' << (o.skipped ? "true" : "false") << ',' << o.graph.edges().size()
                        << ',' << secs << ',' << o.warnings.size() << '\n';
            }
            write_output((fs::path(out_dir) / "summary.csv").string(), summary.str());
            std::cerr << parts.size() << " partition(s) written to " << out_dir << '\n';
            return 0;
        }

        if (*unify) {
            default_format("json");
            if (log_path.empty() && graph_paths.empty()) throw CLI::RequiredError("--log or --graphs");
            const auto dir = ucx::parse_direction(direction);
            ucx::UCXGraph g;
            if (!graph_paths.empty()) {
                std::vector<ucx::CXGraph> graphs;
                for (const auto& p : graph_paths) graphs.push_back(ucx::cx_from_json(read_file(p)));
                g = ucx::unify_graphs(graphs, dir);
            } else {
                ucx::UnifyConfig config;
                config.discovery = disc.resolve();
                config.direction = dir;
                config.split_by_variants = split_by_variants;
                config.jobs = jobs;
                auto result = ucx::unify(log_opts.read(log_path), read_variants(variants_path), config);
                for (std::size_t i = 0; i < result.partitions.size(); ++i)
                    print_warnings(partition_label(result.partitions[i]), result.outcomes[i].warnings);
                g = std::move(result.graph);
            }
            if (format == "dot")
                write_output(out_path, ucx::to_dot(g));
            else if (format == "text")
                write_output(out_path, ucx_text(g));
            else
                write_output(out_path, ucx::to_json(g) + "\n");
            return 0;
        }

        if (*simplify) {
            default_format(render ? "json" : "text");
            auto g = ucx::ucx_from_json(read_file(unified_path));
            if (render) {
                auto r = ucx::render_factored(g);
                write_output(out_path, format == "dot" ? ucx::to_dot(r) : ucx::to_json(r) + "\n");
                return 0;
            }
            auto report = ucx::simplify_report(g, ascii, !no_factor);
            if (format == "json") {
                write_output(out_path, json(report).dump(2) + "\n");
            } else {
                std::string text;
                for (const auto& [id, formula] : report) text += id + " " + formula + "\n";
                write_output(out_path, text);
            }
            return 0;
        }

        if (*verify) {
            default_format("text");
            std::vector<ucx::CXGraph> inputs;
            for (const auto& p : input_paths) inputs.push_back(ucx::cx_from_json(read_file(p)));
            auto g = ucx::ucx_from_json(read_file(unified_path), false);
            auto report = ucx::verify(g, inputs, bound);
            if (format == "json") {
                json j{{"sound", report.sound}, {"complete", report.complete}, {"violations", json::array()}};
                for (const auto& v : report.violations)
                    j["violations"].push_back({{"node", v.node}, {"group", v.group}, {"narrative", v.narrative}});
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "sound: " << (report.sound ? "yes" : "no") << '\n'
                          << "complete: " << (report.complete ? "yes" : "no") << '\n';
                for (const auto& v : report.violations) std::cout << "  " << v.narrative << '\n';
            }
            return report.ok() ? 0 : kExitData;
        }

        if (*bench) {
            auto config = disc.resolve();
            std::vector<ucx::Partition> parts;
            if (!synthetic_counts.empty())
                parts = ucx::synthetic_bench_partitions(synthetic_counts, traces, seed);
            else if (!log_path.empty())
                parts = ucx::partition(log_opts.read(log_path));
            else
                throw CLI::RequiredError("--log or --synthetic");
            auto report = ucx::bench_partitions(parts, config, repetitions);
            write_output(out_path, ucx::bench_csv(report));
            if (report.cubic)
                std::cerr << "cubic fit R^2 = " << report.cubic->r2 << ", linear fit R^2 = " << report.linear->r2
                          << '\n';
            else
                std::cerr << report.notice << '\n';
            return 0;
        }

        if (*exp) {
            default_format("json");
            if (!graph_path.empty()) {
                auto text = read_file(graph_path);
                if (is_ucx_json(text)) {
                    auto g = ucx::ucx_from_json(text);
                    write_output(out_path, format == "dot"    ? ucx::to_dot(g)
                                           : format == "text" ? ucx_text(g)
                                                              : ucx::to_json(g) + "\n");
                } else {
                    auto g = ucx::cx_from_json(text);
                    write_output(out_path, format == "dot"    ? ucx::to_dot(g)
                                           : format == "text" ? cx_text(g)
                                                              : ucx::to_json(g) + "\n");
                }
            } else if (!log_path.empty()) {
                auto log = log_opts.read(log_path);
                auto variants = ucx::extract_variants(log);
                auto parts = ucx::partition(log);
                if (format == "text") {
                    std::ostringstream out;
                    out << "traces: " << log.size() << "\nevents: " << log.event_count()
                        << "\nactivities: " << log.alphabet().size() << "\nvariants: " << variants.size()
                        << "\npartitions: " << parts.size() << '\n';
                    write_output(out_path, out.str());
                } else {
                    json j{{"traces", log.size()},         {"events", log.event_count()},
                           {"activities", log.alphabet()}, {"variants", json::array()},
                           {"partitions", json::array()}};
                    for (const auto& v : variants)
                        j["variants"].push_back({{"sequence", v.sequence}, {"cases", v.case_ids}});
                    for (const auto& p : parts)
                        j["partitions"].push_back({{"activities", p.activity_set}, {"cases", p.case_ids}});
                    write_output(out_path, j.dump(2) + "\n");
                }
            } else if (!synthetic_path.empty()) {
                auto spec = ucx::synthetic_spec_from_json(read_file(synthetic_path));
                if (exp->count("--seed")) spec.seed = seed;
                std::ostringstream out;
                ucx::serialize_csv(out, ucx::gen_synthetic_log(spec));
                write_output(out_path, out.str());
            } else {
                throw CLI::RequiredError("--graph, --log or --synthetic");
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ucx::InvariantError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const ucx::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return 0;
}
