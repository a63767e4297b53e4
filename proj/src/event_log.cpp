#include "ucx/event_log.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "ucx/errors.hpp"
#include "xml_reader.hpp"

namespace ucx {

// ---------------------------------------------------------------------------
// Trace / EventLog

ActivitySequence Trace::sequence() const {
    ActivitySequence seq;
    seq.reserve(events.size());
    for (const auto& e : events) seq.push_back(e.name);
    return seq;
}

std::set<std::string> Trace::activity_set() const {
    std::set<std::string> s;
    for (const auto& e : events) s.insert(e.name);
    return s;
}

bool Trace::has_repeats() const { return activity_set().size() != events.size(); }

EventLog::EventLog(std::vector<Trace> traces) : traces_(std::move(traces)) {
    index_.reserve(traces_.size());
    for (std::size_t i = 0; i < traces_.size(); ++i) {
        auto& t = traces_[i];
        if (!index_.emplace(t.case_id, i).second) throw DataError("duplicate case id '" + t.case_id + "'");
        for (auto& e : t.events) {
            if (e.name.empty()) throw DataError("empty activity name in case '" + t.case_id + "'");
            if (e.case_id != t.case_id)
                throw DataError("event of case '" + e.case_id + "' filed under case '" + t.case_id + "'");
            alphabet_.insert(e.name);
        }
        std::stable_sort(t.events.begin(), t.events.end(),
                         [](const ActivityEvent& a, const ActivityEvent& b) { return a.timestamp < b.timestamp; });
    }
}

std::size_t EventLog::event_count() const noexcept {
    std::size_t n = 0;
    for (const auto& t : traces_) n += t.events.size();
    return n;
}

const Trace* EventLog::find(std::string_view case_id) const {
    auto it = index_.find(std::string(case_id));
    return it == index_.end() ? nullptr : &traces_[it->second];
}

namespace {

/// Accumulates events per case in first-appearance order.
class LogBuilder {
  public:
    void add(ActivityEvent e) {
        auto [it, inserted] = slot_.emplace(e.case_id, traces_.size());
        if (inserted) traces_.push_back(Trace{e.case_id, {}});
        traces_[it->second].events.push_back(std::move(e));
    }
    void add_trace(Trace t) {
        if (!slot_.emplace(t.case_id, traces_.size()).second)
            throw DataError("duplicate case id '" + t.case_id + "'");
        traces_.push_back(std::move(t));
    }
    EventLog finish() && { return EventLog(std::move(traces_)); }

  private:
    std::vector<Trace> traces_;
    std::unordered_map<std::string, std::size_t> slot_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool looks_numeric(std::string_view s) {
    if (s.empty()) return false;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

int read_digits(std::string_view s, std::size_t& pos, std::size_t count) {
    if (pos + count > s.size()) throw ParseError("truncated timestamp '" + std::string(s) + "'");
    int v = 0;
    for (std::size_t i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') throw ParseError("bad digit in timestamp '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
    }
    pos += count;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Timestamps

Millis parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    std::string_view s = trim(text);
    std::size_t pos = 0;
    int y = read_digits(s, pos, 4);
    if (pos >= s.size() || s[pos] != '-') throw ParseError("bad ISO-8601 date '" + std::string(s) + "'");
    ++pos;
    int mo = read_digits(s, pos, 2);
    if (pos >= s.size() || s[pos] != '-') throw ParseError("bad ISO-8601 date '" + std::string(s) + "'");
    ++pos;
    int d = read_digits(s, pos, 2);
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("invalid calendar date '" + std::string(s) + "'");

    Millis ms = duration_cast<milliseconds>(sys_days{ymd}.time_since_epoch()).count();
    if (pos == s.size()) return ms;

    if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') throw ParseError("bad ISO-8601 separator in '" + std::string(s) + "'");
    ++pos;
    int hh = read_digits(s, pos, 2);
    if (pos >= s.size() || s[pos] != ':') throw ParseError("bad ISO-8601 time '" + std::string(s) + "'");
    ++pos;
    int mi = read_digits(s, pos, 2);
    int ss = 0;
    double frac = 0.0;
    if (pos < s.size() && s[pos] == ':') {
        ++pos;
        ss = read_digits(s, pos, 2);
        if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
            ++pos;
            double scale = 0.1;
            std::size_t start = pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                frac += (s[pos] - '0') * scale;
                scale /= 10;
                ++pos;
            }
            if (start == pos) throw ParseError("empty fraction in '" + std::string(s) + "'");
        }
    }
    if (hh > 23 || mi > 59 || ss > 60) throw ParseError("time out of range in '" + std::string(s) + "'");
    ms += ((hh * 60LL + mi) * 60LL + ss) * 1000LL + static_cast<Millis>(std::llround(frac * 1000.0));

    if (pos == s.size()) return ms;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        if (pos + 1 != s.size()) throw ParseError("trailing characters in '" + std::string(s) + "'");
        return ms;
    }
    if (s[pos] != '+' && s[pos] != '-') throw ParseError("bad zone designator in '" + std::string(s) + "'");
    int sign = s[pos] == '+' ? 1 : -1;
    ++pos;
    int oh = read_digits(s, pos, 2);
    int om = 0;
    if (pos < s.size()) {
        if (s[pos] == ':') ++pos;
        om = read_digits(s, pos, 2);
    }
    if (pos != s.size()) throw ParseError("trailing characters in '" + std::string(s) + "'");
    return ms - sign * (oh * 60LL + om) * 60'000LL;
}

std::string format_iso8601(Millis ms) {
    using namespace std::chrono;
    auto tp = sys_time<milliseconds>{milliseconds{ms}};
    auto days = floor<std::chrono::days>(tp);
    year_month_day ymd{days};
    auto rem = (tp - days).count();
    long long h = rem / 3'600'000, m = rem / 60'000 % 60, sec = rem / 1000 % 60, milli = rem % 1000;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, sec, milli);
    return buf;
}

Millis parse_timestamp(std::string_view text, TimestampFormat format) {
    auto s = trim(text);
    if (s.empty()) throw ParseError("empty timestamp");
    if (format == TimestampFormat::automatic)
        format = looks_numeric(s) ? TimestampFormat::epoch_seconds : TimestampFormat::iso8601;
    switch (format) {
        case TimestampFormat::iso8601:
            return parse_iso8601(s);
        case TimestampFormat::epoch_seconds: {
            double v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
                throw ParseError("unparseable epoch timestamp '" + std::string(s) + "'");
            return static_cast<Millis>(std::llround(v * 1000.0));
        }
        case TimestampFormat::epoch_millis: {
            Millis v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size())
                throw ParseError("unparseable epoch-millisecond timestamp '" + std::string(s) + "'");
            return v;
        }
        case TimestampFormat::automatic:
            break;
    }
    throw ParseError("unsupported timestamp format");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

/// RFC 4180 record reader. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields, std::size_t& line,
                 std::size_t& record_line) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    record_line = line;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (true) {
        if (quoted) {
            if (c == EOF) throw ParseError("unterminated quoted field", record_line);
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n' || c == EOF) {
            if (c == '\n') ++line;
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return true;
        } else {
            if (was_quoted && c != '\r') throw ParseError("characters after closing quote", line);
            field.push_back(static_cast<char>(c));
        }
        c = in.get();
    }
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && trim(fields[0]).empty();
}

std::string csv_escape(const std::string& s, char delim) {
    if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

EventLog parse_csv(std::istream& in, const CsvSchema& schema) {
    std::vector<std::string> fields;
    std::size_t line = 1, record_line = 1;
    bool have_header = false;
    while (!have_header) {
        if (!read_record(in, schema.delimiter, fields, line, record_line)) return EventLog{};
        have_header = !blank(fields);
    }
    std::vector<std::string> header = fields;
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
    for (auto& h : header) h = std::string(trim(h));

    auto column = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParseError("missing column '" + name + "' in header", record_line);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t case_col = column(schema.case_column);
    const std::size_t ts_col = column(schema.timestamp_column);
    std::vector<std::size_t> key_cols;
    if (schema.activity_key_columns.empty()) {
        key_cols.push_back(column(schema.activity_column));
    } else {
        for (const auto& k : schema.activity_key_columns) key_cols.push_back(column(k));
    }
    std::vector<std::size_t> payload_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == case_col || i == ts_col || std::find(key_cols.begin(), key_cols.end(), i) != key_cols.end())
            continue;
        payload_cols.push_back(i);
    }

    LogBuilder builder;
    while (read_record(in, schema.delimiter, fields, line, record_line)) {
        if (blank(fields)) continue;
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             record_line);
        ActivityEvent e;
        e.case_id = fields[case_col];
        if (e.case_id.empty()) throw ParseError("empty case id", record_line);
        for (std::size_t k = 0; k < key_cols.size(); ++k) {
            if (k) e.name += '|';
            e.name += fields[key_cols[k]];
        }
        if (e.name.empty()) throw ParseError("empty activity name", record_line);
        try {
            e.timestamp = parse_timestamp(fields[ts_col], schema.timestamp_format);
        } catch (const ParseError& err) {
            throw ParseError(err.what(), record_line);
        }
        for (auto i : payload_cols) {
            if (!fields[i].empty()) e.payload.emplace_back(header[i], fields[i]);
        }
        builder.add(std::move(e));
    }
    return std::move(builder).finish();
}

void serialize_csv(std::ostream& out, const EventLog& log, const CsvSchema& schema) {
    const char d = schema.delimiter;
    std::vector<std::string> payload_keys;
    std::set<std::string> seen;
    for (const auto& t : log.traces()) {
        for (const auto& e : t.events) {
            for (const auto& [k, v] : e.payload) {
                if (seen.insert(k).second) payload_keys.push_back(k);
            }
        }
    }
    out << csv_escape(schema.case_column, d) << d << csv_escape(schema.activity_column, d) << d
        << csv_escape(schema.timestamp_column, d);
    for (const auto& k : payload_keys) out << d << csv_escape(k, d);
    out << '\n';
    for (const auto& t : log.traces()) {
        for (const auto& e : t.events) {
            out << csv_escape(e.case_id, d) << d << csv_escape(e.name, d) << d;
            if (schema.timestamp_format == TimestampFormat::iso8601 ||
                schema.timestamp_format == TimestampFormat::automatic)
                out << format_iso8601(e.timestamp);
            else if (schema.timestamp_format == TimestampFormat::epoch_seconds) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(e.timestamp) / 1000.0);
                out << buf;
            }
            else
                out << e.timestamp;
            for (const auto& k : payload_keys) {
                out << d;
                for (const auto& [pk, pv] : e.payload) {
                    if (pk == k) {
                        out << csv_escape(pv, d);
                        break;
                    }
                }
            }
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// XES

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_attribute_tag(std::string_view name) {
    return name == "string" || name == "date" || name == "int" || name == "float" || name == "boolean" ||
           name == "id" || name == "list" || name == "container";
}

struct PendingEvent {
    std::optional<std::string> name;
    std::optional<Millis> timestamp;
    std::optional<std::string> lifecycle;
    std::vector<std::pair<std::string, std::string>> payload;
};

}  // namespace

EventLog parse_xes(std::istream& in, const XesOptions& options) {
    std::string doc{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (trim(doc).empty()) return EventLog{};
    detail::XmlReader reader(std::move(doc));

    LogBuilder builder;
    std::size_t trace_index = 0;
    std::optional<std::string> case_id;
    std::vector<PendingEvent> events;
    std::optional<PendingEvent> current;
    std::size_t trace_depth = 0, event_depth = 0;
    bool in_trace = false;
    std::size_t trace_line = 0;

    auto flush_trace = [&]() {
        if (!case_id) throw ParseError("trace #" + std::to_string(trace_index) + " has no concept:name", trace_line);
        Trace t{*case_id, {}};
        for (std::size_t i = 0; i < events.size(); ++i) {
            auto& pe = events[i];
            if (!pe.name)
                throw ParseError("trace '" + *case_id + "' event #" + std::to_string(i) + " has no concept:name");
            if (!pe.timestamp)
                throw ParseError("trace '" + *case_id + "' event #" + std::to_string(i) + " has no time:timestamp");
            if (!options.lifecycle.empty() && pe.lifecycle && !iequals(*pe.lifecycle, options.lifecycle)) continue;
            t.events.push_back(ActivityEvent{*case_id, std::move(*pe.name), *pe.timestamp, std::move(pe.payload)});
        }
        if (!t.events.empty()) builder.add_trace(std::move(t));
    };

    while (true) {
        auto node = reader.next();
        if (node.kind == detail::XmlNode::Kind::eof) break;
        if (node.kind == detail::XmlNode::Kind::start) {
            const std::size_t depth = reader.depth() + (node.self_closing ? 1 : 0);
            if (node.name == "trace" && !in_trace) {
                in_trace = true;
                trace_depth = depth;
                trace_line = node.line;
                case_id.reset();
                events.clear();
                if (node.self_closing) {
                    in_trace = false;
                    flush_trace();
                    ++trace_index;
                }
                continue;
            }
            if (!in_trace) continue;
            if (node.name == "event" && !current && depth == trace_depth + 1) {
                current.emplace();
                event_depth = depth;
                if (node.self_closing) {
                    events.push_back(std::move(*current));
                    current.reset();
                }
                continue;
            }
            if (!is_attribute_tag(node.name)) continue;
            const std::string* key = node.attribute("key");
            const std::string* value = node.attribute("value");
            if (!key) continue;
            if (current && depth == event_depth + 1) {
                if (*key == "concept:name" && value) {
                    current->name = *value;
                } else if (*key == "time:timestamp" && value) {
                    try {
                        current->timestamp = parse_iso8601(*value);
                    } catch (const ParseError& err) {
                        throw ParseError(std::string("event #") + std::to_string(events.size()) + ": " + err.what(),
                                         node.line);
                    }
                } else if (*key == "lifecycle:transition" && value) {
                    current->lifecycle = *value;
                    current->payload.emplace_back(*key, *value);
                } else if (value) {
                    current->payload.emplace_back(*key, *value);
                }
            } else if (!current && depth == trace_depth + 1) {
                if (*key == "concept:name" && value) case_id = *value;
            }
        } else {  // end tag
            const std::size_t depth = reader.depth() + 1;
            if (current && node.name == "event" && depth == event_depth) {
                events.push_back(std::move(*current));
                current.reset();
            } else if (in_trace && node.name == "trace" && depth == trace_depth) {
                in_trace = false;
                flush_trace();
                ++trace_index;
            }
        }
    }
    return std::move(builder).finish();
}

namespace {

std::string read_file(const std::string& path) {
    bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (!gz) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot open '" + path + "'");
        return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    }
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw DataError("cannot open '" + path + "'");
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    int err = 0;
    const char* msg = gzerror(f, &err);
    std::string message = msg ? msg : "";
    gzclose(f);
    if (n < 0 || (err != Z_OK && err != Z_STREAM_END)) throw ParseError("gzip error in '" + path + "': " + message);
    return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && iequals(std::string_view(s).substr(s.size() - suffix.size()), suffix);
}

}  // namespace

EventLog read_log(const std::string& path, const CsvSchema& schema, const XesOptions& xes) {
    std::istringstream in(read_file(path));
    if (ends_with(path, ".xes") || ends_with(path, ".xes.gz") || ends_with(path, ".xml")) return parse_xes(in, xes);
    return parse_csv(in, schema);
}

// ---------------------------------------------------------------------------
// Variants and partitions

std::vector<Variant> extract_variants(const EventLog& log) {
    std::map<ActivitySequence, std::vector<std::string>> groups;
    for (const auto& t : log.traces()) groups[t.sequence()].push_back(t.case_id);
    std::vector<Variant> out;
    out.reserve(groups.size());
    for (auto& [seq, ids] : groups) out.push_back(Variant{seq, std::move(ids)});
    return out;
}

std::vector<Partition> partition(const EventLog& log, const std::optional<std::vector<ActivitySequence>>& selected,
                                 bool split_by_variants) {
    auto variants = extract_variants(log);
    std::vector<const Variant*> chosen;
    if (!selected) {
        for (const auto& v : variants) chosen.push_back(&v);
    } else {
        std::set<ActivitySequence> wanted(selected->begin(), selected->end());
        for (const auto& seq : wanted) {
            auto it = std::lower_bound(variants.begin(), variants.end(), seq,
                                       [](const Variant& v, const ActivitySequence& s) { return v.sequence < s; });
            if (it == variants.end() || it->sequence != seq) {
                std::string shown;
                for (std::size_t i = 0; i < seq.size(); ++i) shown += (i ? "," : "") + seq[i];
                throw DataError("selected variant <" + shown + "> does not occur in the log");
            }
            chosen.push_back(&*it);
        }
    }

    auto make = [&](std::vector<std::string> activities, const std::vector<std::string>& ids) {
        Partition p;
        p.activity_set = std::move(activities);
        // Keep members in log order so downstream discovery sees a stable row order.
        std::vector<std::pair<std::size_t, const Trace*>> members;
        for (const auto& id : ids) {
            const Trace* t = log.find(id);
            members.emplace_back(static_cast<std::size_t>(t - log.traces().data()), t);
        }
        std::sort(members.begin(), members.end());
        for (auto& [idx, t] : members) {
            p.case_ids.push_back(t->case_id);
            p.traces.push_back(*t);
        }
        return p;
    };

    std::vector<Partition> out;
    if (split_by_variants) {
        for (const auto* v : chosen) {
            std::set<std::string> s(v->sequence.begin(), v->sequence.end());
            out.push_back(make({s.begin(), s.end()}, v->case_ids));
        }
        return out;
    }
    std::map<std::set<std::string>, std::vector<std::string>> groups;
    for (const auto* v : chosen) {
        auto& ids = groups[std::set<std::string>(v->sequence.begin(), v->sequence.end())];
        ids.insert(ids.end(), v->case_ids.begin(), v->case_ids.end());
    }
    for (auto& [set, ids] : groups) out.push_back(make({set.begin(), set.end()}, ids));
    return out;
}

RepeatPolicy parse_repeat_policy(std::string_view text) {
    if (text == "first") return RepeatPolicy::first;
    if (text == "last") return RepeatPolicy::last;
    if (text == "drop_trace" || text == "drop-trace") return RepeatPolicy::drop_trace;
    throw DataError("unknown repeat policy '" + std::string(text) + "' (first|last|drop_trace)");
}

TimestampTable timestamp_table(const Partition& partition, RepeatPolicy policy) {
    TimestampTable table;
    table.activities = partition.activity_set;
    const std::size_t cols = table.activities.size();
    std::unordered_map<std::string, std::size_t> col_of;
    for (std::size_t i = 0; i < cols; ++i) col_of.emplace(table.activities[i], i);

    std::vector<Millis> row(cols);
    std::vector<char> filled(cols);
    for (const auto& t : partition.traces) {
        std::fill(filled.begin(), filled.end(), 0);
        bool repeated = false;
        for (const auto& e : t.events) {
            auto it = col_of.find(e.name);
            if (it == col_of.end())
                throw InvariantError("activity '" + e.name + "' of case '" + t.case_id + "' outside partition set");
            auto c = it->second;
            if (filled[c]) {
                repeated = true;
                if (policy == RepeatPolicy::last) row[c] = e.timestamp;
            } else {
                row[c] = e.timestamp;
                filled[c] = 1;
            }
        }
        if (std::find(filled.begin(), filled.end(), 0) != filled.end())
            throw InvariantError("case '" + t.case_id + "' does not cover the partition activity set");
        if (repeated) {
            table.repeated.push_back(t.case_id);
            if (policy == RepeatPolicy::drop_trace) continue;
        }
        table.case_ids.push_back(t.case_id);
        table.values.insert(table.values.end(), row.begin(), row.end());
    }
    return table;
}

}  // namespace ucx
