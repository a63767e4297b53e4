#pragma once

// Event-log ingestion (CSV and a minimal XES subset), variants and
// activity-set partitions.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ucx {

/// Milliseconds since the Unix epoch (UTC).
using Millis = std::int64_t;

/// Ordered sequence of activity names.
using ActivitySequence = std::vector<std::string>;

struct ActivityEvent {
    std::string case_id;
    std::string name;
    Millis timestamp = 0;
    std::vector<std::pair<std::string, std::string>> payload;

    bool operator==(const ActivityEvent&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<ActivityEvent> events;

    ActivitySequence sequence() const;
    std::set<std::string> activity_set() const;
    /// True when some activity occurs more than once (a loop).
    bool has_repeats() const;

    bool operator==(const Trace&) const = default;
};

/// A finite set of traces with unique case ids. Events inside every trace are
/// sorted by timestamp (stable, so ties keep input order).
class EventLog {
  public:
    EventLog() = default;
    /// Validates case-id uniqueness and event names, and sorts events.
    explicit EventLog(std::vector<Trace> traces);

    const std::vector<Trace>& traces() const noexcept { return traces_; }
    const std::set<std::string>& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return traces_.size(); }
    bool empty() const noexcept { return traces_.empty(); }
    std::size_t event_count() const noexcept;
    const Trace* find(std::string_view case_id) const;

  private:
    std::vector<Trace> traces_;
    std::set<std::string> alphabet_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class TimestampFormat {
    automatic,      // numeric -> epoch seconds, anything else -> ISO-8601
    iso8601,
    epoch_seconds,  // may be fractional
    epoch_millis,
};

struct CsvSchema {
    std::string case_column = "case:concept:name";
    std::string activity_column = "concept:name";
    std::string timestamp_column = "time:timestamp";
    /// When non-empty, the activity identity is the '|'-joined values of these
    /// columns instead of `activity_column`.
    std::vector<std::string> activity_key_columns;
    TimestampFormat timestamp_format = TimestampFormat::automatic;
    char delimiter = ',';
};

/// Parses a CSV event log with a mandatory header row. Columns other than the
/// case, activity and timestamp columns become event payload (empty cells are
/// skipped). Empty input yields an empty log.
EventLog parse_csv(std::istream& in, const CsvSchema& schema = {});

/// Writes `log` in the layout accepted by parse_csv. Timestamps are emitted as
/// ISO-8601 for the iso8601/automatic formats and as epoch numbers otherwise.
void serialize_csv(std::ostream& out, const EventLog& log, const CsvSchema& schema = {});

struct XesOptions {
    /// Keep only events whose lifecycle:transition equals this value
    /// (case-insensitive). Events without a lifecycle attribute are always kept.
    /// Empty string keeps everything.
    std::string lifecycle = "complete";
};

EventLog parse_xes(std::istream& in, const XesOptions& options = {});

/// Reads a log from disk, choosing the parser by extension (.csv, .xes,
/// .xes.gz).
EventLog read_log(const std::string& path, const CsvSchema& schema = {},
                  const XesOptions& xes = {});

Millis parse_iso8601(std::string_view text);
std::string format_iso8601(Millis ms);
Millis parse_timestamp(std::string_view text, TimestampFormat format);

struct Variant {
    ActivitySequence sequence;
    std::vector<std::string> case_ids;  // in log order

    bool operator==(const Variant&) const = default;
};

/// Groups traces by activity sequence; output ordered lexicographically by
/// sequence.
std::vector<Variant> extract_variants(const EventLog& log);

struct Partition {
    std::vector<std::string> activity_set;  // sorted
    std::vector<std::string> case_ids;      // in log order
    std::vector<Trace> traces;              // parallel to case_ids

    bool operator==(const Partition&) const = default;
};

/// Splits the selected traces into partitions. By default every variant is
/// selected and traces are grouped by their unordered activity set (ordered
/// lexicographically by that set). With `split_by_variants` every selected
/// variant becomes its own partition, in variant order.
std::vector<Partition> partition(const EventLog& log,
                                 const std::optional<std::vector<ActivitySequence>>& selected = std::nullopt,
                                 bool split_by_variants = false);

enum class RepeatPolicy { first, last, drop_trace };

RepeatPolicy parse_repeat_policy(std::string_view text);

/// Rectangular per-partition table: rows are traces, columns are activities.
struct TimestampTable {
    std::vector<std::string> activities;
    std::vector<std::string> case_ids;
    std::vector<Millis> values;  // row-major, case_ids.size() x activities.size()
    /// Case ids whose trace repeated an activity (kept or dropped per policy).
    std::vector<std::string> repeated;

    std::size_t rows() const noexcept { return case_ids.size(); }
    std::size_t cols() const noexcept { return activities.size(); }
    Millis at(std::size_t row, std::size_t col) const { return values[row * activities.size() + col]; }
};

TimestampTable timestamp_table(const Partition& partition, RepeatPolicy policy = RepeatPolicy::first);

}  // namespace ucx
