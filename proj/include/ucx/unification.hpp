#pragma once

// Unification of several causal execution graphs into one U-CX graph:
// family matrix construction, gateway classification and reconstruction.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucx/cx_model.hpp"
#include "ucx/discovery.hpp"
#include "ucx/event_log.hpp"

namespace ucx {

using NodeSet = std::set<std::string>;

/// Outer annotation of a family-matrix row. `and_` marks a row whose only
/// child set is a multi-node group (a pure AND gateway).
enum class RowAnnotation { none, and_, xor_, or_exhaustive, or_ };

std::string_view to_string(RowAnnotation a);

/// Classification of one Family (the distinct non-empty cells of a row).
struct FamilyClass {
    RowAnnotation annotation = RowAnnotation::none;
    /// Composite groups (size >= 2) promoted to single elements, sorted.
    std::vector<Element> promotions;
    /// Elements the Family is built from: promoted groups plus remaining
    /// single nodes, sorted.
    ElementSet atoms;
    /// Family rewritten over elements, sorted.
    Alternatives family;
};

FamilyClass classify_family(const std::vector<NodeSet>& family);

struct FamilyMatrix {
    Direction direction = Direction::split;
    std::vector<std::string> row_nodes;  // sorted; row r is row_nodes[r - 1]
    std::vector<std::string> columns;    // input graph ids
    /// cells[row][column]: children (split) or parents (join).
    std::vector<std::vector<NodeSet>> cells;
    std::vector<FamilyClass> rows;  // filled by classify()

    /// Distinct non-empty cells of a row (0-based index), sorted.
    std::vector<NodeSet> family(std::size_t row) const;
    /// 0-based index of a node; throws DataError when absent.
    std::size_t row_of(const std::string& node) const;
    bool classified() const { return rows.size() == row_nodes.size(); }
};

/// Gateway id -> alternatives of every non-exhaustive OR row.
using ORAlternativesMap = std::map<std::string, Alternatives>;

/// `column_ids` defaults to g1, g2, ...
FamilyMatrix build_matrix(const std::vector<CXGraph>& graphs, Direction direction,
                          std::vector<std::string> column_ids = {});

ORAlternativesMap classify(FamilyMatrix& matrix);

UCXGraph reconstruct(const FamilyMatrix& matrix, const ORAlternativesMap& alternatives, const NodeSet& input_nodes);

/// build_matrix -> classify -> reconstruct over pre-built graphs.
UCXGraph unify_graphs(const std::vector<CXGraph>& graphs, Direction direction = Direction::split);

struct UnifyConfig {
    DiscoveryConfig discovery;
    Direction direction = Direction::split;
    bool split_by_variants = false;
    /// Worker threads for per-partition discovery; 0 means hardware concurrency.
    std::size_t jobs = 1;
};

struct UnifyResult {
    UCXGraph graph;
    std::vector<Partition> partitions;
    std::vector<DiscoveryOutcome> outcomes;  // parallel to partitions
};

/// partition -> discover_cx per partition -> unify_graphs. Skipped partitions
/// contribute their nodes without edges. Throws DataError when no partition
/// has enough traces.
UnifyResult unify(const EventLog& log, const std::optional<std::vector<ActivitySequence>>& selected = std::nullopt,
                  const UnifyConfig& config = {});

}  // namespace ucx
