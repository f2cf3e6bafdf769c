#ifndef SVMAP_DISTRIBUTED_HPP
#define SVMAP_DISTRIBUTED_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "svmap/dataset.hpp"
#include "svmap/solver.hpp"

namespace svmap {

// The growing global support-vector set, keyed by sample id. Ids originate
// from one master dataset, so id equality implies feature equality. The
// store only ever grows: store(t) is a superset of store(t-1).
struct GlobalSvStore {
    std::map<int, Sample> svs;
    int iteration = 0;

    std::size_t size() const { return svs.size(); }
    std::vector<int> ids() const;
    bool contains_ids(const GlobalSvStore& older) const;
};

struct MapTaskResult {
    SvmModel model;
    std::vector<Sample> svs;
    // Set when the merged training set was single-class; the node sits this
    // iteration out and contributes no SVs.
    bool skipped = false;
};

struct IterationRecord {
    int t = 0;
    std::vector<std::size_t> per_node_sv_counts;  // 0 for skipped nodes
    std::size_t global_sv_count = 0;
    double best_risk = 0.0;
    int best_node = -1;
    double map_wall_s = 0.0;
    double reduce_wall_s = 0.0;
    bool any_node_unconverged = false;
    std::vector<int> global_sv_ids;  // store snapshot after this reduce
    SvmModel selected_model;         // kept so per-iteration test loss is computable
};

using RunHistory = std::vector<IterationRecord>;

enum class StopReason { risk_converged, sv_fixed_point, max_iterations };
const char* stop_reason_name(StopReason r);

struct DistributedConfig {
    std::size_t L = 10;
    TrainConfig train;
    double conv_tol = 1e-6;
    int max_iterations = 10;
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 = hardware concurrency
    // Seed each node's solve from its previous iteration's alphas instead of
    // retraining from scratch. Off by default: the reference procedure
    // retrains per iteration. Purely a speedup when enabled; the same
    // KKT-tolerance optimum comes out either way.
    bool warm_start = false;
    // Alternative final model: one extra SVM trained on the global SV set
    // alone. Off by default; the selected node hypothesis is the deliverable.
    bool retrain_on_global_svs = false;
};

struct TrainRun {
    SvmModel final_model;
    RunHistory history;
    StopReason stop_reason = StopReason::max_iterations;
};

// Trains one node: the id-deduplicated union of its partition and the frozen
// store snapshot (partition samples first, then store samples by id).
MapTaskResult map_task(const Dataset& partition, const GlobalSvStore& global_svs,
                       const TrainConfig& config);

// New store = old store union all sv lists, deduplicated by id; lists are
// folded in node-index order.
GlobalSvStore reduce_merge(const GlobalSvStore& store,
                           const std::vector<std::vector<Sample>>& sv_lists);

struct Selection {
    int node = -1;
    double risk = 0.0;
};

// Model with minimal empirical risk over the full training set; ties broken
// by lowest node index. Null entries mark skipped nodes.
Selection select_hypothesis(const std::vector<const SvmModel*>& models,
                            const Dataset& full_training_set);

// Runs all map tasks over a worker pool. Results are positionally identical
// to sequential node-order execution regardless of the worker count. A
// throwing task fails the whole phase. warm_state, when given, carries each
// node's previous-iteration alphas (by sample id) into its next solve; node
// training sets only grow, so the seed is always feasible.
std::vector<MapTaskResult> run_map_phase(const PartitionSet& partitions,
                                         const GlobalSvStore& store, const TrainConfig& config,
                                         unsigned workers,
                                         const std::vector<std::map<int, double>>* warm_state = nullptr);

// The full iterative loop: map over L stratified partitions, reduce-merge
// SVs into the global store, select the lowest-risk node hypothesis, stop
// when that risk stabilizes (or the store reaches a fixed point, or
// max_iterations).
TrainRun train_distributed(const Dataset& dataset, const DistributedConfig& config);

// One IterationRecord per line (timings included, models and id snapshots
// omitted).
void write_history_jsonl(const RunHistory& history, std::ostream& out);
// Same column structure as the CV report; sigma is 0 for a single run.
void write_history_csv(const RunHistory& history, std::ostream& out);

}  // namespace svmap

#endif
