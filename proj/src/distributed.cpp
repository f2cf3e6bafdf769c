#include "svmap/distributed.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "svmap/errors.hpp"
#include "svmap/evaluation.hpp"
#include "svmap/log.hpp"
#include "svmap/textio.hpp"

namespace svmap {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned effective_workers(unsigned workers) {
    if (workers != 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

std::vector<int> GlobalSvStore::ids() const {
    std::vector<int> out;
    out.reserve(svs.size());
    for (const auto& [id, sv] : svs) out.push_back(id);
    return out;
}

bool GlobalSvStore::contains_ids(const GlobalSvStore& older) const {
    for (const auto& [id, sv] : older.svs)
        if (!svs.count(id)) return false;
    return true;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::risk_converged: return "risk_converged";
        case StopReason::sv_fixed_point: return "sv_fixed_point";
        case StopReason::max_iterations: return "max_iterations";
    }
    return "unknown";
}

namespace {

MapTaskResult run_task(const Dataset& partition, const GlobalSvStore& global_svs,
                       const TrainConfig& config, const std::map<int, double>* warm) {
    if (partition.empty()) throw TrainingError("map_task on an empty partition");

    Dataset merged;
    merged.dim = partition.dim;
    merged.samples = partition.samples;
    std::unordered_set<int> seen;
    seen.reserve(partition.size());
    for (const Sample& s : partition.samples) seen.insert(s.id);
    for (const auto& [id, sv] : global_svs.svs)
        if (!seen.count(id)) merged.samples.push_back(sv);

    auto counts = merged.class_counts();
    MapTaskResult result;
    if (counts.positive == 0 || counts.negative == 0) {
        result.skipped = true;
        return result;
    }
    result.model = (warm == nullptr || warm->empty()) ? train_svm(merged, config)
                                                      : train_svm_warm(merged, config, *warm);
    result.svs = extract_svs(result.model);
    return result;
}

}  // namespace

MapTaskResult map_task(const Dataset& partition, const GlobalSvStore& global_svs,
                       const TrainConfig& config) {
    return run_task(partition, global_svs, config, nullptr);
}

GlobalSvStore reduce_merge(const GlobalSvStore& store,
                           const std::vector<std::vector<Sample>>& sv_lists) {
    GlobalSvStore out = store;
    out.iteration = store.iteration + 1;
    for (const auto& list : sv_lists)
        for (const Sample& sv : list) out.svs.emplace(sv.id, sv);
    return out;
}

Selection select_hypothesis(const std::vector<const SvmModel*>& models,
                            const Dataset& full_training_set) {
    Selection best;
    for (std::size_t node = 0; node < models.size(); ++node) {
        if (models[node] == nullptr) continue;
        double risk = empirical_risk(*models[node], full_training_set);
        if (best.node < 0 || risk < best.risk) {
            best.node = static_cast<int>(node);
            best.risk = risk;
        }
    }
    if (best.node < 0) throw TrainingError("all nodes skipped, no hypothesis to select");
    return best;
}

std::vector<MapTaskResult> run_map_phase(const PartitionSet& partitions,
                                         const GlobalSvStore& store, const TrainConfig& config,
                                         unsigned workers,
                                         const std::vector<std::map<int, double>>* warm_state) {
    const std::size_t L = partitions.partitions.size();
    std::vector<MapTaskResult> results(L);
    std::vector<std::exception_ptr> failures(L);

    unsigned pool = std::min<unsigned>(effective_workers(workers), static_cast<unsigned>(L));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t l = next.fetch_add(1);
            if (l >= L) return;
            try {
                const std::map<int, double>* warm =
                    warm_state == nullptr ? nullptr : &(*warm_state)[l];
                results[l] = run_task(partitions.partitions[l], store, config, warm);
            } catch (...) {
                failures[l] = std::current_exception();
            }
        }
    };

    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned w = 0; w < pool; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    for (std::size_t l = 0; l < L; ++l)
        if (failures[l]) std::rethrow_exception(failures[l]);
    return results;
}

TrainRun train_distributed(const Dataset& dataset, const DistributedConfig& config) {
    if (config.max_iterations < 1) throw UsageError("max_iterations must be >= 1");
    if (config.conv_tol < 0.0) throw UsageError("conv_tol must be nonnegative");
    auto counts = dataset.class_counts();
    if (counts.positive == 0 || counts.negative == 0)
        throw TrainingError("single-class dataset, cannot train");

    PartitionSet parts = stratified_partition(dataset, config.L, config.seed);

    TrainRun run;
    GlobalSvStore store;
    double prev_risk = 0.0;
    bool have_prev_risk = false;
    std::vector<std::map<int, double>> warm_state(config.L);

    for (int t = 1; t <= config.max_iterations; ++t) {
        auto map_start = std::chrono::steady_clock::now();
        std::vector<MapTaskResult> outcomes =
            run_map_phase(parts, store, config.train, config.workers,
                          config.warm_start ? &warm_state : nullptr);
        double map_wall = seconds_since(map_start);

        if (config.warm_start) {
            for (std::size_t l = 0; l < outcomes.size(); ++l) {
                if (outcomes[l].skipped) continue;
                warm_state[l].clear();
                const SvmModel& m = outcomes[l].model;
                for (std::size_t s = 0; s < m.support_vectors.size(); ++s)
                    warm_state[l][m.support_vectors[s].id] = m.alphas[s];
            }
        }

        auto reduce_start = std::chrono::steady_clock::now();
        std::vector<std::vector<Sample>> sv_lists;
        sv_lists.reserve(outcomes.size());
        for (const MapTaskResult& r : outcomes) sv_lists.push_back(r.svs);
        GlobalSvStore next_store = reduce_merge(store, sv_lists);

        std::vector<const SvmModel*> models;
        models.reserve(outcomes.size());
        for (const MapTaskResult& r : outcomes) models.push_back(r.skipped ? nullptr : &r.model);
        Selection sel = select_hypothesis(models, dataset);
        double reduce_wall = seconds_since(reduce_start);

        IterationRecord rec;
        rec.t = t;
        for (const MapTaskResult& r : outcomes) rec.per_node_sv_counts.push_back(r.svs.size());
        rec.global_sv_count = next_store.size();
        rec.best_risk = sel.risk;
        rec.best_node = sel.node;
        rec.map_wall_s = map_wall;
        rec.reduce_wall_s = reduce_wall;
        for (const MapTaskResult& r : outcomes)
            if (!r.skipped && !r.model.converged) rec.any_node_unconverged = true;
        rec.global_sv_ids = next_store.ids();
        rec.selected_model = outcomes[static_cast<std::size_t>(sel.node)].model;

        log_info("iter %d: best_node=%d risk=%.6g global_svs=%zu map=%.2fs", t, sel.node,
                 sel.risk, next_store.size(), map_wall);

        bool risk_stable = have_prev_risk && std::abs(sel.risk - prev_risk) <= config.conv_tol;
        bool store_fixed = next_store.size() == store.size();
        prev_risk = sel.risk;
        have_prev_risk = true;
        store = std::move(next_store);
        run.history.push_back(std::move(rec));

        if (risk_stable) {
            run.stop_reason = StopReason::risk_converged;
            break;
        }
        if (store_fixed) {
            run.stop_reason = StopReason::sv_fixed_point;
            break;
        }
        run.stop_reason = StopReason::max_iterations;
    }

    run.final_model = run.history.back().selected_model;
    if (config.retrain_on_global_svs) {
        Dataset sv_set;
        sv_set.dim = dataset.dim;
        for (const auto& [id, sv] : store.svs) sv_set.samples.push_back(sv);
        run.final_model = train_svm(sv_set, config.train);
    }
    return run;
}

void write_history_jsonl(const RunHistory& history, std::ostream& out) {
    for (const IterationRecord& rec : history) {
        nlohmann::json j;
        j["t"] = rec.t;
        j["per_node_sv_counts"] = rec.per_node_sv_counts;
        j["global_sv_count"] = rec.global_sv_count;
        j["best_risk"] = rec.best_risk;
        j["best_node"] = rec.best_node;
        j["map_wall_s"] = rec.map_wall_s;
        j["reduce_wall_s"] = rec.reduce_wall_s;
        j["any_node_unconverged"] = rec.any_node_unconverged;
        out << j.dump() << '\n';
    }
}

void write_history_csv(const RunHistory& history, std::ostream& out) {
    out << "iter,loss_mean,loss_mean_plus_sigma,loss_mean_minus_sigma,mean_sv_count\n";
    for (const IterationRecord& rec : history) {
        std::string risk = fmt_g10(rec.best_risk);
        out << rec.t << ',' << risk << ',' << risk << ',' << risk << ','
            << rec.global_sv_count << '\n';
    }
}

}  // namespace svmap
