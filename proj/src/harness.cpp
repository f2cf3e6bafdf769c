#include "svmap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "svmap/errors.hpp"
#include "svmap/log.hpp"

namespace svmap {

namespace {

struct FoldOutcome {
    std::vector<double> test_risk;     // one entry per iteration, carried forward
    std::vector<double> global_svs;    // same layout
    std::vector<std::vector<int>> sv_ids;  // real iterations only
};

FoldOutcome run_fold(const FoldPair& fold, const DistributedConfig& config) {
    auto counts = fold.train.class_counts();
    if (counts.positive == 0 || counts.negative == 0)
        throw DataError("cross-validation train fold is single-class; use more data or fewer folds");

    TrainRun run = train_distributed(fold.train, config);
    FoldOutcome out;
    for (int t = 1; t <= config.max_iterations; ++t) {
        const IterationRecord& rec =
            run.history[std::min<std::size_t>(static_cast<std::size_t>(t), run.history.size()) - 1];
        out.test_risk.push_back(empirical_risk(rec.selected_model, fold.test));
        out.global_svs.push_back(static_cast<double>(rec.global_sv_count));
    }
    for (const IterationRecord& rec : run.history) out.sv_ids.push_back(rec.global_sv_ids);
    return out;
}

}  // namespace

CvReport cross_validate(const Dataset& dataset, const DistributedConfig& config, std::size_t k,
                        bool parallel_folds) {
    if (k < 2) throw UsageError("cross-validation needs k >= 2");

    std::vector<FoldPair> folds = kfold_split(dataset, k, config.seed);
    std::vector<FoldOutcome> outcomes(k);

    if (parallel_folds) {
        DistributedConfig fold_config = config;
        fold_config.workers = 1;  // fold-level threads already fill the machine
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> failures(k);
        threads.reserve(k);
        for (std::size_t f = 0; f < k; ++f) {
            threads.emplace_back([&, f]() {
                try {
                    outcomes[f] = run_fold(folds[f], fold_config);
                } catch (...) {
                    failures[f] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (auto& e : failures)
            if (e) std::rethrow_exception(e);
    } else {
        for (std::size_t f = 0; f < k; ++f) {
            log_info("cv fold %zu/%zu", f + 1, k);
            outcomes[f] = run_fold(folds[f], config);
        }
    }

    CvReport report;
    report.folds = k;
    report.seed = config.seed;
    for (FoldOutcome& o : outcomes) report.fold_global_sv_ids.push_back(std::move(o.sv_ids));
    for (int t = 1; t <= config.max_iterations; ++t) {
        std::size_t idx = static_cast<std::size_t>(t) - 1;
        double mean = 0.0, sv_mean = 0.0;
        for (const FoldOutcome& o : outcomes) {
            mean += o.test_risk[idx];
            sv_mean += o.global_svs[idx];
        }
        mean /= static_cast<double>(k);
        sv_mean /= static_cast<double>(k);
        double var = 0.0;
        for (const FoldOutcome& o : outcomes) {
            double dev = o.test_risk[idx] - mean;
            var += dev * dev;
        }
        double sigma = std::sqrt(var / static_cast<double>(k - 1));

        CvRow row;
        row.t = t;
        row.loss_mean = mean;
        row.loss_mean_plus_sigma = mean + sigma;
        row.loss_mean_minus_sigma = std::max(0.0, mean - sigma);
        row.mean_sv_count = sv_mean;
        report.per_iteration.push_back(row);
    }
    return report;
}

SpeedupReport speedup_benchmark(const Dataset& dataset, std::vector<std::size_t> node_sizes,
                                int repeats, const DistributedConfig& config) {
    if (repeats < 1) throw UsageError("benchmark repeats must be >= 1");
    std::sort(node_sizes.begin(), node_sizes.end());
    node_sizes.erase(std::unique(node_sizes.begin(), node_sizes.end()), node_sizes.end());
    if (node_sizes.empty() || node_sizes.front() != 1)
        throw UsageError("benchmark node sizes must include 1 (the baseline)");

    SpeedupReport report;
    report.repeats = repeats;
    double baseline = 0.0;
    for (std::size_t L : node_sizes) {
        DistributedConfig run_config = config;
        run_config.L = L;
        double total = 0.0;
        for (int r = 0; r < repeats; ++r) {
            auto start = std::chrono::steady_clock::now();
            TrainRun run = train_distributed(dataset, run_config);
            total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            (void)run;
        }
        double mean = total / repeats;
        if (L == 1) baseline = mean;
        log_info("bench L=%zu mean wall %.3fs", L, mean);
        report.rows.push_back({L, mean, baseline / mean});
    }
    return report;
}

}  // namespace svmap
