#ifndef SVMAP_HARNESS_HPP
#define SVMAP_HARNESS_HPP

#include "svmap/distributed.hpp"
#include "svmap/evaluation.hpp"

namespace svmap {

// k-fold cross validation of the distributed trainer. Each fold trains on
// the k-1 complement and is scored by hinge risk on its test fold at every
// iteration, using that iteration's selected hypothesis; folds that stop
// early carry their final hypothesis forward so every report has
// max_iterations rows. parallel_folds trades clean timing for wall time;
// results are identical either way.
CvReport cross_validate(const Dataset& dataset, const DistributedConfig& config, std::size_t k,
                        bool parallel_folds = false);

// Full training wall time per node count, averaged over `repeats` runs;
// speedup = T(L=1) / T(L). node_sizes must include 1.
SpeedupReport speedup_benchmark(const Dataset& dataset, std::vector<std::size_t> node_sizes,
                                int repeats, const DistributedConfig& config);

}  // namespace svmap

#endif
