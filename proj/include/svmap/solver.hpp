#ifndef SVMAP_SOLVER_HPP
#define SVMAP_SOLVER_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svmap/dataset.hpp"
#include "svmap/kernel.hpp"

namespace svmap {

struct TrainConfig {
    double C = 1.0;
    KernelSpec kernel;
    double kkt_tol = 1e-3;
    // Pair-update cap; 0 means 10*n. Either way a hard cap of 10,000,000
    // updates applies.
    std::uint64_t max_solver_passes = 0;
    // Alphas at or below this threshold are treated as zero and not stored.
    double sv_epsilon = 1e-8;
    // Kernel row cache budget; 0 disables caching.
    std::size_t cache_mb = 100;
};

// Trained binary classifier. Only samples with alpha > sv_epsilon are kept.
struct SvmModel {
    std::vector<Sample> support_vectors;
    std::vector<double> alphas;  // parallel to support_vectors, 0 < a <= C
    double bias = 0.0;
    KernelSpec kernel;
    double objective = 0.0;  // dual F(alpha) at termination
    bool converged = true;
    // Explicit weight vector, materialized for the linear kernel only.
    std::vector<double> weights;
    // Min-max ranges when the model was trained on scaled data; applied to
    // inputs at prediction time.
    std::optional<ScaleRange> scale;

    std::size_t dim() const;
};

// Solves the soft-margin dual by SMO with maximal-violating-pair selection.
// Requires n >= 2, both classes present, labels in {-1,+1}. A run that hits
// the update cap returns best-so-far with converged=false.
SvmModel train_svm(const Dataset& d, const TrainConfig& config);

// Same solve, seeded from a previous solution's alphas keyed by sample id
// (unknown ids start at 0, values are clipped to [0, C]). Reaches the same
// KKT-tolerance optimum; iterative retraining on a grown set gets there much
// faster. Deterministic for fixed inputs.
SvmModel train_svm_warm(const Dataset& d, const TrainConfig& config,
                        const std::map<int, double>& warm_alphas);

// f(x) = sum_i alpha_i y_i K(x_i, x) + b. An empty model returns bias.
double decision_value(const SvmModel& m, std::span<const double> x);

// sign(decision_value); 0 maps to +1.
int predict(const SvmModel& m, std::span<const double> x);

// The stored support vectors, with original ids and labels.
std::vector<Sample> extract_svs(const SvmModel& m);

// Self-describing text format: kernel spec, bias, then one
// "<alpha> <label> <id> <sparse features>" line per SV. Round-trips exactly.
std::string serialize_model(const SvmModel& m);
SvmModel parse_model_stream(std::istream& in, const std::string& name);
SvmModel load_model(const std::string& path);
void save_model(const SvmModel& m, const std::string& path);

}  // namespace svmap

#endif
