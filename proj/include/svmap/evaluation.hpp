#ifndef SVMAP_EVALUATION_HPP
#define SVMAP_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "svmap/dataset.hpp"
#include "svmap/solver.hpp"

namespace svmap {

// max(0, 1 - y*f_x). y must be -1 or +1.
double hinge_loss(double f_x, int y);

// Mean hinge loss of the model's decision values over the dataset.
double empirical_risk(const SvmModel& m, const Dataset& d);

// Fraction of samples with predict == label.
double accuracy(const SvmModel& m, const Dataset& d);

struct CvRow {
    int t = 0;
    double loss_mean = 0.0;
    double loss_mean_plus_sigma = 0.0;
    double loss_mean_minus_sigma = 0.0;  // clamped at 0
    double mean_sv_count = 0.0;
};

struct CvReport {
    std::vector<CvRow> per_iteration;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    // Diagnostics, not part of the CSV: per fold, the global SV id snapshot
    // after each real (non-carried) iteration of that fold's run.
    std::vector<std::vector<std::vector<int>>> fold_global_sv_ids;
};

struct SpeedupRow {
    std::size_t L = 0;
    double wall_time_s = 0.0;
    double speedup = 0.0;  // T(L=1) / T(L)
};

struct SpeedupReport {
    std::vector<SpeedupRow> rows;
    int repeats = 0;
};

// Header: iter,loss_mean,loss_mean_plus_sigma,loss_mean_minus_sigma,mean_sv_count
void write_cv_csv(const CvReport& r, std::ostream& out);
// Header: L,wall_time_s,speedup
void write_speedup_csv(const SpeedupReport& r, std::ostream& out);

}  // namespace svmap

#endif
