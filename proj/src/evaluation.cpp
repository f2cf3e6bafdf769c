#include "svmap/evaluation.hpp"

#include <algorithm>
#include <ostream>

#include "svmap/errors.hpp"
#include "svmap/textio.hpp"

namespace svmap {

double hinge_loss(double f_x, int y) {
    if (y != 1 && y != -1) throw DataError("hinge_loss label must be -1 or +1");
    return std::max(0.0, 1.0 - y * f_x);
}

double empirical_risk(const SvmModel& m, const Dataset& d) {
    if (d.empty()) throw DataError("empirical_risk of an empty dataset");
    double sum = 0.0;
    for (const Sample& s : d.samples) sum += hinge_loss(decision_value(m, s.features), s.label);
    return sum / static_cast<double>(d.size());
}

double accuracy(const SvmModel& m, const Dataset& d) {
    if (d.empty()) throw DataError("accuracy of an empty dataset");
    std::size_t hits = 0;
    for (const Sample& s : d.samples)
        if (predict(m, s.features) == s.label) ++hits;
    return static_cast<double>(hits) / static_cast<double>(d.size());
}

void write_cv_csv(const CvReport& r, std::ostream& out) {
    out << "iter,loss_mean,loss_mean_plus_sigma,loss_mean_minus_sigma,mean_sv_count\n";
    for (const CvRow& row : r.per_iteration) {
        out << row.t << ',' << fmt_g10(row.loss_mean) << ',' << fmt_g10(row.loss_mean_plus_sigma)
            << ',' << fmt_g10(row.loss_mean_minus_sigma) << ',' << fmt_g10(row.mean_sv_count)
            << '\n';
    }
}

void write_speedup_csv(const SpeedupReport& r, std::ostream& out) {
    out << "L,wall_time_s,speedup\n";
    for (const SpeedupRow& row : r.rows)
        out << row.L << ',' << fmt_g10(row.wall_time_s) << ',' << fmt_g10(row.speedup) << '\n';
}

}  // namespace svmap
