#ifndef SVMAP_ORACLE_HPP
#define SVMAP_ORACLE_HPP

#include "svmap/dataset.hpp"
#include "svmap/solver.hpp"

namespace svmap {

// Reference dual solver: dense projected gradient with exact line search,
// run to ~1e-10 objective accuracy. Deliberately shares no code with the SMO
// path so the two can check each other. Test scale only: n <= 50.
SvmModel oracle_solve(const Dataset& d, const TrainConfig& config);

}  // namespace svmap

#endif
