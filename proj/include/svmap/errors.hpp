#ifndef SVMAP_ERRORS_HPP
#define SVMAP_ERRORS_HPP

#include <stdexcept>

namespace svmap {

// Error categories map 1:1 onto CLI exit codes:
//   0 success, 1 usage error, 2 data error, 3 training failure.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace svmap

#endif
