#ifndef SVMAP_KERNEL_HPP
#define SVMAP_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "svmap/dataset.hpp"

namespace svmap {

enum class KernelKind { linear, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = 1.0;  // rbf only; ignored for linear
};

std::string kernel_name(KernelKind k);
KernelKind kernel_from_name(const std::string& name);

// linear: dot(a,b); rbf: exp(-gamma*||a-b||^2). Symmetric in (a,b).
double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

// Row i of the kernel matrix K over `d` (the solver applies the y_i y_j
// signs itself, Q_ij = y_i y_j K_ij).
std::vector<double> gram_row(const KernelSpec& spec, const Dataset& d, std::size_t i);

// LRU cache of kernel rows keyed by sample index, capacity in megabytes.
// Purely an accelerator: cached and uncached paths return identical values.
class GramCache {
  public:
    GramCache(KernelSpec spec, const Dataset& d, std::size_t capacity_mb);

    // Valid until the next row() call.
    std::span<const double> row(std::size_t i);

    std::uint64_t rows_computed() const { return rows_computed_; }
    std::uint64_t rows_requested() const { return rows_requested_; }

  private:
    KernelSpec spec_;
    const Dataset& data_;
    std::size_t capacity_rows_;
    std::list<std::pair<std::size_t, std::vector<double>>> lru_;  // front = most recent
    std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
    std::uint64_t rows_computed_ = 0;
    std::uint64_t rows_requested_ = 0;
};

}  // namespace svmap

#endif
