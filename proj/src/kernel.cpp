#include "svmap/kernel.hpp"

#include <cmath>

#include "svmap/errors.hpp"

namespace svmap {

std::string kernel_name(KernelKind k) {
    return k == KernelKind::linear ? "linear" : "rbf";
}

KernelKind kernel_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "rbf") return KernelKind::rbf;
    throw UsageError("unknown kernel '" + name + "' (expected linear or rbf)");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("kernel dimension mismatch: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    if (spec.kind == KernelKind::linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
        return dot;
    }
    double dist2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double delta = a[j] - b[j];
        dist2 += delta * delta;
    }
    return std::exp(-spec.gamma * dist2);
}

std::vector<double> gram_row(const KernelSpec& spec, const Dataset& d, std::size_t i) {
    if (i >= d.size())
        throw DataError("gram_row index " + std::to_string(i) + " out of range for n=" +
                        std::to_string(d.size()));
    std::vector<double> row(d.size());
    const auto& xi = d.samples[i].features;
    for (std::size_t j = 0; j < d.size(); ++j)
        row[j] = kernel_eval(spec, xi, d.samples[j].features);
    return row;
}

GramCache::GramCache(KernelSpec spec, const Dataset& d, std::size_t capacity_mb)
    : spec_(spec), data_(d) {
    std::size_t row_bytes = d.size() * sizeof(double);
    capacity_rows_ = row_bytes == 0 ? 0 : (capacity_mb * 1024 * 1024) / row_bytes;
}

std::span<const double> GramCache::row(std::size_t i) {
    ++rows_requested_;
    if (capacity_rows_ == 0) {
        // Cache disabled: recompute into a single scratch row.
        if (lru_.empty()) lru_.emplace_front(i, std::vector<double>{});
        lru_.front().first = i;
        lru_.front().second = gram_row(spec_, data_, i);
        ++rows_computed_;
        return lru_.front().second;
    }

    if (auto it = index_.find(i); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return lru_.front().second;
    }

    if (lru_.size() >= capacity_rows_) {
        index_.erase(lru_.back().first);
        lru_.pop_back();
    }
    lru_.emplace_front(i, gram_row(spec_, data_, i));
    ++rows_computed_;
    index_[i] = lru_.begin();
    return lru_.front().second;
}

}  // namespace svmap
