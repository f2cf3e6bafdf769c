#ifndef SVMAP_DATASET_HPP
#define SVMAP_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace svmap {

// One labeled example. `label` is -1/+1 for a trainable dataset; parsers keep
// the original label token in Dataset::raw_labels so binarize() can map
// multi-class sources onto {-1,+1} later. `id` is unique within the owning
// dataset and stable across partitioning.
struct Sample {
    int id = 0;
    std::vector<double> features;
    int label = 0;
};

struct ClassCounts {
    std::size_t positive = 0;  // label == +1
    std::size_t negative = 0;  // label == -1
};

struct Dataset {
    std::vector<Sample> samples;
    std::size_t dim = 0;
    // Parallel to samples; empty once binarized. Integer tokens are stored in
    // canonical decimal form ("+1" -> "1").
    std::vector<std::string> raw_labels;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    // Counts of +1/-1 labels. Sums to size() only for a binarized dataset.
    ClassCounts class_counts() const;
    // True when every label is -1 or +1.
    bool is_binary() const;
};

struct PartitionSet {
    std::vector<Dataset> partitions;
    std::uint64_t seed = 0;
    std::size_t L = 0;
};

struct FoldPair {
    Dataset train;
    Dataset test;
};

// Per-dimension [lo, hi] ranges for min-max scaling.
struct ScaleRange {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Sparse sample text format (LIBSVM/SVMlight convention):
//   <label> <index>:<value> ...
// indices 1-based and strictly ascending, '#' starts a comment. Unlisted
// indices are 0.0; dim is the max index seen anywhere in the file. A leading
// "# dim=N" comment (written by serialize_sparse) pins the dimension so that
// trailing all-zero columns survive a round trip.
Dataset parse_sparse(const std::string& path);
Dataset parse_sparse_stream(std::istream& in, const std::string& name);
std::string serialize_sparse(const Dataset& d);
void write_sparse(const Dataset& d, const std::string& path);

// RFC-4180-style CSV without quoted fields. label_column is 0-based;
// -1 selects the last column. Features are the remaining columns in order.
Dataset parse_csv(const std::string& path, int label_column = -1);
Dataset parse_csv_stream(std::istream& in, const std::string& name, int label_column);

// Maps samples whose raw label equals `positive` to +1 and all others to -1.
// Throws DataError when `positive` does not occur.
Dataset binarize(const Dataset& d, const std::string& positive);

// Seeded stratified split into L parts. Per-class counts and total sizes
// differ by at most one across parts; samples keep their ids and relative
// dataset order inside each part. Deterministic for fixed (order, L, seed).
PartitionSet stratified_partition(const Dataset& d, std::size_t L, std::uint64_t seed);

// k stratified folds; each sample lands in exactly one test fold, train is
// the order-preserving complement.
std::vector<FoldPair> kfold_split(const Dataset& d, std::size_t k, std::uint64_t seed);

// Min-max scaling to [0,1], opt-in from the CLI. Constant columns map to 0.
ScaleRange fit_scale(const Dataset& d);
Dataset apply_scale(const Dataset& d, const ScaleRange& r);

}  // namespace svmap

#endif
