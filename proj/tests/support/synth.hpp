#ifndef SVMAP_TESTS_SYNTH_HPP
#define SVMAP_TESTS_SYNTH_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "svmap/dataset.hpp"

namespace svmap::testsup {

// [0,1) from the top 53 bits; avoids std::uniform_real_distribution whose
// call pattern is implementation-defined.
double unit_uniform(std::mt19937_64& rng);
// [-1,1]
double sym_uniform(std::mt19937_64& rng);

// Two Gaussian-ish blobs with labels -1/+1, centers separated by `sep` along
// every axis unit. Both classes are always present (n >= 2).
Dataset random_binary_blobs(std::size_t n, std::size_t dim, std::uint64_t seed,
                            double sep = 2.0);

// UCI-shaped stand-ins: 26 letter classes / 10 digit classes over 16 integer
// features. Raw labels are "A".."Z" and "0".."9"; numeric labels are unset
// until binarize().
Dataset synth_letters(std::size_t n, std::uint64_t seed);
Dataset synth_digits(std::size_t n, std::uint64_t seed);

// Writes a dataset's raw labels + features as CSV. label_first mimics the
// letter-recognition layout, otherwise the label lands in the last column.
void write_csv(const Dataset& d, const std::string& path, bool label_first);

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

// Fresh unique directory under the system temp dir.
std::string make_temp_dir(const std::string& hint);

std::size_t count_lines(const std::string& path);

}  // namespace svmap::testsup

#endif
