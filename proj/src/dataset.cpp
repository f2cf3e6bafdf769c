#include "svmap/dataset.hpp"

#include <algorithm>
#include <climits>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "svmap/errors.hpp"
#include "svmap/textio.hpp"

namespace svmap {

namespace {

std::string loc(const std::string& name, std::size_t line_no) {
    return name + ":" + std::to_string(line_no);
}

// Canonical decimal form so "+1" and "1" compare equal as raw labels.
std::string canonical_label(std::string_view tok) {
    if (auto v = parse_int_token(tok)) return std::to_string(*v);
    return std::string(tok);
}

// Deterministic Fisher-Yates. std::shuffle leaves the number of RNG calls
// unspecified, which would break the byte-identical-partitions contract.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

std::string bucket_key(const Dataset& d, std::size_t i) {
    if (!d.raw_labels.empty()) return d.raw_labels[i];
    return std::to_string(d.samples[i].label);
}

// Shuffled continuous round-robin within each class bucket. The running
// cursor across buckets keeps both total sizes and per-class counts within
// one of each other.
std::vector<std::size_t> stratified_assignment(const Dataset& d, std::size_t parts,
                                               std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < d.size(); ++i) buckets[bucket_key(d, i)].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> part_of(d.size());
    std::size_t cursor = 0;
    for (auto& [key, idx] : buckets) {
        shuffle_indices(idx, rng);
        for (std::size_t i : idx) part_of[i] = cursor++ % parts;
    }
    return part_of;
}

Dataset gather(const Dataset& d, const std::vector<std::size_t>& part_of,
               std::size_t wanted, bool invert) {
    Dataset out;
    out.dim = d.dim;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool in = (part_of[i] == wanted);
        if (invert) in = !in;
        if (!in) continue;
        out.samples.push_back(d.samples[i]);
        if (!d.raw_labels.empty()) out.raw_labels.push_back(d.raw_labels[i]);
    }
    return out;
}

}  // namespace

ClassCounts Dataset::class_counts() const {
    ClassCounts c;
    for (const Sample& s : samples) {
        if (s.label == 1) ++c.positive;
        else if (s.label == -1) ++c.negative;
    }
    return c;
}

bool Dataset::is_binary() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const Sample& s) { return s.label == 1 || s.label == -1; });
}

Dataset parse_sparse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sparse file: " + path);
    return parse_sparse_stream(in, path);
}

Dataset parse_sparse_stream(std::istream& in, const std::string& name) {
    Dataset d;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::size_t max_index = 0;
    std::size_t pinned_dim = 0;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) {
            std::string_view comment = trim(sv.substr(hash + 1));
            if (comment.rfind("dim=", 0) == 0) {
                if (auto v = parse_int_token(comment.substr(4)); v && *v > 0)
                    pinned_dim = std::max<std::size_t>(pinned_dim, static_cast<std::size_t>(*v));
            }
            sv = sv.substr(0, hash);
        }
        sv = trim(sv);
        if (sv.empty()) continue;

        std::istringstream toks{std::string(sv)};
        std::string tok;
        toks >> tok;
        auto label = parse_int_token(tok);
        if (!label) throw DataError(loc(name, line_no) + ": malformed label '" + tok + "'");
        if (*label < INT_MIN || *label > INT_MAX)
            throw DataError(loc(name, line_no) + ": label outside integer range");

        std::vector<std::pair<std::size_t, double>> feats;
        std::size_t prev_index = 0;
        while (toks >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw DataError(loc(name, line_no) + ": malformed feature '" + tok + "'");
            auto idx = parse_int_token(std::string_view(tok).substr(0, colon));
            auto val = parse_double_token(std::string_view(tok).substr(colon + 1));
            if (!idx || *idx < 1 || !val)
                throw DataError(loc(name, line_no) + ": malformed feature '" + tok + "'");
            auto index = static_cast<std::size_t>(*idx);
            if (index <= prev_index)
                throw DataError(loc(name, line_no) + ": non-ascending feature index " +
                                std::to_string(index));
            prev_index = index;
            feats.emplace_back(index, *val);
        }
        max_index = std::max(max_index, prev_index);

        Sample s;
        s.id = static_cast<int>(rows.size());
        s.label = static_cast<int>(*label);
        d.samples.push_back(std::move(s));
        d.raw_labels.push_back(std::to_string(*label));
        rows.push_back(std::move(feats));
    }

    d.dim = std::max(max_index, pinned_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& f = d.samples[i].features;
        f.assign(d.dim, 0.0);
        for (auto [idx, val] : rows[i]) f[idx - 1] = val;
    }
    return d;
}

std::string serialize_sparse(const Dataset& d) {
    std::string out = "# dim=" + std::to_string(d.dim) + "\n";
    for (const Sample& s : d.samples) {
        out += std::to_string(s.label);
        for (std::size_t j = 0; j < s.features.size(); ++j) {
            if (s.features[j] == 0.0) continue;
            out += ' ';
            out += std::to_string(j + 1);
            out += ':';
            out += fmt_g17(s.features[j]);
        }
        out += '\n';
    }
    return out;
}

void write_sparse(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write sparse file: " + path);
    out << serialize_sparse(d);
}

Dataset parse_csv(const std::string& path, int label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open csv file: " + path);
    return parse_csv_stream(in, path, label_column);
}

Dataset parse_csv_stream(std::istream& in, const std::string& name, int label_column) {
    Dataset d;
    std::string line;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        std::string row(sv);
        for (std::size_t i = 0; i <= row.size(); ++i) {
            if (i == row.size() || row[i] == ',') {
                cells.push_back(trim(std::string_view(row).substr(start, i - start)));
                start = i + 1;
            }
        }
        if (cells.size() < 2)
            throw DataError(loc(name, line_no) + ": need at least one feature and a label");
        if (n_cols == 0) n_cols = cells.size();
        if (cells.size() != n_cols)
            throw DataError(loc(name, line_no) + ": ragged row, expected " +
                            std::to_string(n_cols) + " columns, got " +
                            std::to_string(cells.size()));

        std::size_t label_idx =
            label_column < 0 ? n_cols - 1 : static_cast<std::size_t>(label_column);
        if (label_idx >= n_cols)
            throw DataError(name + ": label column " + std::to_string(label_column) +
                            " out of range for " + std::to_string(n_cols) + " columns");

        Sample s;
        s.id = static_cast<int>(d.samples.size());
        std::string raw;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                raw = canonical_label(cells[c]);
                continue;
            }
            auto v = parse_double_token(cells[c]);
            if (!v)
                throw DataError(loc(name, line_no) + ": non-numeric feature at column " +
                                std::to_string(c + 1) + ": '" + std::string(cells[c]) + "'");
            s.features.push_back(*v);
        }
        if (auto v = parse_int_token(raw); v && *v >= INT_MIN && *v <= INT_MAX)
            s.label = static_cast<int>(*v);
        d.samples.push_back(std::move(s));
        d.raw_labels.push_back(std::move(raw));
    }

    d.dim = d.samples.empty() ? 0 : d.samples.front().features.size();
    return d;
}

Dataset binarize(const Dataset& d, const std::string& positive) {
    std::string want = canonical_label(positive);
    auto raw_of = [&](std::size_t i) {
        return d.raw_labels.empty() ? std::to_string(d.samples[i].label) : d.raw_labels[i];
    };

    bool found = false;
    for (std::size_t i = 0; i < d.size() && !found; ++i) found = (raw_of(i) == want);
    if (!found) throw DataError("positive label '" + positive + "' absent from dataset");

    Dataset out;
    out.dim = d.dim;
    out.samples = d.samples;
    for (std::size_t i = 0; i < d.size(); ++i)
        out.samples[i].label = (raw_of(i) == want) ? 1 : -1;
    return out;
}

PartitionSet stratified_partition(const Dataset& d, std::size_t L, std::uint64_t seed) {
    if (L == 0) throw UsageError("partition count L must be >= 1");
    if (L > d.size())
        throw DataError("partition count " + std::to_string(L) + " exceeds sample count " +
                        std::to_string(d.size()));

    auto part_of = stratified_assignment(d, L, seed);
    PartitionSet ps;
    ps.seed = seed;
    ps.L = L;
    ps.partitions.reserve(L);
    for (std::size_t p = 0; p < L; ++p) ps.partitions.push_back(gather(d, part_of, p, false));
    return ps;
}

std::vector<FoldPair> kfold_split(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw UsageError("fold count k must be >= 2");
    if (k > d.size())
        throw DataError("fold count " + std::to_string(k) + " exceeds sample count " +
                        std::to_string(d.size()));

    auto fold_of = stratified_assignment(d, k, seed);
    std::vector<FoldPair> folds;
    folds.reserve(k);
    for (std::size_t f = 0; f < k; ++f)
        folds.push_back({gather(d, fold_of, f, true), gather(d, fold_of, f, false)});
    return folds;
}

ScaleRange fit_scale(const Dataset& d) {
    ScaleRange r;
    r.lo.assign(d.dim, 0.0);
    r.hi.assign(d.dim, 0.0);
    for (std::size_t j = 0; j < d.dim; ++j) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double v = d.samples[i].features[j];
            if (i == 0 || v < lo) lo = v;
            if (i == 0 || v > hi) hi = v;
        }
        r.lo[j] = lo;
        r.hi[j] = hi;
    }
    return r;
}

Dataset apply_scale(const Dataset& d, const ScaleRange& r) {
    if (r.lo.size() != d.dim || r.hi.size() != d.dim)
        throw DataError("scale range dimension mismatch");
    Dataset out = d;
    for (Sample& s : out.samples) {
        for (std::size_t j = 0; j < d.dim; ++j) {
            double span = r.hi[j] - r.lo[j];
            s.features[j] = span > 0.0 ? (s.features[j] - r.lo[j]) / span : 0.0;
        }
    }
    return out;
}

}  // namespace svmap
