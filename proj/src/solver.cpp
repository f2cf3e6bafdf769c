#include "svmap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "svmap/errors.hpp"
#include "svmap/textio.hpp"

namespace svmap {

namespace {

constexpr std::uint64_t kHardUpdateCap = 10'000'000;
constexpr double kTau = 1e-12;  // curvature floor for degenerate pairs

void validate_config(const TrainConfig& c) {
    if (c.C <= 0.0) throw UsageError("C must be positive");
    if (c.kkt_tol <= 0.0) throw UsageError("kkt_tol must be positive");
    if (c.sv_epsilon < 0.0) throw UsageError("sv_epsilon must be nonnegative");
    if (c.kernel.kind == KernelKind::rbf && c.kernel.gamma <= 0.0)
        throw UsageError("rbf gamma must be positive");
}

void validate_dataset(const Dataset& d) {
    if (d.size() < 2) throw TrainingError("need at least 2 samples to train");
    std::size_t pos = 0, neg = 0;
    for (const Sample& s : d.samples) {
        if (s.label == 1) ++pos;
        else if (s.label == -1) ++neg;
        else
            throw DataError("sample id " + std::to_string(s.id) +
                            " has label " + std::to_string(s.label) +
                            "; binarize the dataset first");
        if (s.features.size() != d.dim)
            throw DataError("sample id " + std::to_string(s.id) + " has dimension " +
                            std::to_string(s.features.size()) + ", dataset dim is " +
                            std::to_string(d.dim));
    }
    if (pos == 0 || neg == 0) throw TrainingError("single-class dataset, cannot train");
}

}  // namespace

std::size_t SvmModel::dim() const {
    if (!weights.empty()) return weights.size();
    return support_vectors.empty() ? 0 : support_vectors.front().features.size();
}

namespace {

SvmModel solve_dual(const Dataset& d, const TrainConfig& config,
                    const std::map<int, double>* warm_alphas) {
    validate_config(config);
    validate_dataset(d);

    const std::size_t n = d.size();
    const double C = config.C;
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = d.samples[k].label;

    // Dual: min F(a) = 1/2 a'Qa - sum(a), 0 <= a <= C, y'a = 0,
    // with Q_ij = y_i y_j K_ij. Gradient G_i = (Qa)_i - 1.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);

    GramCache cache(config.kernel, d, config.cache_mb);
    std::vector<double> row_i_copy;

    if (warm_alphas != nullptr && !warm_alphas->empty()) {
        // Seed from the previous solution. The equality constraint carries
        // over since the seed satisfied it on a subset of this sample set.
        for (std::size_t k = 0; k < n; ++k) {
            auto it = warm_alphas->find(d.samples[k].id);
            if (it != warm_alphas->end()) alpha[k] = std::clamp(it->second, 0.0, C);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            std::span<const double> row_j = cache.row(j);
            double coef = alpha[j] * y[j];
            for (std::size_t k = 0; k < n; ++k) grad[k] += y[k] * coef * row_j[k];
        }
    }

    std::uint64_t cap = config.max_solver_passes == 0
                            ? 10 * static_cast<std::uint64_t>(n)
                            : config.max_solver_passes;
    cap = std::min(cap, kHardUpdateCap);

    bool converged = false;
    for (std::uint64_t update = 0; update < cap; ++update) {
        // Maximal violating pair over v_k = -y_k G_k:
        //   i = argmax over I_up,  j = argmin over I_low.
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t k = 0; k < n; ++k) {
            double v = -y[k] * grad[k];
            bool in_up = (y[k] == 1 && alpha[k] < C) || (y[k] == -1 && alpha[k] > 0.0);
            bool in_low = (y[k] == 1 && alpha[k] > 0.0) || (y[k] == -1 && alpha[k] < C);
            if (in_up && v > m_up) {
                m_up = v;
                i = static_cast<std::ptrdiff_t>(k);
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = static_cast<std::ptrdiff_t>(k);
            }
        }
        if (i < 0 || j < 0 || m_up - m_low <= config.kkt_tol) {
            converged = true;
            break;
        }

        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        {
            // row spans are invalidated by the next row() call; keep i's copy
            std::span<const double> row_i = cache.row(ui);
            row_i_copy.assign(row_i.begin(), row_i.end());
        }
        std::span<const double> row_j = cache.row(uj);

        double eta = row_i_copy[ui] + row_j[uj] - 2.0 * row_i_copy[uj];
        if (eta < kTau) eta = kTau;
        double step = (m_up - m_low) / eta;
        double bound_i = y[ui] == 1 ? C - alpha[ui] : alpha[ui];
        double bound_j = y[uj] == 1 ? alpha[uj] : C - alpha[uj];
        step = std::min(step, std::min(bound_i, bound_j));

        double new_i = std::clamp(alpha[ui] + y[ui] * step, 0.0, C);
        double new_j = std::clamp(alpha[uj] - y[uj] * step, 0.0, C);
        double delta_i = new_i - alpha[ui];
        double delta_j = new_j - alpha[uj];
        alpha[ui] = new_i;
        alpha[uj] = new_j;

        for (std::size_t k = 0; k < n; ++k)
            grad[k] += y[k] * (y[ui] * row_i_copy[k] * delta_i + y[uj] * row_j[k] * delta_j);
    }

    // Bias from v_k = y_k - sum_j a_j y_j K_jk = -y_k G_k: average over
    // unbounded SVs, else midpoint of the interval the bound constraints
    // allow.
    double bias;
    {
        double sum = 0.0;
        std::size_t count = 0;
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            double v = -y[k] * grad[k];
            if (alpha[k] > 0.0 && alpha[k] < C) {
                sum += v;
                ++count;
            }
            bool in_up = (y[k] == 1 && alpha[k] < C) || (y[k] == -1 && alpha[k] > 0.0);
            bool in_low = (y[k] == 1 && alpha[k] > 0.0) || (y[k] == -1 && alpha[k] < C);
            if (in_up) m_up = std::max(m_up, v);
            if (in_low) m_low = std::min(m_low, v);
        }
        bias = count > 0 ? sum / static_cast<double>(count) : (m_up + m_low) / 2.0;
    }

    double obj = 0.0;
    {
        double ag = 0.0, asum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            ag += alpha[k] * grad[k];
            asum += alpha[k];
        }
        obj = 0.5 * (ag - asum);
    }

    SvmModel model;
    model.kernel = config.kernel;
    model.bias = bias;
    model.objective = obj;
    model.converged = converged;
    for (std::size_t k = 0; k < n; ++k) {
        if (alpha[k] > config.sv_epsilon) {
            model.support_vectors.push_back(d.samples[k]);
            model.alphas.push_back(alpha[k]);
        }
    }
    if (config.kernel.kind == KernelKind::linear) {
        model.weights.assign(d.dim, 0.0);
        for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
            const Sample& sv = model.support_vectors[s];
            double coef = model.alphas[s] * sv.label;
            for (std::size_t f = 0; f < d.dim; ++f) model.weights[f] += coef * sv.features[f];
        }
    }
    return model;
}

}  // namespace

SvmModel train_svm(const Dataset& d, const TrainConfig& config) {
    return solve_dual(d, config, nullptr);
}

SvmModel train_svm_warm(const Dataset& d, const TrainConfig& config,
                        const std::map<int, double>& warm_alphas) {
    return solve_dual(d, config, &warm_alphas);
}

double decision_value(const SvmModel& m, std::span<const double> x) {
    std::size_t want = m.dim();
    if (want != 0 && x.size() != want)
        throw DataError("input dimension " + std::to_string(x.size()) +
                        " does not match model dimension " + std::to_string(want));
    if (!m.weights.empty()) {
        double f = m.bias;
        for (std::size_t j = 0; j < x.size(); ++j) f += m.weights[j] * x[j];
        return f;
    }
    double f = m.bias;
    for (std::size_t s = 0; s < m.support_vectors.size(); ++s) {
        const Sample& sv = m.support_vectors[s];
        f += m.alphas[s] * sv.label * kernel_eval(m.kernel, sv.features, x);
    }
    return f;
}

int predict(const SvmModel& m, std::span<const double> x) {
    return decision_value(m, x) >= 0.0 ? 1 : -1;
}

std::vector<Sample> extract_svs(const SvmModel& m) {
    return m.support_vectors;
}

std::string serialize_model(const SvmModel& m) {
    std::string out = "svmap model 1\n";
    out += "kernel " + kernel_name(m.kernel.kind);
    if (m.kernel.kind == KernelKind::rbf) out += " " + fmt_g17(m.kernel.gamma);
    out += "\n";
    out += "bias " + fmt_g17(m.bias) + "\n";
    out += "objective " + fmt_g17(m.objective) + "\n";
    out += std::string("converged ") + (m.converged ? "1" : "0") + "\n";
    out += "dim " + std::to_string(m.dim()) + "\n";
    if (m.scale) {
        out += "scale";
        for (std::size_t j = 0; j < m.scale->lo.size(); ++j)
            out += " " + fmt_g17(m.scale->lo[j]) + " " + fmt_g17(m.scale->hi[j]);
        out += "\n";
    }
    out += "nsv " + std::to_string(m.support_vectors.size()) + "\n";
    for (std::size_t s = 0; s < m.support_vectors.size(); ++s) {
        const Sample& sv = m.support_vectors[s];
        out += fmt_g17(m.alphas[s]);
        out += ' ';
        out += std::to_string(sv.label);
        out += ' ';
        out += std::to_string(sv.id);
        for (std::size_t j = 0; j < sv.features.size(); ++j) {
            if (sv.features[j] == 0.0) continue;
            out += ' ';
            out += std::to_string(j + 1);
            out += ':';
            out += fmt_g17(sv.features[j]);
        }
        out += '\n';
    }
    return out;
}

namespace {

[[noreturn]] void bad_model(const std::string& name, const std::string& why) {
    throw DataError("corrupted model file " + name + ": " + why);
}

std::string next_line(std::istream& in, const std::string& name, const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) bad_model(name, "missing " + what);
    return line;
}

}  // namespace

SvmModel parse_model_stream(std::istream& in, const std::string& name) {
    if (next_line(in, name, "header") != "svmap model 1") bad_model(name, "bad header");

    SvmModel m;
    std::istringstream kline(next_line(in, name, "kernel line"));
    std::string key, kname;
    kline >> key >> kname;
    if (key != "kernel") bad_model(name, "expected kernel line");
    m.kernel.kind = kernel_from_name(kname);
    if (m.kernel.kind == KernelKind::rbf) {
        std::string g;
        kline >> g;
        auto gv = parse_double_token(g);
        if (!gv) bad_model(name, "bad gamma");
        m.kernel.gamma = *gv;
    }

    auto read_double_field = [&](const std::string& field) {
        std::istringstream ls(next_line(in, name, field + " line"));
        std::string k, v;
        ls >> k >> v;
        auto d = parse_double_token(v);
        if (k != field || !d) bad_model(name, "expected " + field + " line");
        return *d;
    };
    m.bias = read_double_field("bias");
    m.objective = read_double_field("objective");

    {
        std::istringstream ls(next_line(in, name, "converged line"));
        std::string k, v;
        ls >> k >> v;
        if (k != "converged" || (v != "0" && v != "1")) bad_model(name, "expected converged line");
        m.converged = (v == "1");
    }

    std::size_t dim = 0;
    {
        std::istringstream ls(next_line(in, name, "dim line"));
        std::string k, v;
        ls >> k >> v;
        auto d = parse_int_token(v);
        if (k != "dim" || !d || *d < 0) bad_model(name, "expected dim line");
        dim = static_cast<std::size_t>(*d);
    }

    std::string line = next_line(in, name, "nsv line");
    if (line.rfind("scale", 0) == 0) {
        std::istringstream ls(line);
        std::string k;
        ls >> k;
        ScaleRange r;
        std::string lo_tok, hi_tok;
        while (ls >> lo_tok >> hi_tok) {
            auto lo = parse_double_token(lo_tok);
            auto hi = parse_double_token(hi_tok);
            if (!lo || !hi) bad_model(name, "bad scale entry");
            r.lo.push_back(*lo);
            r.hi.push_back(*hi);
        }
        if (r.lo.size() != dim) bad_model(name, "scale length does not match dim");
        m.scale = std::move(r);
        line = next_line(in, name, "nsv line");
    }

    std::size_t nsv = 0;
    {
        std::istringstream ls(line);
        std::string k, v;
        ls >> k >> v;
        auto d = parse_int_token(v);
        if (k != "nsv" || !d || *d < 0) bad_model(name, "expected nsv line");
        nsv = static_cast<std::size_t>(*d);
    }

    for (std::size_t s = 0; s < nsv; ++s) {
        std::istringstream ls(next_line(in, name, "sv line"));
        std::string alpha_tok, label_tok, id_tok, feat_tok;
        ls >> alpha_tok >> label_tok >> id_tok;
        auto alpha = parse_double_token(alpha_tok);
        auto label = parse_int_token(label_tok);
        auto id = parse_int_token(id_tok);
        if (!alpha || !label || !id || (*label != 1 && *label != -1))
            bad_model(name, "bad sv line " + std::to_string(s + 1));
        Sample sv;
        sv.id = static_cast<int>(*id);
        sv.label = static_cast<int>(*label);
        sv.features.assign(dim, 0.0);
        std::size_t prev = 0;
        while (ls >> feat_tok) {
            auto colon = feat_tok.find(':');
            if (colon == std::string::npos) bad_model(name, "bad sv feature '" + feat_tok + "'");
            auto idx = parse_int_token(std::string_view(feat_tok).substr(0, colon));
            auto val = parse_double_token(std::string_view(feat_tok).substr(colon + 1));
            if (!idx || *idx < 1 || static_cast<std::size_t>(*idx) > dim || !val ||
                static_cast<std::size_t>(*idx) <= prev)
                bad_model(name, "bad sv feature '" + feat_tok + "'");
            prev = static_cast<std::size_t>(*idx);
            sv.features[prev - 1] = *val;
        }
        m.support_vectors.push_back(std::move(sv));
        m.alphas.push_back(*alpha);
    }

    if (m.kernel.kind == KernelKind::linear) {
        m.weights.assign(dim, 0.0);
        for (std::size_t s = 0; s < m.support_vectors.size(); ++s) {
            const Sample& sv = m.support_vectors[s];
            double coef = m.alphas[s] * sv.label;
            for (std::size_t f = 0; f < dim; ++f) m.weights[f] += coef * sv.features[f];
        }
    }
    return m;
}

SvmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    return parse_model_stream(in, path);
}

void save_model(const SvmModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << serialize_model(m);
}

}  // namespace svmap
