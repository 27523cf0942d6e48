#include "occ/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace occ {

ConfusionCounts count_confusion(const std::vector<bool>& predicted_target,
                                const std::vector<bool>& is_target) {
    if (predicted_target.size() != is_target.size())
        throw EvaluationError("count_confusion: length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < is_target.size(); ++i) {
        if (is_target[i])
            predicted_target[i] ? ++c.tp : ++c.fn;
        else
            predicted_target[i] ? ++c.fp : ++c.tn;
    }
    return c;
}

ConfusionMetrics confusion_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw EvaluationError("confusion_metrics: no counts");
    ConfusionMetrics m;
    const auto ratio = [&m](std::size_t num, std::size_t den) {
        if (den == 0) {
            m.degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.fpr = ratio(c.fp, c.fp + c.tn);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

RocCurve roc_auc(std::span<const double> scores, const std::vector<bool>& is_positive) {
    if (scores.size() != is_positive.size()) throw EvaluationError("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (bool b : is_positive) n_pos += b ? 1 : 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw EvaluationError("roc_auc: need at least one positive and one negative");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum AUC with midranks on tied scores.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t)
            if (is_positive[order[t]]) pos_rank_sum += midrank;
        i = j + 1;
    }
    RocCurve curve;
    curve.auc = (pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
                (static_cast<double>(n_pos) * static_cast<double>(n_neg));

    // Curve points: sweep the threshold downwards, one point per tie group.
    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    std::size_t idx = n;   // one past the current tie group
    while (idx > 0) {
        std::size_t g = idx - 1;
        while (g > 0 && scores[order[g - 1]] == scores[order[idx - 1]]) --g;
        for (std::size_t t = g; t < idx; ++t) {
            if (is_positive[order[t]])
                ++tp;
            else
                ++fp;
        }
        curve.points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
        idx = g;
    }
    return curve;
}

namespace {

double entropy_nats(std::span<const std::size_t> counts, std::size_t total) {
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

std::size_t bin10(double v, double lo, double hi) {
    if (hi <= lo) return 0;
    const auto b = static_cast<long>(10.0 * (v - lo) / (hi - lo));
    return static_cast<std::size_t>(std::clamp<long>(b, 0, 9));
}

}  // namespace

double weight_entropy(std::span<const double> w) {
    if (w.size() < 2) throw EvaluationError("weight_entropy: need at least two weights");
    std::vector<std::size_t> counts(10, 0);
    for (double v : w) ++counts[bin10(v, 0.0, 1.0)];
    return entropy_nats(counts, w.size());
}

std::vector<std::array<double, 2>> weight_density_curve(std::span<const double> w, std::size_t grid) {
    if (w.size() < 2) throw EvaluationError("weight_density_curve: need at least two weights");
    const double n = static_cast<double>(w.size());
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    // Silverman's rule; floor keeps the bandwidth usable for degenerate sets.
    const double h = std::max(1.06 * sd * std::pow(n, -0.2), 1e-3);

    std::vector<std::array<double, 2>> curve(grid);
    const double inv = 1.0 / (n * h * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t g = 0; g < grid; ++g) {
        const double x = grid > 1 ? static_cast<double>(g) / static_cast<double>(grid - 1) : 0.0;
        double density = 0.0;
        for (double v : w) {
            const double z = (x - v) / h;
            density += std::exp(-0.5 * z * z);
        }
        curve[g] = {x, density * inv};
    }
    return curve;
}

double mutual_information(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw EvaluationError("mutual_information: length mismatch");
    if (xs.size() < 10) throw EvaluationError("mutual_information: need at least 10 samples");
    const std::size_t n = xs.size();

    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    const double xlo = *xmin_it, xhi = *xmax_it, ylo = *ymin_it, yhi = *ymax_it;

    std::vector<std::size_t> joint(100, 0), mx(10, 0), my(10, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bx = bin10(xs[i], xlo, xhi);
        const std::size_t by = bin10(ys[i], ylo, yhi);
        ++joint[bx * 10 + by];
        ++mx[bx];
        ++my[by];
    }
    const double hx = entropy_nats(mx, n), hy = entropy_nats(my, n);
    if (hx == 0.0 || hy == 0.0) return 0.0;

    double mi = 0.0;
    for (std::size_t bx = 0; bx < 10; ++bx)
        for (std::size_t by = 0; by < 10; ++by) {
            const std::size_t c = joint[bx * 10 + by];
            if (c == 0) continue;
            const double pxy = static_cast<double>(c) / n;
            const double px = static_cast<double>(mx[bx]) / n;
            const double py = static_cast<double>(my[by]) / n;
            mi += pxy * std::log(pxy / (px * py));
        }
    return std::clamp(mi / std::min(hx, hy), 0.0, 1.0);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw EvaluationError("pearson_correlation: length mismatch");
    if (xs.size() < 2) throw EvaluationError("pearson_correlation: need at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw EvaluationError("pearson_correlation: constant series");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

// Power iteration for the leading eigenvector of S = Mc^T Mc restricted to
// the subspace orthogonal to the already-found directions.
std::vector<double> leading_direction(const std::vector<std::vector<double>>& mc,
                                      const std::vector<std::vector<double>>& found,
                                      double* eigenvalue) {
    const std::size_t n = mc.size();
    // Deterministic non-degenerate start vector.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(i + 1);

    const auto orthogonalize = [&](std::vector<double>& u) {
        for (const auto& f : found) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += u[i] * f[i];
            for (std::size_t i = 0; i < n; ++i) u[i] -= dot * f[i];
        }
    };
    const auto norm_of = [&](const std::vector<double>& u) {
        double s = 0.0;
        for (double x : u) s += x * x;
        return std::sqrt(s);
    };

    orthogonalize(v);
    double norm = norm_of(v);
    if (norm < 1e-300) return std::vector<double>(n, 0.0);
    for (auto& x : v) x /= norm;

    std::vector<double> tmp(n), next(n);
    double lambda = 0.0;
    for (int iter = 0; iter < 2000; ++iter) {
        // next = Mc^T (Mc v)
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (std::size_t r = 0; r < mc.size(); ++r) {
            double dot = 0.0;
            const auto& row = mc[r];
            for (std::size_t i = 0; i < n; ++i) dot += row[i] * v[i];
            tmp[r] = dot;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r < mc.size(); ++r) {
            const auto& row = mc[r];
            const double t = tmp[r];
            for (std::size_t i = 0; i < n; ++i) next[i] += row[i] * t;
        }
        orthogonalize(next);
        const double next_norm = norm_of(next);
        if (next_norm < 1e-300) {
            *eigenvalue = 0.0;
            return std::vector<double>(n, 0.0);
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= next_norm;
            delta = std::max(delta, std::fabs(next[i] - v[i]));
        }
        lambda = next_norm;
        const bool settled = delta < 1e-14;
        v = next;
        if (settled) break;
    }
    *eigenvalue = lambda;
    return v;
}

}  // namespace

std::vector<std::array<double, 2>> embed_dissimilarity(const std::vector<std::vector<double>>& d) {
    const std::size_t n = d.size();
    if (n == 0) throw EvaluationError("embed_dissimilarity: empty matrix");
    for (const auto& row : d)
        if (row.size() != n) throw EvaluationError("embed_dissimilarity: matrix not square");

    // Column-center.
    std::vector<double> col_mean(n, 0.0);
    for (const auto& row : d)
        for (std::size_t j = 0; j < n; ++j) col_mean[j] += row[j];
    for (auto& m : col_mean) m /= static_cast<double>(n);
    std::vector<std::vector<double>> mc(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mc[i][j] = d[i][j] - col_mean[j];

    std::vector<std::vector<double>> directions;
    std::vector<std::array<double, 2>> coords(n, {0.0, 0.0});
    for (int comp = 0; comp < 2; ++comp) {
        double lambda = 0.0;
        auto v = leading_direction(mc, directions, &lambda);
        // Deterministic sign: largest-magnitude loading positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
        if (v[arg] < 0.0)
            for (auto& x : v) x = -x;
        for (std::size_t i = 0; i < n; ++i) {
            double score = 0.0;
            for (std::size_t j = 0; j < n; ++j) score += mc[i][j] * v[j];
            coords[i][comp] = score;
        }
        directions.push_back(std::move(v));
    }
    return coords;
}

}  // namespace occ
