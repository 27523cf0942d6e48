#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "occ/feature_space.hpp"
#include "occ/rand.hpp"

namespace testutil {

/// Minimum alignment cost by full recursive path enumeration (no DP table);
/// the independent reference for the dynamic-programming implementation.
inline double dtw_brute(const std::vector<double>& x, const std::vector<double>& y, std::size_t i = 0,
                        std::size_t j = 0) {
    const double local = std::fabs(x[i] - y[j]);
    if (i + 1 == x.size() && j + 1 == y.size()) return local;
    double best = std::numeric_limits<double>::infinity();
    if (i + 1 < x.size()) best = std::min(best, dtw_brute(x, y, i + 1, j));
    if (j + 1 < y.size()) best = std::min(best, dtw_brute(x, y, i, j + 1));
    if (i + 1 < x.size() && j + 1 < y.size()) best = std::min(best, dtw_brute(x, y, i + 1, j + 1));
    return local + best;
}

/// Pair-counting AUC: P(score+ > score-) + P(tie)/2.
inline double auc_brute(const std::vector<double>& scores, const std::vector<bool>& is_positive) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (!is_positive[p]) continue;
        for (std::size_t n = 0; n < scores.size(); ++n) {
            if (is_positive[n]) continue;
            ++pairs;
            if (scores[p] > scores[n])
                wins += 1.0;
            else if (scores[p] == scores[n])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

inline occ::FeatureSchema quantitative_schema(std::size_t m) {
    std::vector<occ::FeatureDescriptor> fs;
    for (std::size_t j = 0; j < m; ++j)
        fs.push_back({.name = "q" + std::to_string(j), .kind = occ::FeatureKind::quantitative});
    return occ::FeatureSchema(std::move(fs));
}

inline occ::Pattern scalar_pattern(std::vector<double> values) {
    occ::Pattern p;
    for (double v : values) p.values.emplace_back(v);
    return p;
}

/// Unique scratch directory under the build tree, cleaned by the caller.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("occkit_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
                 std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
