#include "codedsim/generator.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

#include "codedsim/rng.hpp"

namespace codedsim {
namespace {

// C(n, r) capped at `cap` so the subset-policy decision never overflows.
long long binomial_capped(int n, int r, long long cap) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    long long acc = 1;
    for (int i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > cap) return cap + 1;
    }
    return acc;
}

bool subset_ok(const Eigen::MatrixXd& entries, const std::vector<int>& rows,
               double* worst_ratio) {
    const int k = static_cast<int>(entries.cols());
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i) sub.row(i) = entries.row(rows[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    double smin = sv(k - 1);
    double ratio = (smax > 0.0) ? smin / smax : 0.0;
    if (worst_ratio && ratio < *worst_ratio) *worst_ratio = ratio;
    return smax > 0.0 && smin > kSubsetSingularRatio * smax;
}

}  // namespace

bool generator_subsets_invertible(const Eigen::MatrixXd& entries,
                                  std::uint64_t check_seed,
                                  double* worst_ratio) {
    const int L = static_cast<int>(entries.rows());
    const int k = static_cast<int>(entries.cols());
    if (worst_ratio) *worst_ratio = 1.0;
    if (L < k || k < 1) return false;

    constexpr long long kExhaustiveLimit = 10000;
    constexpr int kSampledSubsets = 1000;

    if (binomial_capped(L, k, kExhaustiveLimit) <= kExhaustiveLimit) {
        // Lexicographic enumeration of all k-subsets.
        std::vector<int> rows(k);
        for (int i = 0; i < k; ++i) rows[i] = i;
        while (true) {
            if (!subset_ok(entries, rows, worst_ratio)) return false;
            int i = k - 1;
            while (i >= 0 && rows[i] == L - k + i) --i;
            if (i < 0) break;
            ++rows[i];
            for (int j = i + 1; j < k; ++j) rows[j] = rows[j - 1] + 1;
        }
        return true;
    }

    Rng rng(derive_seed(check_seed, 0x5b5e7));
    std::vector<int> pool(L);
    for (int i = 0; i < L; ++i) pool[i] = i;
    std::vector<int> rows(k);
    for (int s = 0; s < kSampledSubsets; ++s) {
        // Partial Fisher-Yates: first k entries form a uniform subset.
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(rng.bounded(L - i));
            std::swap(pool[i], pool[j]);
            rows[i] = pool[i];
        }
        if (!subset_ok(entries, rows, worst_ratio)) return false;
    }
    return true;
}

namespace {

GeneratorMatrix make_with_filler(int L, int k, std::uint64_t seed,
                                 bool systematic) {
    if (k < 1) throw std::invalid_argument("generator needs k >= 1");
    if (L < k) throw std::invalid_argument("generator needs L >= k");

    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        Eigen::MatrixXd entries(L, k);
        if (systematic) {
            entries.topRows(k) = Eigen::MatrixXd::Identity(k, k);
            for (int i = k; i < L; ++i)
                for (int j = 0; j < k; ++j) entries(i, j) = rng.normal();
        } else {
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < k; ++j) entries(i, j) = rng.normal();
        }
        if (generator_subsets_invertible(entries, derive_seed(seed, 0x9d0d))) {
            return GeneratorMatrix{std::move(entries), seed};
        }
    }
    throw std::runtime_error(
        "generator sampling failed the invertibility check 100 times; "
        "parameters are pathological");
}

}  // namespace

GeneratorMatrix make_generator(int L, int k, std::uint64_t seed) {
    return make_with_filler(L, k, seed, /*systematic=*/false);
}

GeneratorMatrix make_systematic_generator(int L, int k, std::uint64_t seed) {
    return make_with_filler(L, k, seed, /*systematic=*/true);
}

nlohmann::json generator_to_json(const GeneratorMatrix& g) {
    nlohmann::json j;
    j["L"] = g.rows();
    j["k"] = g.cols();
    j["seed"] = g.seed;
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(g.rows()) * g.cols());
    for (int i = 0; i < g.rows(); ++i)
        for (int c = 0; c < g.cols(); ++c) flat.push_back(g.entries(i, c));
    j["entries"] = flat;
    return j;
}

GeneratorMatrix generator_from_json(const nlohmann::json& j) {
    int L = j.at("L").get<int>();
    int k = j.at("k").get<int>();
    auto flat = j.at("entries").get<std::vector<double>>();
    if (L < 1 || k < 1 || flat.size() != static_cast<std::size_t>(L) * k)
        throw std::invalid_argument("generator JSON has inconsistent shape");
    GeneratorMatrix g;
    g.seed = j.value("seed", std::uint64_t{0});
    g.entries.resize(L, k);
    for (int i = 0; i < L; ++i)
        for (int c = 0; c < k; ++c)
            g.entries(i, c) = flat[static_cast<std::size_t>(i) * k + c];
    return g;
}

std::string generator_to_json_string(const GeneratorMatrix& g) {
    return generator_to_json(g).dump();
}

GeneratorMatrix generator_from_json_string(const std::string& text) {
    return generator_from_json(nlohmann::json::parse(text));
}

}  // namespace codedsim
