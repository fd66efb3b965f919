#pragma once

#include <vector>

namespace codedsim {

// Truncated discrete Gaussian pmf of work completed: support {0, ..., l},
// pmf[v] proportional to exp(-(v - gamma)^2 / (2 sigma^2)). The normalizer
// c is the sum of the untruncated Gaussian density over the support, kept
// because the closed-form sum approximation divides by it.
struct WorkDistribution {
    int support_max = 0;       // l
    double mean_param = 0.0;   // gamma (jobs)
    double spread_param = 0.0; // sigma (jobs)
    double normalizer = 0.0;   // c = sum_j N(j; gamma, sigma^2)
    std::vector<double> pmf;   // size l + 1
};

// Throws on l < 0 or sigma <= 0. Stable under large |gamma|/sigma via
// max-exponent shifting.
WorkDistribution work_pmf(int l, double gamma, double sigma);

// Distribution of Z = sum of per-worker completed work.
struct SumDistribution {
    enum class Method { exact_convolution, gaussian_approx };
    Method method = Method::exact_convolution;
    std::vector<double> pmf;  // support {0, ..., L}
    double gamma_z = 0.0;     // gaussian_approx only
    double sigma_z = 0.0;

    double total_mass() const;
};

// Sequential discrete convolution; support {0, ..., sum l_i}; exact.
SumDistribution sum_distribution_exact(const std::vector<WorkDistribution>& dists);

// The closed-form approximation evaluated literally: a discrete Gaussian on
// {0, ..., L} with gamma_z = sum gamma_i / c_i and
// sigma_z = sqrt(sum sigma_i^2 / c_i^2), including the 1/sqrt(2 pi sigma^2)
// density factor and no renormalization. Its mass can differ badly from 1;
// see gaussian_diagnostics.
SumDistribution sum_distribution_gaussian(const std::vector<WorkDistribution>& dists);

struct GaussianDiagnostics {
    double total_mass = 0.0;       // mass of the approximation on {0..L}
    double tv_distance = 0.0;      // 0.5 * sum |approx - exact|
    bool mass_deviates = false;    // |mass - 1| > 1e-3
};

GaussianDiagnostics gaussian_diagnostics(const std::vector<WorkDistribution>& dists);

// Pr[Z >= k] = sum_{z=k}^{L} pmf[z]. Requires 0 <= k <= L + 1.
double completion_probability(const SumDistribution& sum, int k);

// The no-sub-blocking baseline: each worker either delivers all l blocks
// (probability pmf[l]) or contributes nothing; exact convolution of the
// collapsed two-point distributions, then the k-tail. `l` must equal each
// distribution's support_max.
double baseline_completion_probability(const std::vector<WorkDistribution>& dists,
                                       int k, int l);

}  // namespace codedsim
