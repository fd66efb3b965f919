#include "codedsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codedsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}
}  // namespace

WorkDistribution work_pmf(int l, double gamma, double sigma) {
    if (l < 0) throw std::invalid_argument("work_pmf needs l >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("work_pmf needs sigma > 0");

    WorkDistribution d;
    d.support_max = l;
    d.mean_param = gamma;
    d.spread_param = sigma;
    d.pmf.resize(l + 1);

    // Shift by the largest exponent so the weights stay representable.
    double max_exp = -std::numeric_limits<double>::infinity();
    for (int v = 0; v <= l; ++v) {
        double e = -(v - gamma) * (v - gamma) / (2.0 * sigma * sigma);
        d.pmf[v] = e;
        max_exp = std::max(max_exp, e);
    }
    double weight_sum = 0.0;
    for (int v = 0; v <= l; ++v) {
        d.pmf[v] = std::exp(d.pmf[v] - max_exp);
        weight_sum += d.pmf[v];
    }
    for (int v = 0; v <= l; ++v) d.pmf[v] /= weight_sum;

    // c = sum of true density values (with the Gaussian prefactor); equals
    // weight_sum * exp(max_exp) / sqrt(2 pi sigma^2).
    d.normalizer =
        weight_sum * std::exp(max_exp) / std::sqrt(kTwoPi * sigma * sigma);
    return d;
}

double SumDistribution::total_mass() const {
    double s = 0.0;
    for (double p : pmf) s += p;
    return s;
}

SumDistribution sum_distribution_exact(const std::vector<WorkDistribution>& dists) {
    if (dists.empty())
        throw std::invalid_argument("sum distribution needs >= 1 worker");
    SumDistribution s;
    s.method = SumDistribution::Method::exact_convolution;
    s.pmf = dists.front().pmf;
    for (std::size_t i = 1; i < dists.size(); ++i)
        s.pmf = convolve(s.pmf, dists[i].pmf);
    return s;
}

SumDistribution sum_distribution_gaussian(const std::vector<WorkDistribution>& dists) {
    if (dists.empty())
        throw std::invalid_argument("sum distribution needs >= 1 worker");
    SumDistribution s;
    s.method = SumDistribution::Method::gaussian_approx;
    long L = 0;
    double gamma_z = 0.0;
    double var_z = 0.0;
    for (const auto& d : dists) {
        L += d.support_max;
        gamma_z += d.mean_param / d.normalizer;
        var_z += d.spread_param * d.spread_param / (d.normalizer * d.normalizer);
    }
    s.gamma_z = gamma_z;
    s.sigma_z = std::sqrt(var_z);
    s.pmf.resize(L + 1);
    const double denom = std::sqrt(kTwoPi * var_z);
    for (long z = 0; z <= L; ++z)
        s.pmf[z] = std::exp(-(z - gamma_z) * (z - gamma_z) / (2.0 * var_z)) / denom;
    return s;
}

GaussianDiagnostics gaussian_diagnostics(const std::vector<WorkDistribution>& dists) {
    SumDistribution exact = sum_distribution_exact(dists);
    SumDistribution approx = sum_distribution_gaussian(dists);
    GaussianDiagnostics g;
    g.total_mass = approx.total_mass();
    double tv = 0.0;
    for (std::size_t z = 0; z < exact.pmf.size(); ++z)
        tv += std::abs(approx.pmf[z] - exact.pmf[z]);
    g.tv_distance = 0.5 * tv;
    g.mass_deviates = std::abs(g.total_mass - 1.0) > 1e-3;
    return g;
}

double completion_probability(const SumDistribution& sum, int k) {
    const long L = static_cast<long>(sum.pmf.size()) - 1;
    if (k < 0 || k > L + 1)
        throw std::invalid_argument("completion_probability needs 0 <= k <= L+1");
    double p = 0.0;
    for (long z = L; z >= k; --z) p += sum.pmf[z];
    return p;
}

double baseline_completion_probability(const std::vector<WorkDistribution>& dists,
                                       int k, int l) {
    if (dists.empty())
        throw std::invalid_argument("baseline needs >= 1 worker");
    std::vector<WorkDistribution> collapsed;
    collapsed.reserve(dists.size());
    for (const auto& d : dists) {
        if (d.support_max != l)
            throw std::invalid_argument(
                "baseline block count must match the distribution support");
        WorkDistribution c = d;
        std::fill(c.pmf.begin(), c.pmf.end(), 0.0);
        c.pmf[l] = d.pmf[l];
        c.pmf[0] = 1.0 - d.pmf[l];
        collapsed.push_back(std::move(c));
    }
    SumDistribution z = sum_distribution_exact(collapsed);
    if (k > static_cast<int>(z.pmf.size()) - 1) return 0.0;
    return completion_probability(z, k);
}

}  // namespace codedsim
