#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace codedsim {

// Relative singular-value threshold below which a square row subset is
// treated as singular.
inline constexpr double kSubsetSingularRatio = 1e-9;

// Real-valued L x k generator with the property that every k x k matrix
// formed from k of its rows is invertible. Over the reals this holds almost
// surely for i.i.d. Gaussian entries; it is certified numerically at
// construction time.
struct GeneratorMatrix {
    Eigen::MatrixXd entries;  // L x k
    std::uint64_t seed = 0;

    int rows() const { return static_cast<int>(entries.rows()); }  // L
    int cols() const { return static_cast<int>(entries.cols()); }  // k
};

// Checks the row-subset invertibility invariant. Exhaustive over all
// C(L, k) subsets when that count is <= 10^4, otherwise over 10^3 random
// subsets drawn from `check_seed`. Reports the worst sigma_min/sigma_max
// ratio seen if `worst_ratio` is non-null.
bool generator_subsets_invertible(const Eigen::MatrixXd& entries,
                                  std::uint64_t check_seed = 0,
                                  double* worst_ratio = nullptr);

// Samples an L x k generator with i.i.d. standard normal entries,
// resampling with an incremented sub-seed until the subset invariant
// certifies. Deterministic in (L, k, seed). Throws std::invalid_argument
// for L < k or k < 1 and std::runtime_error after 100 failed attempts.
GeneratorMatrix make_generator(int L, int k, std::uint64_t seed);

// Same, but the top k rows are the identity (systematic code). The random
// part covers rows k+1..L; the subset invariant is certified for the whole
// matrix.
GeneratorMatrix make_systematic_generator(int L, int k, std::uint64_t seed);

// JSON document {L, k, seed, entries: row-major array}.
nlohmann::json generator_to_json(const GeneratorMatrix& g);
GeneratorMatrix generator_from_json(const nlohmann::json& j);

std::string generator_to_json_string(const GeneratorMatrix& g);
GeneratorMatrix generator_from_json_string(const std::string& text);

}  // namespace codedsim
