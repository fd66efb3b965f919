#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codedsim/schedule.hpp"

namespace codedsim {

enum class Scheme { product, multiple_mds, single_mds, vector_mds };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Worker speed model. Subtask j (1-based) of worker i finishes at
// j * T_i / R where R = r^2 and T_i is the worker's total time, either
// exp(lambda)-sampled per trial or given explicitly.
struct LatencyModel {
    enum class Kind { exponential, deterministic };
    Kind kind = Kind::exponential;
    double lambda = 1.0;
    std::vector<double> worker_times;

    static LatencyModel make_exponential(double lambda);
    static LatencyModel make_deterministic(std::vector<double> times);
};

struct SimParams {
    Scheme scheme = Scheme::single_mds;
    int workers = 0;  // N
    int k = 0;
    int r = 1;
    OrderKind order = OrderKind::diagonal;
};

struct TimelineEvent {
    double time = 0.0;
    int worker = 0;       // 0-based
    int subtask_pos = 0;  // 0-based position in the worker's processing order
    int tile_a = 0, tile_b = 0;  // tile-local coordinate
    int cell_row = 0, cell_col = 0;  // global symbol-array cell
};

struct CompletionTimeline {
    Scheme scheme = Scheme::single_mds;
    std::vector<TimelineEvent> events;  // time-sorted, ties by (worker, pos)
    double finish_time = 0.0;
    bool decodable = false;
};

struct TrialStats {
    long trials = 0;
    double mean = 0.0;
    double standard_error = 0.0;
    long undecodable_count = 0;
};

// One event-driven trial: orders each worker's subtasks, merges all events
// in (time, worker, position) order and reports the first instant the
// scheme's decodability predicate holds (incremental peeling for the
// product scheme). Throws on invalid parameters; vector_mds trials live in
// the vector-matrix pipeline, not here.
//
// Scheme layouts
//   product:      n = floor(sqrt(N)) with n >= k; n^2 active workers own
//                 r x r tiles of the (n r) x (n r) product grid; the
//                 remaining workers idle.
//   multiple_mds: requires k | N and N >= k^2; worker w owns the r x r
//                 tile (w / k, w % k) of the (N/k * r) x (k r) array with
//                 its tile-local column roles rotated by the tile row, so
//                 every column code sees a balanced mix of early and late
//                 subtask positions.
//   single_mds:   any worker/subtask mapping; decodable at (k r)^2 symbols.
//
// For order == random each worker draws an independent permutation per
// trial (derived from `seed`); other kinds share the canonical order.
CompletionTimeline simulate_trial(const SimParams& params,
                                  const LatencyModel& model,
                                  std::uint64_t seed);

// Monte Carlo mean of the finishing time over independent trials with
// per-trial seeds derived from `master_seed`. Aggregation is in trial-index
// order, so the result is identical for any thread count.
TrialStats estimate_mean(const SimParams& params, const LatencyModel& model,
                         long trials, std::uint64_t master_seed,
                         int threads = 1);

// Mean of the per-trial ratio finish(numer) / finish(denom) under common
// random numbers: each trial samples one worker-time vector and feeds both
// parameter sets. Both must agree on worker count.
TrialStats estimate_ratio_mean(const SimParams& numer, const SimParams& denom,
                               const LatencyModel& model, long trials,
                               std::uint64_t master_seed, int threads = 1);

// CSV helpers for the per-sweep output:
// scheme,N,k,r,order,trials,mean,stderr
std::string sweep_csv_header();
std::string sweep_csv_row(const SimParams& params, const TrialStats& stats);

}  // namespace codedsim
