#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codedsim/mds.hpp"

namespace codedsim {

// Worker i's coded-block indices (1-based into [1, L]), in processing order.
struct WorkerAssignment {
    int worker_id = 0;  // 1-based
    std::vector<int> block_indices;
};

// Contiguous assignment: worker i gets (i-1)L/n+1 .. iL/n. Requires n | L
// and L/n >= 2.
std::vector<WorkerAssignment> assign_blocks(int n, int L);

// Outcome of one simulated vector-matrix trial. An undecodable trial (fewer
// than k events) is reported explicitly, never dropped.
struct VmTrialResult {
    bool decodable = false;
    Eigen::VectorXd result;        // y = A x when decodable
    double completion_time = 0.0;  // time of the k-th distinct block arrival
    std::vector<int> blocks_used;  // the first k distinct indices, sorted
};

// Runs the sequential per-block completion model: worker i's j-th assigned
// block arrives at worker_times[i][j]. Events are merged in (time,
// worker_id, block_index) order; decoding uses the first k distinct block
// indices. worker_times[i] must be nondecreasing with length l_i.
VmTrialResult run_trial(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                        const GeneratorMatrix& G,
                        const std::vector<WorkerAssignment>& assignments,
                        const std::vector<std::vector<double>>& worker_times);

// CSV row "trial_id,completion_time,blocks_used" with blocks separated by
// '|' (undecodable trials carry an empty block list and completion time -1).
std::string trial_csv_row(int trial_id, const VmTrialResult& r);

}  // namespace codedsim
