#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "codedsim/generator.hpp"

namespace codedsim {

// A into k equal row blocks, each (m/k) x q. Blocks stacked in order give
// back the original matrix.
struct PartitionedMatrix {
    std::vector<Eigen::MatrixXd> blocks;
    int original_rows = 0;
    int original_cols = 0;

    int block_count() const { return static_cast<int>(blocks.size()); }
};

// Throws if k does not divide A's row count.
PartitionedMatrix partition_rows(const Eigen::MatrixXd& A, int k);

Eigen::MatrixXd unpartition(const PartitionedMatrix& p);

// L coded blocks, block i = sum_j g_ij A_j.
struct CodedBlockSet {
    std::vector<Eigen::MatrixXd> blocks;
    GeneratorMatrix generator;
};

// Block-wise encoding equivalent to (G (x) I_{m/k}) A without materializing
// the Kronecker matrix. Throws on G.cols() != partition count.
CodedBlockSet encode(const PartitionedMatrix& A, const GeneratorMatrix& G);

// One received sub-computation: 1-based coded-block index plus the payload
// w_i = A-bar_i x.
using ReceivedBlock = std::pair<int, Eigen::VectorXd>;

// Recovers y = A x from exactly k received blocks with distinct indices.
// Solves the k x k system G(I) S = W with partial pivoting, applied
// column-wise across the m/k payload entries. Throws on duplicate indices,
// wrong count, out-of-range indices, payload size mismatch, or a
// numerically singular G(I).
Eigen::VectorXd decode(const std::vector<ReceivedBlock>& received,
                       const GeneratorMatrix& G);

}  // namespace codedsim
