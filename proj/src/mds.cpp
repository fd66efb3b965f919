#include "codedsim/mds.hpp"

#include <set>
#include <stdexcept>

namespace codedsim {

PartitionedMatrix partition_rows(const Eigen::MatrixXd& A, int k) {
    if (k < 1) throw std::invalid_argument("partition needs k >= 1");
    const int m = static_cast<int>(A.rows());
    if (m % k != 0)
        throw std::invalid_argument("k must divide the matrix row count");
    const int rows_per_block = m / k;
    PartitionedMatrix p;
    p.original_rows = m;
    p.original_cols = static_cast<int>(A.cols());
    p.blocks.reserve(k);
    for (int i = 0; i < k; ++i)
        p.blocks.push_back(A.middleRows(i * rows_per_block, rows_per_block));
    return p;
}

Eigen::MatrixXd unpartition(const PartitionedMatrix& p) {
    Eigen::MatrixXd A(p.original_rows, p.original_cols);
    int row = 0;
    for (const auto& b : p.blocks) {
        A.middleRows(row, b.rows()) = b;
        row += static_cast<int>(b.rows());
    }
    return A;
}

CodedBlockSet encode(const PartitionedMatrix& A, const GeneratorMatrix& G) {
    const int k = G.cols();
    if (A.block_count() != k)
        throw std::invalid_argument(
            "generator column count must equal the partition block count");
    const int L = G.rows();
    CodedBlockSet out;
    out.generator = G;
    out.blocks.reserve(L);
    for (int i = 0; i < L; ++i) {
        Eigen::MatrixXd acc =
            Eigen::MatrixXd::Zero(A.blocks[0].rows(), A.blocks[0].cols());
        for (int j = 0; j < k; ++j) acc.noalias() += G.entries(i, j) * A.blocks[j];
        out.blocks.push_back(std::move(acc));
    }
    return out;
}

Eigen::VectorXd decode(const std::vector<ReceivedBlock>& received,
                       const GeneratorMatrix& G) {
    const int k = G.cols();
    const int L = G.rows();
    if (static_cast<int>(received.size()) != k)
        throw std::invalid_argument("decode needs exactly k received blocks");

    std::set<int> seen;
    for (const auto& [idx, payload] : received) {
        if (idx < 1 || idx > L)
            throw std::invalid_argument("received block index out of range");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("received block indices must be distinct");
        if (payload.size() != received.front().second.size())
            throw std::invalid_argument("received payload sizes differ");
    }

    const int seg = static_cast<int>(received.front().second.size());

    Eigen::MatrixXd sub(k, k);   // G(I), rows in received order
    Eigen::MatrixXd w(k, seg);   // payloads as rows
    for (int i = 0; i < k; ++i) {
        sub.row(i) = G.entries.row(received[i].first - 1);
        w.row(i) = received[i].second.transpose();
    }

    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
        const auto& sv = svd.singularValues();
        if (!(sv(0) > 0.0) || sv(k - 1) <= kSubsetSingularRatio * sv(0))
            throw std::runtime_error(
                "received subset of generator rows is numerically singular; "
                "generator invariant violated");
    }

    // Solve G(I) S = W; row j of S is segment j of y, applied to all seg
    // payload columns at once.
    Eigen::MatrixXd segments = Eigen::PartialPivLU<Eigen::MatrixXd>(sub).solve(w);

    Eigen::VectorXd y(static_cast<long>(k) * seg);
    for (int j = 0; j < k; ++j) y.segment(static_cast<long>(j) * seg, seg) = segments.row(j).transpose();
    return y;
}

}  // namespace codedsim
