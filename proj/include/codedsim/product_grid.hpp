#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "codedsim/generator.hpp"

namespace codedsim {

// Two-level column decomposition of a d x q matrix: k outer pieces, each
// split into r inner pieces, giving k*r sub-matrices of size d x q/(k*r).
struct TwoLevelPartition {
    int outer_k = 0;
    int inner_r = 0;
    std::vector<Eigen::MatrixXd> pieces;  // k*r pieces, in order
};

// Throws unless k*r divides q.
TwoLevelPartition partition_columns(const Eigen::MatrixXd& M, int k, int r);

// Boolean receive pattern over a rows x cols symbol array. Square
// (side = n*r) in product-code use; rectangular for the multiple-MDS array.
struct ErasurePattern {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> known;

    ErasurePattern() = default;
    ErasurePattern(int rows_, int cols_)
        : rows(rows_), cols(cols_),
          known(static_cast<std::size_t>(rows_) * cols_, 0) {}

    bool at(int u, int v) const {
        return known[static_cast<std::size_t>(u) * cols + v] != 0;
    }
    void set(int u, int v, bool val = true) {
        known[static_cast<std::size_t>(u) * cols + v] = val ? 1 : 0;
    }
    long count() const;
};

// Text form: one line of '0'/'1' per row.
std::string pattern_to_text(const ErasurePattern& p);
ErasurePattern pattern_from_text(const std::string& text);

// The (n*r) x (n*r) product-coded sub-computation array for A^T B. Cell
// (u, v) represents Atilde_u^T Btilde_v where the coded pieces are linear
// combinations of the two-level partition pieces under systematic
// (n*r) x (k*r) generators. Worker w in [0, n^2) owns the r x r tile with
// origin (w / n * r, w % n * r).
struct CodedTaskGrid {
    int n = 0;
    int k = 0;
    int r = 0;
    GeneratorMatrix row_generator;  // codes the u (A) dimension
    GeneratorMatrix col_generator;  // codes the v (B) dimension
    std::vector<Eigen::MatrixXd> coded_a;  // Atilde_u, u in [0, n*r)
    std::vector<Eigen::MatrixXd> coded_b;  // Btilde_v, v in [0, n*r)

    int side() const { return n * r; }
    int worker_count() const { return n * n; }
    int tile_cells() const { return r * r; }
    std::pair<int, int> tile_origin(int worker) const {
        return {(worker / n) * r, (worker % n) * r};
    }

    // The sub-computation at cell (u, v), a q/(kr) x q/(kr) matrix.
    Eigen::MatrixXd cell(int u, int v) const;
};

// Builds the coded grid. Generators are systematic (top k*r rows are the
// identity), so the top-left (kr) x (kr) corner holds the raw products
// A_ia^T B_jb. Throws unless k*r divides q and n >= k.
CodedTaskGrid build_grid(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int n, int k, int r, std::uint64_t seed);

// Incremental peeling closure over a rows x cols pattern: any row or column
// reaching `threshold` known cells becomes fully known, repeated to
// fixpoint. Feed cells one at a time; the closure is maintained after every
// insertion in amortized O(1) per recovered cell.
class PeelState {
public:
    PeelState(int rows, int cols, int threshold);

    void reset();

    // Marks (u, v) received. Returns true iff the whole array is known
    // after cascading. Already-known cells are ignored.
    bool add(int u, int v);

    bool complete() const { return known_total_ == total_; }
    long known_count() const { return known_total_; }
    bool cell_known(int u, int v) const {
        return known_[static_cast<std::size_t>(u) * cols_ + v] != 0;
    }

    ErasurePattern closure() const;

private:
    void complete_row(int u);
    void complete_col(int v);
    void drain();

    int rows_, cols_, threshold_;
    long total_, known_total_ = 0;
    std::vector<std::uint8_t> known_;
    std::vector<int> row_cnt_, col_cnt_;
    std::vector<std::uint8_t> row_done_, col_done_;
    std::vector<int> pending_rows_, pending_cols_;
};

struct PeelOutcome {
    bool decodable = false;
    ErasurePattern recoverable;  // peeling closure of the input pattern
};

// Fixpoint peeling decodability: true iff the closure covers the whole grid
// (equivalently the systematic (kr) x (kr) corner). Total function.
PeelOutcome peel_decodable(const ErasurePattern& pattern, int kr);

// Numeric peeling decode: executes the peeling schedule with each row or
// column recovery an MDS linear solve on matrix-valued cells, then
// assembles A^T B (q x q) from the systematic corner. Throws if the pattern
// implied by `received` is not peeling-decodable.
Eigen::MatrixXd peel_decode(
    const CodedTaskGrid& grid,
    const std::map<std::pair<int, int>, Eigen::MatrixXd>& received);

// Multiple-MDS decodability: the array is (N/k * r) x (k*r), one
// independent column code per column; true iff every column has at least
// k*r known symbols.
bool multiple_mds_decodable(const ErasurePattern& pattern, int kr);

// Single-MDS decodability over the (N r^2, (k r)^2) code.
bool single_mds_decodable(long received_count, int k, int r);

}  // namespace codedsim
