#include "codedsim/product_grid.hpp"

#include <sstream>
#include <stdexcept>

namespace codedsim {

TwoLevelPartition partition_columns(const Eigen::MatrixXd& M, int k, int r) {
    if (k < 1 || r < 1)
        throw std::invalid_argument("partition needs k >= 1 and r >= 1");
    const int q = static_cast<int>(M.cols());
    const int pieces = k * r;
    if (q % pieces != 0)
        throw std::invalid_argument("k*r must divide the matrix column count");
    const int w = q / pieces;
    TwoLevelPartition p;
    p.outer_k = k;
    p.inner_r = r;
    p.pieces.reserve(pieces);
    for (int i = 0; i < pieces; ++i) p.pieces.push_back(M.middleCols(i * w, w));
    return p;
}

long ErasurePattern::count() const {
    long c = 0;
    for (auto v : known) c += v;
    return c;
}

std::string pattern_to_text(const ErasurePattern& p) {
    std::string out;
    out.reserve(static_cast<std::size_t>(p.rows) * (p.cols + 1));
    for (int u = 0; u < p.rows; ++u) {
        for (int v = 0; v < p.cols; ++v) out += p.at(u, v) ? '1' : '0';
        out += '\n';
    }
    return out;
}

ErasurePattern pattern_from_text(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) lines.push_back(line);
    if (lines.empty()) throw std::invalid_argument("empty pattern text");
    ErasurePattern p(static_cast<int>(lines.size()),
                     static_cast<int>(lines[0].size()));
    for (int u = 0; u < p.rows; ++u) {
        if (static_cast<int>(lines[u].size()) != p.cols)
            throw std::invalid_argument("ragged pattern text");
        for (int v = 0; v < p.cols; ++v) {
            char c = lines[u][v];
            if (c != '0' && c != '1')
                throw std::invalid_argument("pattern text must be 0/1");
            p.set(u, v, c == '1');
        }
    }
    return p;
}

Eigen::MatrixXd CodedTaskGrid::cell(int u, int v) const {
    return coded_a[u].transpose() * coded_b[v];
}

CodedTaskGrid build_grid(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int n, int k, int r, std::uint64_t seed) {
    if (n < k) throw std::invalid_argument("build_grid needs n >= k");
    if (A.rows() != B.rows())
        throw std::invalid_argument("A and B must share the inner dimension d");
    TwoLevelPartition pa = partition_columns(A, k, r);
    TwoLevelPartition pb = partition_columns(B, k, r);

    CodedTaskGrid g;
    g.n = n;
    g.k = k;
    g.r = r;
    g.row_generator = make_systematic_generator(n * r, k * r, derive_seed(seed, 1));
    g.col_generator = make_systematic_generator(n * r, k * r, derive_seed(seed, 2));

    const int kr = k * r;
    const int side = n * r;
    g.coded_a.reserve(side);
    g.coded_b.reserve(side);
    for (int u = 0; u < side; ++u) {
        Eigen::MatrixXd acc =
            Eigen::MatrixXd::Zero(pa.pieces[0].rows(), pa.pieces[0].cols());
        for (int p = 0; p < kr; ++p)
            acc.noalias() += g.row_generator.entries(u, p) * pa.pieces[p];
        g.coded_a.push_back(std::move(acc));
    }
    for (int v = 0; v < side; ++v) {
        Eigen::MatrixXd acc =
            Eigen::MatrixXd::Zero(pb.pieces[0].rows(), pb.pieces[0].cols());
        for (int s = 0; s < kr; ++s)
            acc.noalias() += g.col_generator.entries(v, s) * pb.pieces[s];
        g.coded_b.push_back(std::move(acc));
    }
    return g;
}

PeelState::PeelState(int rows, int cols, int threshold)
    : rows_(rows), cols_(cols), threshold_(threshold),
      total_(static_cast<long>(rows) * cols),
      known_(static_cast<std::size_t>(rows) * cols, 0),
      row_cnt_(rows, 0), col_cnt_(cols, 0),
      row_done_(rows, 0), col_done_(cols, 0) {
    pending_rows_.reserve(rows);
    pending_cols_.reserve(cols);
}

void PeelState::reset() {
    std::fill(known_.begin(), known_.end(), 0);
    std::fill(row_cnt_.begin(), row_cnt_.end(), 0);
    std::fill(col_cnt_.begin(), col_cnt_.end(), 0);
    std::fill(row_done_.begin(), row_done_.end(), 0);
    std::fill(col_done_.begin(), col_done_.end(), 0);
    pending_rows_.clear();
    pending_cols_.clear();
    known_total_ = 0;
}

void PeelState::complete_row(int u) {
    row_done_[u] = 1;
    std::uint8_t* base = known_.data() + static_cast<std::size_t>(u) * cols_;
    for (int v = 0; v < cols_; ++v) {
        if (base[v]) continue;
        base[v] = 1;
        ++known_total_;
        ++row_cnt_[u];
        if (++col_cnt_[v] >= threshold_ && !col_done_[v]) pending_cols_.push_back(v);
    }
}

void PeelState::complete_col(int v) {
    col_done_[v] = 1;
    for (int u = 0; u < rows_; ++u) {
        std::uint8_t& cell = known_[static_cast<std::size_t>(u) * cols_ + v];
        if (cell) continue;
        cell = 1;
        ++known_total_;
        ++col_cnt_[v];
        if (++row_cnt_[u] >= threshold_ && !row_done_[u]) pending_rows_.push_back(u);
    }
}

void PeelState::drain() {
    while (!pending_rows_.empty() || !pending_cols_.empty()) {
        if (!pending_rows_.empty()) {
            int u = pending_rows_.back();
            pending_rows_.pop_back();
            if (!row_done_[u]) complete_row(u);
        } else {
            int v = pending_cols_.back();
            pending_cols_.pop_back();
            if (!col_done_[v]) complete_col(v);
        }
    }
}

bool PeelState::add(int u, int v) {
    std::uint8_t& cell = known_[static_cast<std::size_t>(u) * cols_ + v];
    if (!cell) {
        cell = 1;
        ++known_total_;
        if (++row_cnt_[u] >= threshold_ && !row_done_[u]) pending_rows_.push_back(u);
        if (++col_cnt_[v] >= threshold_ && !col_done_[v]) pending_cols_.push_back(v);
        drain();
    }
    return complete();
}

ErasurePattern PeelState::closure() const {
    ErasurePattern p(rows_, cols_);
    p.known = known_;
    return p;
}

PeelOutcome peel_decodable(const ErasurePattern& pattern, int kr) {
    if (kr > pattern.rows || kr > pattern.cols)
        throw std::invalid_argument("kr exceeds the pattern dimensions");
    PeelState st(pattern.rows, pattern.cols, kr);
    for (int u = 0; u < pattern.rows; ++u)
        for (int v = 0; v < pattern.cols; ++v)
            if (pattern.at(u, v)) st.add(u, v);
    PeelOutcome out;
    out.decodable = st.complete();
    out.recoverable = st.closure();
    return out;
}

namespace {

// Solves the component-code system for one grid line: given `have` known
// (position, value) pairs along the line (>= kr of them), recovers the kr
// source symbols and re-expands the full line of n*r cells.
std::vector<Eigen::MatrixXd> recover_line(
    const Eigen::MatrixXd& gen,  // (n*r) x (kr)
    const std::vector<std::pair<int, const Eigen::MatrixXd*>>& have) {
    const int kr = static_cast<int>(gen.cols());
    const int len = static_cast<int>(gen.rows());
    const long cell_rows = have[0].second->rows();
    const long cell_cols = have[0].second->cols();
    const long flat = cell_rows * cell_cols;

    Eigen::MatrixXd sub(kr, kr);
    Eigen::MatrixXd rhs(kr, flat);
    for (int t = 0; t < kr; ++t) {
        sub.row(t) = gen.row(have[t].first);
        rhs.row(t) = Eigen::Map<const Eigen::RowVectorXd>(have[t].second->data(), flat);
    }
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
        const auto& sv = svd.singularValues();
        if (!(sv(0) > 0.0) || sv(kr - 1) <= kSubsetSingularRatio * sv(0))
            throw std::runtime_error("numerically singular sub-generator in peeling");
    }
    Eigen::MatrixXd sources = Eigen::PartialPivLU<Eigen::MatrixXd>(sub).solve(rhs);

    Eigen::MatrixXd expanded = gen * sources;  // len x flat
    std::vector<Eigen::MatrixXd> line(len);
    for (int u = 0; u < len; ++u) {
        Eigen::VectorXd flatrow = expanded.row(u).transpose();
        line[u] = Eigen::Map<const Eigen::MatrixXd>(flatrow.data(), cell_rows,
                                                    cell_cols);
    }
    return line;
}

}  // namespace

Eigen::MatrixXd peel_decode(
    const CodedTaskGrid& grid,
    const std::map<std::pair<int, int>, Eigen::MatrixXd>& received) {
    const int side = grid.side();
    const int kr = grid.k * grid.r;

    ErasurePattern pattern(side, side);
    for (const auto& [cell, value] : received) {
        auto [u, v] = cell;
        if (u < 0 || u >= side || v < 0 || v >= side)
            throw std::invalid_argument("received cell out of range");
        (void)value;
        pattern.set(u, v);
    }
    if (!peel_decodable(pattern, kr).decodable)
        throw std::invalid_argument("pattern is not peeling-decodable");

    std::vector<std::vector<Eigen::MatrixXd>> cells(
        side, std::vector<Eigen::MatrixXd>(side));
    std::vector<std::uint8_t> known(static_cast<std::size_t>(side) * side, 0);
    std::vector<int> row_cnt(side, 0), col_cnt(side, 0);
    std::vector<std::uint8_t> row_done(side, 0), col_done(side, 0);
    for (const auto& [cell, value] : received) {
        auto [u, v] = cell;
        auto idx = static_cast<std::size_t>(u) * side + v;
        if (known[idx]) continue;
        known[idx] = 1;
        cells[u][v] = value;
        ++row_cnt[u];
        ++col_cnt[v];
    }

    // Peel to fixpoint, recovering numeric values line by line.
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (int u = 0; u < side; ++u) {
            if (row_done[u] || row_cnt[u] < kr) continue;
            std::vector<std::pair<int, const Eigen::MatrixXd*>> have;
            for (int v = 0; v < side && static_cast<int>(have.size()) < kr; ++v)
                if (known[static_cast<std::size_t>(u) * side + v])
                    have.emplace_back(v, &cells[u][v]);
            auto line = recover_line(grid.col_generator.entries, have);
            for (int v = 0; v < side; ++v) {
                auto idx = static_cast<std::size_t>(u) * side + v;
                cells[u][v] = std::move(line[v]);
                if (!known[idx]) {
                    known[idx] = 1;
                    ++row_cnt[u];
                    ++col_cnt[v];
                }
            }
            row_done[u] = 1;
            progressed = true;
        }
        for (int v = 0; v < side; ++v) {
            if (col_done[v] || col_cnt[v] < kr) continue;
            std::vector<std::pair<int, const Eigen::MatrixXd*>> have;
            for (int u = 0; u < side && static_cast<int>(have.size()) < kr; ++u)
                if (known[static_cast<std::size_t>(u) * side + v])
                    have.emplace_back(u, &cells[u][v]);
            auto line = recover_line(grid.row_generator.entries, have);
            for (int u = 0; u < side; ++u) {
                auto idx = static_cast<std::size_t>(u) * side + v;
                cells[u][v] = std::move(line[u]);
                if (!known[idx]) {
                    known[idx] = 1;
                    ++row_cnt[u];
                    ++col_cnt[v];
                }
            }
            col_done[v] = 1;
            progressed = true;
        }
    }

    const long piece = cells[0][0].rows();
    Eigen::MatrixXd result(piece * kr, piece * kr);
    for (int p = 0; p < kr; ++p)
        for (int s = 0; s < kr; ++s) {
            if (!known[static_cast<std::size_t>(p) * side + s])
                throw std::runtime_error("systematic corner not recovered");
            result.block(p * piece, s * piece, piece, piece) = cells[p][s];
        }
    return result;
}

bool multiple_mds_decodable(const ErasurePattern& pattern, int kr) {
    std::vector<int> col_cnt(pattern.cols, 0);
    for (int u = 0; u < pattern.rows; ++u)
        for (int v = 0; v < pattern.cols; ++v)
            if (pattern.at(u, v)) ++col_cnt[v];
    for (int v = 0; v < pattern.cols; ++v)
        if (col_cnt[v] < kr) return false;
    return true;
}

bool single_mds_decodable(long received_count, int k, int r) {
    const long need = static_cast<long>(k) * r * k * r;
    return received_count >= need;
}

}  // namespace codedsim
