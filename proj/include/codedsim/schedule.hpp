#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace codedsim {

enum class OrderKind { column, row, diagonal, random };

const char* to_string(OrderKind k);
OrderKind order_kind_from_string(const std::string& s);

// The order in which a worker processes the r x r subtasks of its tile:
// a permutation of the tile-local coordinates (a, b), a, b in [0, r).
struct ScheduleOrder {
    OrderKind kind = OrderKind::column;
    int r = 1;
    std::vector<std::pair<int, int>> sequence;
};

// column:   (0,0),(1,0),...,(r-1,0),(0,1),...
// row:      transpose of column
// diagonal: wrapped diagonals, (i, (i+d) mod r) for d = 0..r-1, i = 0..r-1
// random:   uniform permutation drawn from `seed` (deterministic)
// Throws on r < 1.
ScheduleOrder make_order(OrderKind kind, int r, std::uint64_t seed = 0);

bool is_permutation(const ScheduleOrder& o);

}  // namespace codedsim
