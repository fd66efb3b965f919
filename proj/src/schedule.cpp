#include "codedsim/schedule.hpp"

#include <stdexcept>

#include "codedsim/rng.hpp"

namespace codedsim {

const char* to_string(OrderKind k) {
    switch (k) {
        case OrderKind::column: return "column";
        case OrderKind::row: return "row";
        case OrderKind::diagonal: return "diagonal";
        case OrderKind::random: return "random";
    }
    return "?";
}

OrderKind order_kind_from_string(const std::string& s) {
    if (s == "column") return OrderKind::column;
    if (s == "row") return OrderKind::row;
    if (s == "diagonal") return OrderKind::diagonal;
    if (s == "random") return OrderKind::random;
    throw std::invalid_argument("unknown order kind: " + s);
}

ScheduleOrder make_order(OrderKind kind, int r, std::uint64_t seed) {
    if (r < 1) throw std::invalid_argument("order needs r >= 1");
    ScheduleOrder o;
    o.kind = kind;
    o.r = r;
    o.sequence.reserve(static_cast<std::size_t>(r) * r);
    switch (kind) {
        case OrderKind::column:
            for (int b = 0; b < r; ++b)
                for (int a = 0; a < r; ++a) o.sequence.emplace_back(a, b);
            break;
        case OrderKind::row:
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) o.sequence.emplace_back(a, b);
            break;
        case OrderKind::diagonal:
            for (int d = 0; d < r; ++d)
                for (int i = 0; i < r; ++i) o.sequence.emplace_back(i, (i + d) % r);
            break;
        case OrderKind::random: {
            for (int b = 0; b < r; ++b)
                for (int a = 0; a < r; ++a) o.sequence.emplace_back(a, b);
            Rng rng(derive_seed(seed, 0x06de));
            rng.shuffle(o.sequence);
            break;
        }
    }
    return o;
}

bool is_permutation(const ScheduleOrder& o) {
    const int r = o.r;
    if (static_cast<int>(o.sequence.size()) != r * r) return false;
    std::vector<char> seen(static_cast<std::size_t>(r) * r, 0);
    for (auto [a, b] : o.sequence) {
        if (a < 0 || a >= r || b < 0 || b >= r) return false;
        auto idx = static_cast<std::size_t>(a) * r + b;
        if (seen[idx]) return false;
        seen[idx] = 1;
    }
    return true;
}

}  // namespace codedsim
