#include "codedsim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "codedsim/product_grid.hpp"
#include "codedsim/rng.hpp"

namespace codedsim {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::product: return "product";
        case Scheme::multiple_mds: return "multiple_mds";
        case Scheme::single_mds: return "single_mds";
        case Scheme::vector_mds: return "vector_mds";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "product") return Scheme::product;
    if (s == "multiple_mds") return Scheme::multiple_mds;
    if (s == "single_mds") return Scheme::single_mds;
    if (s == "vector_mds") return Scheme::vector_mds;
    throw std::invalid_argument("unknown scheme: " + s);
}

LatencyModel LatencyModel::make_exponential(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("exponential model needs lambda > 0");
    LatencyModel m;
    m.kind = Kind::exponential;
    m.lambda = lambda;
    return m;
}

LatencyModel LatencyModel::make_deterministic(std::vector<double> times) {
    for (double t : times)
        if (t < 0.0) throw std::invalid_argument("negative worker time");
    LatencyModel m;
    m.kind = Kind::deterministic;
    m.worker_times = std::move(times);
    return m;
}

namespace {

int product_grid_n(int workers) {
    return static_cast<int>(std::floor(std::sqrt(double(workers))));
}

void validate(const SimParams& p) {
    if (p.workers < 1 || p.k < 1 || p.r < 1)
        throw std::invalid_argument("simulation needs N, k, r >= 1");
    switch (p.scheme) {
        case Scheme::product:
            if (product_grid_n(p.workers) < p.k)
                throw std::invalid_argument(
                    "product scheme needs floor(sqrt(N)) >= k");
            break;
        case Scheme::multiple_mds:
            if (p.workers % p.k != 0)
                throw std::invalid_argument("multiple-MDS scheme needs k | N");
            if (p.workers < p.k * p.k)
                throw std::invalid_argument(
                    "multiple-MDS scheme needs N >= k^2 for decodability");
            break;
        case Scheme::single_mds:
            if (p.workers < p.k * p.k)
                throw std::invalid_argument(
                    "single-MDS scheme needs N >= k^2 for decodability");
            break;
        case Scheme::vector_mds:
            throw std::invalid_argument(
                "vector_mds trials are run by the vector-matrix pipeline");
    }
}

// Shared geometry for the tile-structured schemes.
struct TileGeometry {
    int tile_rows = 0, tile_cols = 0;
    int active = 0;
    int rows = 0, cols = 0;
    bool rotate = false;  // multiple-MDS tile-column rotation by tile row
};

TileGeometry geometry(const SimParams& p) {
    TileGeometry g;
    if (p.scheme == Scheme::product) {
        int n = product_grid_n(p.workers);
        g.tile_rows = g.tile_cols = n;
        g.active = n * n;
        g.rows = g.cols = n * p.r;
    } else if (p.scheme == Scheme::multiple_mds) {
        g.tile_rows = p.workers / p.k;
        g.tile_cols = p.k;
        g.active = p.workers;
        g.rows = g.tile_rows * p.r;
        g.cols = p.k * p.r;
        g.rotate = true;
    }
    return g;
}

// Per-thread scratch; the trial loop allocates nothing once warmed up.
struct Workspace {
    std::vector<double> T;
    std::vector<double> buf;     // order-statistic scratch
    std::vector<int> colfill;
    std::vector<int> cell_of;    // flat symbol-array cell per (worker, pos)
    std::vector<int> order_flat;
    std::vector<std::pair<int, int>> perm;
    struct Ev {
        double t;
        int idx;
    };
    std::vector<Ev> events;
    PeelState peel{1, 1, 1};
    int peel_rows = -1, peel_cols = -1, peel_thr = -1;
    // Shape key guarding cell_of reuse.
    Scheme map_scheme{};
    int map_workers = -1, map_k = -1, map_r = -1;
    OrderKind map_order{};

    void ensure_peel(int rows, int cols, int thr) {
        if (rows != peel_rows || cols != peel_cols || thr != peel_thr) {
            peel = PeelState(rows, cols, thr);
            peel_rows = rows;
            peel_cols = cols;
            peel_thr = thr;
        } else {
            peel.reset();
        }
    }

    bool map_matches(const SimParams& p) const {
        return map_workers == p.workers && map_k == p.k && map_r == p.r &&
               map_scheme == p.scheme && map_order == p.order;
    }
    void remember_map(const SimParams& p) {
        map_scheme = p.scheme;
        map_workers = p.workers;
        map_k = p.k;
        map_r = p.r;
        map_order = p.order;
    }
};

// Flat cell of the j-th subtask of each active worker, for the shared
// (non-random) orders.
void build_cell_map(const SimParams& p, const TileGeometry& g, Workspace& ws) {
    const int r = p.r;
    const int R = r * r;
    ScheduleOrder base = make_order(
        p.order == OrderKind::random ? OrderKind::column : p.order, r);
    ws.order_flat.resize(R);
    for (int j = 0; j < R; ++j)
        ws.order_flat[j] = base.sequence[j].first * r + base.sequence[j].second;
    ws.cell_of.assign(static_cast<std::size_t>(g.active) * R, 0);
    for (int w = 0; w < g.active; ++w) {
        int tr = w / g.tile_cols;
        int tc = w % g.tile_cols;
        for (int j = 0; j < R; ++j) {
            int a = base.sequence[j].first;
            int b = base.sequence[j].second;
            if (g.rotate) b = (b + tr) % r;
            ws.cell_of[static_cast<std::size_t>(w) * R + j] =
                (tr * r + a) * g.cols + (tc * r + b);
        }
    }
}

// Per-worker independent permutations for order == random, fresh each trial.
void randomize_cell_map(const SimParams& p, const TileGeometry& g, Rng& rng,
                        Workspace& ws) {
    const int r = p.r;
    const int R = r * r;
    ws.perm.resize(R);
    for (int w = 0; w < g.active; ++w) {
        int tr = w / g.tile_cols;
        int tc = w % g.tile_cols;
        for (int j = 0; j < R; ++j)
            ws.perm[j] = {ws.order_flat[j] / r, ws.order_flat[j] % r};
        rng.shuffle(ws.perm);
        for (int j = 0; j < R; ++j) {
            int a = ws.perm[j].first;
            int b = ws.perm[j].second;
            if (g.rotate) b = (b + tr) % r;
            ws.cell_of[static_cast<std::size_t>(w) * R + j] =
                (tr * r + a) * g.cols + (tc * r + b);
        }
    }
}

// Finishing time given the sampled worker-time vector. `rng` is consumed
// only by per-worker random orders.
double run_trial_given_times(const SimParams& p, const std::vector<double>& T,
                             Rng& rng, Workspace& ws) {
    const int r = p.r;
    const int R = r * r;
    const int kr = p.k * r;

    if (p.scheme == Scheme::single_mds) {
        const long total = static_cast<long>(p.workers) * R;
        const long need = static_cast<long>(kr) * kr;
        ws.buf.resize(total);
        long out = 0;
        for (int w = 0; w < p.workers; ++w) {
            const double step = T[w] / R;
            for (int j = 1; j <= R; ++j) ws.buf[out++] = j * step;
        }
        std::nth_element(ws.buf.begin(), ws.buf.begin() + (need - 1), ws.buf.end());
        return ws.buf[need - 1];
    }

    TileGeometry g = geometry(p);
    if (!ws.map_matches(p)) {
        build_cell_map(p, g, ws);
        ws.remember_map(p);
    }
    if (p.order == OrderKind::random) randomize_cell_map(p, g, rng, ws);

    if (p.scheme == Scheme::multiple_mds) {
        // kr-th smallest arrival per column code, max over the kr codes.
        const int H = g.rows;
        ws.buf.resize(static_cast<std::size_t>(g.cols) * H);
        ws.colfill.assign(g.cols, 0);
        for (int w = 0; w < g.active; ++w) {
            const double step = T[w] / R;
            const int* cells = ws.cell_of.data() + static_cast<std::size_t>(w) * R;
            for (int j = 0; j < R; ++j) {
                int col = cells[j] % g.cols;
                ws.buf[static_cast<std::size_t>(col) * H + ws.colfill[col]++] =
                    (j + 1) * step;
            }
        }
        double worst = 0.0;
        for (int c = 0; c < g.cols; ++c) {
            double* begin = ws.buf.data() + static_cast<std::size_t>(c) * H;
            std::nth_element(begin, begin + (kr - 1), begin + H);
            worst = std::max(worst, begin[kr - 1]);
        }
        return worst;
    }

    // product: time-ordered events feeding the incremental peeling state.
    ws.events.resize(static_cast<std::size_t>(g.active) * R);
    std::size_t out = 0;
    for (int w = 0; w < g.active; ++w) {
        const double step = T[w] / R;
        for (int j = 0; j < R; ++j) ws.events[out++] = {(j + 1) * step, w * R + j};
    }
    std::sort(ws.events.begin(), ws.events.end(),
              [](const Workspace::Ev& a, const Workspace::Ev& b) {
                  if (a.t != b.t) return a.t < b.t;
                  return a.idx < b.idx;
              });
    ws.ensure_peel(g.rows, g.cols, kr);
    for (const auto& ev : ws.events) {
        int cell = ws.cell_of[ev.idx];
        if (ws.peel.add(cell / g.cols, cell % g.cols)) return ev.t;
    }
    return -1.0;  // full reception always decodes; kept as an explicit signal
}

void sample_times(const SimParams& p, const LatencyModel& model, Rng& rng,
                  std::vector<double>& T) {
    if (model.kind == LatencyModel::Kind::exponential) {
        T.resize(p.workers);
        for (int i = 0; i < p.workers; ++i) T[i] = rng.exponential(model.lambda);
    } else {
        if (static_cast<int>(model.worker_times.size()) != p.workers)
            throw std::invalid_argument(
                "deterministic model needs one time per worker");
        T = model.worker_times;
    }
}

template <typename WS, typename TrialFn>
void run_indexed_trials(long trials, int threads, std::vector<double>& vals,
                        const TrialFn& fn) {
    vals.resize(trials);
    threads = std::max(1, threads);
    if (threads == 1) {
        WS ws;
        for (long i = 0; i < trials; ++i) vals[i] = fn(i, ws);
        return;
    }
    std::atomic<long> next{0};
    constexpr long kChunk = 64;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            WS ws;
            while (true) {
                long begin = next.fetch_add(kChunk);
                if (begin >= trials) break;
                long end = std::min(trials, begin + kChunk);
                for (long i = begin; i < end; ++i) vals[i] = fn(i, ws);
            }
        });
    }
    for (auto& th : pool) th.join();
}

TrialStats reduce(const std::vector<double>& vals) {
    TrialStats st;
    st.trials = static_cast<long>(vals.size());
    double sum = 0.0;
    long bad = 0;
    for (double v : vals) {
        if (v < 0.0) {
            ++bad;
            continue;
        }
        sum += v;
    }
    const long good = st.trials - bad;
    st.undecodable_count = bad;
    if (good > 0) st.mean = sum / good;
    if (good > 1) {
        double ss = 0.0;
        for (double v : vals) {
            if (v < 0.0) continue;
            ss += (v - st.mean) * (v - st.mean);
        }
        st.standard_error = std::sqrt(ss / (good - 1)) / std::sqrt(double(good));
    }
    return st;
}

}  // namespace

CompletionTimeline simulate_trial(const SimParams& params,
                                  const LatencyModel& model,
                                  std::uint64_t seed) {
    validate(params);
    Workspace ws;
    Rng rng(derive_seed(seed, 0));
    sample_times(params, model, rng, ws.T);

    const int r = params.r;
    const int R = r * r;
    const int kr = params.k * r;

    CompletionTimeline tl;
    tl.scheme = params.scheme;

    TileGeometry g = geometry(params);
    int active;
    if (params.scheme == Scheme::single_mds) {
        // Degenerate labeling: worker index as row, position as column.
        active = params.workers;
        g.rows = params.workers;
        g.cols = R;
        g.tile_cols = 1;
        ws.cell_of.resize(static_cast<std::size_t>(active) * R);
        for (int w = 0; w < active; ++w)
            for (int j = 0; j < R; ++j)
                ws.cell_of[static_cast<std::size_t>(w) * R + j] = w * R + j;
    } else {
        active = g.active;
        build_cell_map(params, g, ws);
        ws.remember_map(params);
        if (params.order == OrderKind::random) randomize_cell_map(params, g, rng, ws);
    }

    tl.events.reserve(static_cast<std::size_t>(active) * R);
    for (int w = 0; w < active; ++w) {
        const double step = ws.T[w] / R;
        for (int j = 0; j < R; ++j) {
            int cell = ws.cell_of[static_cast<std::size_t>(w) * R + j];
            TimelineEvent ev;
            ev.time = (j + 1) * step;
            ev.worker = w;
            ev.subtask_pos = j;
            ev.cell_row = cell / g.cols;
            ev.cell_col = cell % g.cols;
            if (params.scheme == Scheme::single_mds) {
                ev.tile_a = j / r;
                ev.tile_b = j % r;
            } else {
                int tr = w / g.tile_cols;
                int tc = w % g.tile_cols;
                ev.tile_a = ev.cell_row - tr * r;
                ev.tile_b = ev.cell_col - tc * r;
            }
            tl.events.push_back(ev);
        }
    }
    std::sort(tl.events.begin(), tl.events.end(),
              [](const TimelineEvent& a, const TimelineEvent& b) {
                  if (a.time != b.time) return a.time < b.time;
                  if (a.worker != b.worker) return a.worker < b.worker;
                  return a.subtask_pos < b.subtask_pos;
              });

    tl.decodable = false;
    if (params.scheme == Scheme::product) {
        PeelState peel(g.rows, g.cols, kr);
        for (const auto& ev : tl.events) {
            if (peel.add(ev.cell_row, ev.cell_col)) {
                tl.finish_time = ev.time;
                tl.decodable = true;
                break;
            }
        }
    } else if (params.scheme == Scheme::multiple_mds) {
        std::vector<int> colcnt(g.cols, 0);
        int done = 0;
        for (const auto& ev : tl.events) {
            if (++colcnt[ev.cell_col] == kr) ++done;
            if (done == g.cols) {
                tl.finish_time = ev.time;
                tl.decodable = true;
                break;
            }
        }
    } else {
        const long need = static_cast<long>(kr) * kr;
        long got = 0;
        for (const auto& ev : tl.events) {
            if (++got == need) {
                tl.finish_time = ev.time;
                tl.decodable = true;
                break;
            }
        }
    }
    return tl;
}

TrialStats estimate_mean(const SimParams& params, const LatencyModel& model,
                         long trials, std::uint64_t master_seed, int threads) {
    validate(params);
    if (trials < 1) throw std::invalid_argument("estimate_mean needs trials >= 1");
    std::vector<double> vals;
    run_indexed_trials<Workspace>(
        trials, threads, vals, [&](long i, Workspace& ws) {
            Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
            sample_times(params, model, rng, ws.T);
            return run_trial_given_times(params, ws.T, rng, ws);
        });
    return reduce(vals);
}

TrialStats estimate_ratio_mean(const SimParams& numer, const SimParams& denom,
                               const LatencyModel& model, long trials,
                               std::uint64_t master_seed, int threads) {
    validate(numer);
    validate(denom);
    if (numer.workers != denom.workers)
        throw std::invalid_argument("ratio estimation needs a common worker count");
    if (trials < 1) throw std::invalid_argument("ratio needs trials >= 1");
    struct PairWs {
        Workspace a, b;
        std::vector<double> T;
    };
    std::vector<double> vals;
    run_indexed_trials<PairWs>(trials, threads, vals, [&](long i, PairWs& ws) {
        Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
        sample_times(numer, model, rng, ws.T);
        double fa = run_trial_given_times(numer, ws.T, rng, ws.a);
        double fb = run_trial_given_times(denom, ws.T, rng, ws.b);
        return fb > 0.0 ? fa / fb : -1.0;
    });
    return reduce(vals);
}

std::string sweep_csv_header() { return "scheme,N,k,r,order,trials,mean,stderr"; }

std::string sweep_csv_row(const SimParams& params, const TrialStats& stats) {
    std::ostringstream os;
    os << to_string(params.scheme) << ',' << params.workers << ',' << params.k
       << ',' << params.r << ',' << to_string(params.order) << ','
       << stats.trials << ',' << stats.mean << ',' << stats.standard_error;
    return os.str();
}

}  // namespace codedsim
