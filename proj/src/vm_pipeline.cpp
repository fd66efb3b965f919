#include "codedsim/vm_pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace codedsim {

std::vector<WorkerAssignment> assign_blocks(int n, int L) {
    if (n < 1) throw std::invalid_argument("assign_blocks needs n >= 1");
    if (L % n != 0)
        throw std::invalid_argument("contiguous policy needs n to divide L");
    const int per = L / n;
    if (per < 2)
        throw std::invalid_argument("each worker needs more than one block");
    std::vector<WorkerAssignment> out(n);
    for (int i = 0; i < n; ++i) {
        out[i].worker_id = i + 1;
        out[i].block_indices.resize(per);
        for (int j = 0; j < per; ++j) out[i].block_indices[j] = i * per + j + 1;
    }
    return out;
}

VmTrialResult run_trial(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                        const GeneratorMatrix& G,
                        const std::vector<WorkerAssignment>& assignments,
                        const std::vector<std::vector<double>>& worker_times) {
    const int k = G.cols();
    if (worker_times.size() != assignments.size())
        throw std::invalid_argument("one finish-time sequence per worker required");

    struct Event {
        double time;
        int worker_id;
        int block_index;
    };
    std::vector<Event> events;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto& asg = assignments[i];
        const auto& times = worker_times[i];
        if (times.size() != asg.block_indices.size())
            throw std::invalid_argument(
                "finish-time sequence length must match the block count");
        for (std::size_t j = 0; j + 1 < times.size(); ++j)
            if (times[j + 1] < times[j])
                throw std::invalid_argument("finish times must be nondecreasing");
        for (std::size_t j = 0; j < times.size(); ++j)
            events.push_back({times[j], asg.worker_id, asg.block_indices[j]});
    }

    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.worker_id != b.worker_id) return a.worker_id < b.worker_id;
        return a.block_index < b.block_index;
    });

    const Eigen::VectorXd coded_all = [&] {
        // Payload for block i is A-bar_i x; computing A x block products via
        // the encoded set keeps the trial independent of decode().
        PartitionedMatrix part = partition_rows(A, k);
        CodedBlockSet coded = encode(part, G);
        Eigen::VectorXd all(static_cast<long>(G.rows()) * (A.rows() / k));
        for (int i = 0; i < G.rows(); ++i)
            all.segment(static_cast<long>(i) * (A.rows() / k), A.rows() / k) =
                coded.blocks[i] * x;
        return all;
    }();
    const int seg = static_cast<int>(A.rows()) / k;

    VmTrialResult out;
    std::set<int> distinct;
    std::vector<ReceivedBlock> first_k;
    for (const Event& e : events) {
        if (distinct.insert(e.block_index).second) {
            first_k.emplace_back(
                e.block_index,
                coded_all.segment(static_cast<long>(e.block_index - 1) * seg, seg));
            if (static_cast<int>(first_k.size()) == k) {
                out.completion_time = e.time;
                break;
            }
        }
    }
    if (static_cast<int>(first_k.size()) < k) {
        out.decodable = false;
        out.completion_time = -1.0;
        return out;
    }
    out.decodable = true;
    out.result = decode(first_k, G);
    for (const auto& [idx, payload] : first_k) out.blocks_used.push_back(idx);
    std::sort(out.blocks_used.begin(), out.blocks_used.end());
    return out;
}

std::string trial_csv_row(int trial_id, const VmTrialResult& r) {
    std::ostringstream os;
    os << trial_id << ',' << r.completion_time << ',';
    for (std::size_t i = 0; i < r.blocks_used.size(); ++i) {
        if (i) os << '|';
        os << r.blocks_used[i];
    }
    return os.str();
}

}  // namespace codedsim
