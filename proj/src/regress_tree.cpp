#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "acbench/regressors.hpp"

namespace acbench::regress::detail {

namespace {

constexpr size_t kMinLeaf = 3;
constexpr size_t kMinSplit = 6;

struct BuildNode {
    std::vector<size_t> rows;
    double mean = 0.0;
    double sse = 0.0;
    int depth = 0;
};

void node_stats(const std::vector<double>& y, BuildNode& node) {
    double sum = 0.0;
    for (const size_t r : node.rows) sum += y[r];
    node.mean = sum / static_cast<double>(node.rows.size());
    double sse = 0.0;
    for (const size_t r : node.rows) {
        const double d = y[r] - node.mean;
        sse += d * d;
    }
    node.sse = sse;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double child_sse = 0.0;  // SSE(left) + SSE(right)
};

/// Best variance-reduction split; ties resolve to the lowest feature index,
/// then the lowest threshold, keeping training deterministic.
std::optional<Split> best_split(const std::vector<FeatureVector>& x,
                                const std::vector<double>& y, const BuildNode& node) {
    const size_t n = node.rows.size();
    if (n < kMinSplit || node.sse <= 0.0) return std::nullopt;

    std::optional<Split> best;
    std::vector<size_t> order(node.rows);
    for (int f = 0; f < kNumFactors; ++f) {
        const auto key = [&](size_t r) { return x[r][static_cast<size_t>(f)]; };
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return key(a) < key(b); });

        // Prefix sums let every cut point be scored in O(1).
        double left_sum = 0.0, left_sq = 0.0;
        double total_sum = 0.0, total_sq = 0.0;
        for (const size_t r : order) {
            total_sum += y[r];
            total_sq += y[r] * y[r];
        }
        for (size_t i = 0; i + 1 < n; ++i) {
            const size_t r = order[i];
            left_sum += y[r];
            left_sq += y[r] * y[r];
            const size_t n_left = i + 1;
            const size_t n_right = n - n_left;
            if (n_left < kMinLeaf || n_right < kMinLeaf) continue;
            if (key(order[i]) == key(order[i + 1])) continue;  // no cut between equals

            const double right_sum = total_sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse_left = left_sq - left_sum * left_sum / static_cast<double>(n_left);
            const double sse_right =
                right_sq - right_sum * right_sum / static_cast<double>(n_right);
            const double child_sse = sse_left + sse_right;
            if (!best || child_sse < best->child_sse - 1e-12) {
                best = Split{f, 0.5 * (key(order[i]) + key(order[i + 1])), child_sse};
            }
        }
    }
    if (best && best->child_sse >= node.sse - 1e-12) return std::nullopt;  // no real gain
    return best;
}

}  // namespace

TreeModel fit_tree(const std::vector<FeatureVector>& x, const std::vector<double>& y) {
    TreeModel model;
    std::vector<BuildNode> pending;
    BuildNode root;
    root.rows.resize(x.size());
    std::iota(root.rows.begin(), root.rows.end(), size_t{0});
    node_stats(y, root);

    // Breadth-first growth so node indices are stable and reproducible.
    model.nodes.push_back({});
    std::vector<std::pair<int, BuildNode>> queue{{0, std::move(root)}};
    while (!queue.empty()) {
        auto [idx, node] = std::move(queue.front());
        queue.erase(queue.begin());

        model.nodes[static_cast<size_t>(idx)].value = node.mean;
        const auto split = best_split(x, y, node);
        if (!split) continue;

        BuildNode left, right;
        left.depth = right.depth = node.depth + 1;
        for (const size_t r : node.rows) {
            if (x[r][static_cast<size_t>(split->feature)] <= split->threshold)
                left.rows.push_back(r);
            else
                right.rows.push_back(r);
        }
        node_stats(y, left);
        node_stats(y, right);

        auto& parent = model.nodes[static_cast<size_t>(idx)];
        parent.feature = split->feature;
        parent.threshold = split->threshold;
        parent.left = static_cast<int>(model.nodes.size());
        parent.right = parent.left + 1;
        model.nodes.push_back({});
        model.nodes.push_back({});
        queue.emplace_back(parent.left, std::move(left));
        queue.emplace_back(parent.right, std::move(right));
    }
    return model;
}

TreeModel prune_by_levels(const TreeModel& tree, int levels) {
    const int full_depth = tree.depth();
    const int target = std::max(1, full_depth - levels);
    if (target >= full_depth) return tree;

    // Rebuild the node array, turning every node at the target depth into a
    // leaf (its stored value is already the training-rows mean).
    TreeModel out;
    std::vector<int> remap(tree.nodes.size(), -1);
    // Breadth-first copy keeps parent-before-child ordering.
    std::vector<std::pair<int, int>> queue{{0, 0}};  // (source idx, depth)
    remap[0] = 0;
    out.nodes.push_back(tree.nodes[0]);
    size_t head = 0;
    while (head < queue.size()) {
        const auto [src, depth] = queue[head++];
        const int dst = remap[static_cast<size_t>(src)];
        auto& node = out.nodes[static_cast<size_t>(dst)];
        if (tree.nodes[static_cast<size_t>(src)].feature < 0 || depth >= target) {
            node.feature = -1;
            node.left = node.right = -1;
            continue;
        }
        const int src_left = tree.nodes[static_cast<size_t>(src)].left;
        const int src_right = tree.nodes[static_cast<size_t>(src)].right;
        node.left = static_cast<int>(out.nodes.size());
        node.right = node.left + 1;
        remap[static_cast<size_t>(src_left)] = node.left;
        remap[static_cast<size_t>(src_right)] = node.right;
        out.nodes.push_back(tree.nodes[static_cast<size_t>(src_left)]);
        out.nodes.push_back(tree.nodes[static_cast<size_t>(src_right)]);
        queue.emplace_back(src_left, depth + 1);
        queue.emplace_back(src_right, depth + 1);
    }
    return out;
}

}  // namespace acbench::regress::detail
