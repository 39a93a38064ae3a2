#include "solarsched/quantile_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "solarsched/error.hpp"
#include "solarsched/random.hpp"
#include "solarsched/stats.hpp"

namespace solarsched {

void TrainingSet::add(std::span<const double> x, double y) {
    if (num_features == 0) num_features = x.size();
    if (x.size() != num_features) throw Error("training row has " + std::to_string(x.size()) +
                                              " features, expected " + std::to_string(num_features));
    features.insert(features.end(), x.begin(), x.end());
    targets.push_back(y);
}

namespace {

struct SplitChoice {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double score = -1.0;  // sum_L^2/n_L + sum_R^2/n_R, larger is better
};

struct PendingNode {
    std::uint32_t node;
    std::size_t begin;
    std::size_t end;
};

std::size_t split_width(const ForestOptions& options, std::size_t num_features) {
    if (options.features_per_split > 0) return std::min(options.features_per_split, num_features);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_features)))));
}

}  // namespace

QuantileForest::Tree grow_tree(const TrainingSet& data, const ForestOptions& options, std::size_t index) {
    const std::size_t n = data.size();
    const std::size_t p = data.num_features;
    if (n == 0 || p == 0) throw Error("cannot grow a tree on an empty training set");
    const std::size_t min_leaf = std::max<std::size_t>(1, options.min_leaf_size);
    const std::size_t mtry = split_width(options, p);

    Rng rng(options.seed, index);
    std::vector<std::uint32_t> sample(n);
    for (auto& s : sample) s = static_cast<std::uint32_t>(rng.index(n));

    QuantileForest::Tree tree;
    tree.nodes.emplace_back();
    std::vector<PendingNode> stack{{0, 0, n}};
    std::vector<std::size_t> feature_order(p);
    std::vector<std::pair<double, double>> column;  // (x, y) for the node

    while (!stack.empty()) {
        const PendingNode cur = stack.back();
        stack.pop_back();
        const std::size_t count = cur.end - cur.begin;

        SplitChoice best;
        bool constant_target = true;
        const double y0 = data.targets[sample[cur.begin]];
        for (std::size_t k = cur.begin; k < cur.end; ++k) {
            if (data.targets[sample[k]] != y0) {
                constant_target = false;
                break;
            }
        }

        if (count >= 2 * min_leaf && !constant_target) {
            std::iota(feature_order.begin(), feature_order.end(), 0);
            for (std::size_t k = 0; k < mtry; ++k) {
                const std::size_t pick = k + static_cast<std::size_t>(rng.index(p - k));
                std::swap(feature_order[k], feature_order[pick]);
            }
            for (std::size_t k = 0; k < mtry; ++k) {
                const std::size_t f = feature_order[k];
                column.clear();
                double total = 0.0;
                for (std::size_t s = cur.begin; s < cur.end; ++s) {
                    const auto row = sample[s];
                    column.emplace_back(data.features[row * p + f], data.targets[row]);
                    total += data.targets[row];
                }
                std::sort(column.begin(), column.end());
                double left = 0.0;
                for (std::size_t i = 0; i + 1 < count; ++i) {
                    left += column[i].second;
                    const std::size_t nl = i + 1;
                    const std::size_t nr = count - nl;
                    if (nl < min_leaf) continue;
                    if (nr < min_leaf) break;
                    if (!(column[i].first < column[i + 1].first)) continue;
                    const double right = total - left;
                    const double score = left * left / static_cast<double>(nl) + right * right / static_cast<double>(nr);
                    if (score > best.score) {
                        double mid = 0.5 * (column[i].first + column[i + 1].first);
                        if (!(mid < column[i + 1].first)) mid = column[i].first;
                        best = {static_cast<std::int32_t>(f), mid, score};
                    }
                }
            }
        }

        if (best.feature < 0) {
            auto& node = tree.nodes[cur.node];
            node.leaf_begin = static_cast<std::uint32_t>(tree.leaf_values.size());
            for (std::size_t k = cur.begin; k < cur.end; ++k) tree.leaf_values.push_back(data.targets[sample[k]]);
            std::sort(tree.leaf_values.begin() + node.leaf_begin, tree.leaf_values.end());
            node.leaf_end = static_cast<std::uint32_t>(tree.leaf_values.size());
            continue;
        }

        const auto f = static_cast<std::size_t>(best.feature);
        const auto first = sample.begin() + static_cast<std::ptrdiff_t>(cur.begin);
        const auto last = sample.begin() + static_cast<std::ptrdiff_t>(cur.end);
        const auto mid = std::stable_partition(
            first, last, [&](std::uint32_t row) { return data.features[row * p + f] <= best.threshold; });
        const std::size_t split = cur.begin + static_cast<std::size_t>(mid - first);

        const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const auto right_id = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        auto& node = tree.nodes[cur.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left_id;
        node.right = right_id;
        stack.push_back({right_id, split, cur.end});
        stack.push_back({left_id, cur.begin, split});
    }
    return tree;
}

QuantileForest::QuantileForest(std::size_t num_features, std::vector<Tree> trees)
    : num_features_(num_features), trees_(std::move(trees)) {
    if (trees_.empty()) throw Error("a forest needs at least one tree");
}

QuantileForest QuantileForest::train(const TrainingSet& data, const ForestOptions& options) {
    if (data.size() == 0) throw Error("empty training window");
    if (options.num_trees == 0) throw Error("forest needs at least one tree");
    std::vector<Tree> trees(options.num_trees);
    const auto count = static_cast<std::int64_t>(options.num_trees);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        trees[static_cast<std::size_t>(i)] = grow_tree(data, options, static_cast<std::size_t>(i));
    }
    return QuantileForest(data.num_features, std::move(trees));
}

QuantileForest QuantileForest::train_serial(const TrainingSet& data, const ForestOptions& options) {
    if (data.size() == 0) throw Error("empty training window");
    if (options.num_trees == 0) throw Error("forest needs at least one tree");
    std::vector<Tree> trees;
    trees.reserve(options.num_trees);
    for (std::size_t i = 0; i < options.num_trees; ++i) trees.push_back(grow_tree(data, options, i));
    return QuantileForest(data.num_features, std::move(trees));
}

std::vector<double> QuantileForest::leaf_pool(std::span<const double> x) const {
    if (x.size() != num_features_)
        throw Error("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                    std::to_string(num_features_));
    std::vector<double> pool;
    for (const auto& tree : trees_) {
        std::uint32_t id = 0;
        while (tree.nodes[id].feature >= 0) {
            const auto& node = tree.nodes[id];
            id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
        }
        const auto& leaf = tree.nodes[id];
        pool.insert(pool.end(), tree.leaf_values.begin() + leaf.leaf_begin, tree.leaf_values.begin() + leaf.leaf_end);
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<double> QuantileForest::predict_quantiles(std::span<const double> x, std::span<const double> levels) const {
    const auto pool = leaf_pool(x);
    std::vector<double> out;
    out.reserve(levels.size());
    for (double p : levels) {
        if (p < 0.0 || p > 1.0) throw Error("quantile level must lie in [0, 1]");
        out.push_back(sorted_quantile(pool, p));
    }
    return out;
}

QuantileTriple QuantileForest::predict(std::span<const double> x) const {
    const auto pool = leaf_pool(x);
    const auto q = [&](double p) { return std::max(0.0, sorted_quantile(pool, p)); };
    return {q(0.4), q(0.5), q(0.6)};
}

}  // namespace solarsched
