#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "solarsched/forecast_set.hpp"

namespace solarsched {

// Row-major feature table with one target per row.
struct TrainingSet {
    std::size_t num_features = 0;
    std::vector<double> features;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * num_features, num_features};
    }
    void add(std::span<const double> x, double y);
};

struct ForestOptions {
    std::size_t num_trees = 100;
    std::size_t min_leaf_size = 5;
    // Features tried per split; 0 means ceil(sqrt(num_features)).
    std::size_t features_per_split = 0;
    std::uint64_t seed = 20180718;
};

// Quantile regression forest: CART trees grown on bootstrap samples whose
// leaves keep their target values. Quantiles come from the pooled leaf values
// the query lands in, one pool entry per (tree, leaf sample).
class QuantileForest {
public:
    struct Node {
        std::int32_t feature = -1;  // -1 marks a leaf
        double threshold = 0.0;     // go left when x[feature] <= threshold
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t leaf_begin = 0;
        std::uint32_t leaf_end = 0;

        bool operator==(const Node&) const = default;
    };

    struct Tree {
        std::vector<Node> nodes;
        std::vector<double> leaf_values;  // sorted within each leaf

        bool operator==(const Tree&) const = default;
    };

    // Grows trees in parallel with OpenMP. Each tree draws from its own
    // seeded stream, so the result equals train_serial for any thread count.
    static QuantileForest train(const TrainingSet& data, const ForestOptions& options = {});
    // Single-threaded reference.
    static QuantileForest train_serial(const TrainingSet& data, const ForestOptions& options = {});

    // Builds a forest from explicit trees (tests and hand-made models).
    QuantileForest(std::size_t num_features, std::vector<Tree> trees);

    std::size_t num_features() const { return num_features_; }
    std::size_t num_trees() const { return trees_.size(); }
    const std::vector<Tree>& trees() const { return trees_; }

    // Sorted pool of leaf values reached by x.
    std::vector<double> leaf_pool(std::span<const double> x) const;
    std::vector<double> predict_quantiles(std::span<const double> x, std::span<const double> levels) const;
    // 40th/50th/60th percentiles, clipped at zero.
    QuantileTriple predict(std::span<const double> x) const;

    bool operator==(const QuantileForest&) const = default;

private:
    std::size_t num_features_ = 0;
    std::vector<Tree> trees_;
};

// Grows tree `index` of a forest; exposed so the serial and parallel drivers
// share one kernel.
QuantileForest::Tree grow_tree(const TrainingSet& data, const ForestOptions& options, std::size_t index);

}  // namespace solarsched
