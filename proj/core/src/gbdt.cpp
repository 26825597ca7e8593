#include "nirspec/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "nirspec/rng.hpp"

namespace nirspec {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void validate(const GbdtConfig& c) {
  if (c.n_trees < 0) throw InvalidConfigError("n_trees must be >= 0");
  if (!(c.learning_rate > 0.0)) throw InvalidConfigError("learning_rate must be positive");
  if (c.max_depth < 1) throw InvalidConfigError("max_depth must be >= 1");
  if (c.max_leaves < 1) throw InvalidConfigError("max_leaves must be >= 1");
  if (!(c.class_weight > 0.0)) throw InvalidConfigError("class_weight must be positive");
  if (!(c.subsample > 0.0 && c.subsample <= 1.0)) {
    throw InvalidConfigError("subsample must lie in (0, 1]");
  }
  if (!(c.colsample_by_tree > 0.0 && c.colsample_by_tree <= 1.0)) {
    throw InvalidConfigError("colsample_by_tree must lie in (0, 1]");
  }
  if (c.l1_alpha < 0.0) throw InvalidConfigError("l1_alpha must be >= 0");
  if (c.l2_lambda < 0.0) throw InvalidConfigError("l2_lambda must be >= 0");
  if (c.min_samples_leaf < 1) throw InvalidConfigError("min_samples_leaf must be >= 1");
  if (c.goss) {
    if (!(c.goss->top_fraction > 0.0)) throw InvalidConfigError("goss top_fraction must be > 0");
    if (c.goss->random_fraction < 0.0) {
      throw InvalidConfigError("goss random_fraction must be >= 0");
    }
    if (c.goss->top_fraction + c.goss->random_fraction > 1.0 + 1e-12) {
      throw InvalidConfigError("goss fractions must satisfy a + b <= 1");
    }
  }
}

struct SplitChoice {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;      // original column index
  double threshold = 0.0;
  int left_count = 0;
};

/// One growing node: per-feature sorted row ranges live in `order`
/// as [begin, end) slices shared across features.
struct BuildNode {
  int node_index = 0;  // index into the output tree
  int begin = 0;
  int end = 0;
  int depth = 0;
  double g_sum = 0.0;
  double h_sum = 0.0;
  SplitChoice best;
};

class TreeBuilder {
public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<double>& g,
              const std::vector<double>& h, const std::vector<int>& active_features,
              const GbdtConfig& config)
      : x_(x), g_(g), h_(h), features_(active_features), config_(config) {}

  RegressionTree build(const std::vector<int>& rows) {
    const int m = static_cast<int>(rows.size());
    order_.assign(features_.size(), rows);
    for (std::size_t f = 0; f < features_.size(); ++f) {
      const int col = features_[f];
      std::sort(order_[f].begin(), order_[f].end(), [&](int a, int b) {
        const double va = x_(a, col);
        const double vb = x_(b, col);
        if (va != vb) return va < vb;
        return a < b;
      });
    }
    scratch_.resize(m);

    RegressionTree tree;
    tree.nodes.push_back(TreeNode{});

    BuildNode root;
    root.node_index = 0;
    root.begin = 0;
    root.end = m;
    root.depth = 0;
    for (int r : rows) {
      root.g_sum += g_[r];
      root.h_sum += h_[r];
    }
    root.best = evaluate_split(root);

    std::vector<BuildNode> frontier;
    frontier.push_back(root);
    int leaves = 1;
    while (leaves < config_.max_leaves) {
      // Best-first: the splittable frontier node with the highest gain
      // (ties: lowest node index) is expanded next.
      int pick = -1;
      for (int i = 0; i < static_cast<int>(frontier.size()); ++i) {
        if (!frontier[i].best.valid) continue;
        if (pick < 0 || frontier[i].best.gain > frontier[pick].best.gain ||
            (frontier[i].best.gain == frontier[pick].best.gain &&
             frontier[i].node_index < frontier[pick].node_index)) {
          pick = i;
        }
      }
      if (pick < 0) break;

      BuildNode node = frontier[pick];
      frontier.erase(frontier.begin() + pick);

      const int mid = partition(node);
      BuildNode left, right;
      left.depth = right.depth = node.depth + 1;
      left.begin = node.begin;
      left.end = mid;
      right.begin = mid;
      right.end = node.end;
      for (int i = left.begin; i < left.end; ++i) {
        left.g_sum += g_[order_[0][i]];
        left.h_sum += h_[order_[0][i]];
      }
      right.g_sum = node.g_sum - left.g_sum;
      right.h_sum = node.h_sum - left.h_sum;

      left.node_index = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      right.node_index = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});

      TreeNode& parent = tree.nodes[node.node_index];
      parent.feature = node.best.feature;
      parent.threshold = node.best.threshold;
      parent.left = left.node_index;
      parent.right = right.node_index;

      left.best = evaluate_split(left);
      right.best = evaluate_split(right);
      frontier.push_back(left);
      frontier.push_back(right);
      ++leaves;
    }

    for (const BuildNode& node : frontier) {
      tree.nodes[node.node_index].value =
          gbdt_leaf_weight(node.g_sum, node.h_sum, config_.l1_alpha, config_.l2_lambda);
    }
    return tree;
  }

private:
  SplitChoice evaluate_split(const BuildNode& node) {
    SplitChoice best;
    if (node.depth >= config_.max_depth) return best;
    const int count = node.end - node.begin;
    if (count < 2 * config_.min_samples_leaf) return best;

    for (std::size_t f = 0; f < features_.size(); ++f) {
      const int col = features_[f];
      const std::vector<int>& ord = order_[f];
      double gl = 0.0, hl = 0.0;
      for (int i = node.begin; i < node.end - 1; ++i) {
        const int row = ord[i];
        gl += g_[row];
        hl += h_[row];
        const double v = x_(row, col);
        const double next_v = x_(ord[i + 1], col);
        if (v == next_v) continue;
        const double threshold = 0.5 * (v + next_v);
        // Midpoints of adjacent doubles can collapse onto an endpoint;
        // the split must keep v on the left and next_v on the right.
        if (!(threshold > v && threshold <= next_v)) continue;
        const int left_count = i - node.begin + 1;
        if (left_count < config_.min_samples_leaf ||
            count - left_count < config_.min_samples_leaf) {
          continue;
        }
        const double gain =
            gbdt_split_gain(gl, hl, node.g_sum - gl, node.h_sum - hl, config_.l2_lambda);
        if (gain <= 0.0) continue;
        // Scan order (features ascending, thresholds ascending) makes a
        // strict > implement the lowest-feature, lowest-threshold tie rule.
        if (!best.valid || gain > best.gain) {
          best.valid = true;
          best.gain = gain;
          best.feature = col;
          best.threshold = threshold;
          best.left_count = left_count;
        }
      }
    }
    return best;
  }

  /// Stable-partitions every feature's range on the chosen split; returns
  /// the boundary position.
  int partition(const BuildNode& node) {
    const int col = node.best.feature;
    const double threshold = node.best.threshold;
    const int mid = node.begin + node.best.left_count;
    for (std::size_t f = 0; f < features_.size(); ++f) {
      std::vector<int>& ord = order_[f];
      int left_pos = node.begin;
      int right_pos = 0;
      for (int i = node.begin; i < node.end; ++i) {
        const int row = ord[i];
        if (x_(row, col) < threshold) {
          ord[left_pos++] = row;
        } else {
          scratch_[right_pos++] = row;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + right_pos, ord.begin() + left_pos);
    }
    return mid;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  std::vector<int> features_;
  GbdtConfig config_;
  std::vector<std::vector<int>> order_;
  std::vector<int> scratch_;
};

}  // namespace

double gbdt_leaf_weight(double g_sum, double h_sum, double l1_alpha, double l2_lambda) {
  double numerator = 0.0;
  if (g_sum > l1_alpha) {
    numerator = g_sum - l1_alpha;
  } else if (g_sum < -l1_alpha) {
    numerator = g_sum + l1_alpha;
  }
  const double denominator = h_sum + l2_lambda;
  if (!(denominator > 0.0)) return 0.0;
  return -numerator / denominator;
}

double gbdt_split_gain(double gl, double hl, double gr, double hr, double l2_lambda) {
  const auto score = [l2_lambda](double g, double h) {
    const double den = h + l2_lambda;
    return den > 0.0 ? g * g / den : 0.0;
  };
  return 0.5 * (score(gl, hl) + score(gr, hr) - score(gl + gr, hl + hr));
}

double RegressionTree::predict(const Eigen::RowVectorXd& row) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    node = row[nodes[node].feature] < nodes[node].threshold ? nodes[node].left
                                                            : nodes[node].right;
  }
  return nodes[node].value;
}

double RegressionTree::predict_row(const Eigen::MatrixXd& x, Eigen::Index row) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    node = x(row, nodes[node].feature) < nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right;
  }
  return nodes[node].value;
}

int RegressionTree::leaf_count() const {
  int leaves = 0;
  for (const TreeNode& n : nodes) leaves += n.is_leaf() ? 1 : 0;
  return leaves;
}

GossSample goss_sample(const std::vector<double>& gradients, double top_fraction,
                       double random_fraction, RngSeed seed) {
  const int n = static_cast<int>(gradients.size());
  if (n == 0) throw InvalidConfigError("goss_sample over zero gradients");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw InvalidConfigError("top_fraction must lie in (0, 1]");
  }
  if (random_fraction < 0.0 || top_fraction + random_fraction > 1.0 + 1e-12) {
    throw InvalidConfigError("fractions must satisfy 0 <= b and a + b <= 1");
  }

  std::vector<int> by_magnitude(n);
  std::iota(by_magnitude.begin(), by_magnitude.end(), 0);
  std::sort(by_magnitude.begin(), by_magnitude.end(), [&](int a, int b) {
    const double ma = std::abs(gradients[a]);
    const double mb = std::abs(gradients[b]);
    if (ma != mb) return ma > mb;
    return a < b;  // deterministic tie-break by index
  });

  const int top_n = std::min(n, static_cast<int>(std::ceil(top_fraction * n)));
  const int rand_n =
      std::min(n - top_n, static_cast<int>(std::ceil(random_fraction * n)));

  std::vector<std::pair<int, double>> picked;
  picked.reserve(top_n + rand_n);
  for (int i = 0; i < top_n; ++i) picked.emplace_back(by_magnitude[i], 1.0);

  if (rand_n > 0) {
    std::vector<int> rest(by_magnitude.begin() + top_n, by_magnitude.end());
    std::sort(rest.begin(), rest.end());
    Rng rng(seed);
    // Partial Fisher-Yates over the remainder.
    for (int i = 0; i < rand_n; ++i) {
      const int j = i + static_cast<int>(rng.below(rest.size() - i));
      std::swap(rest[i], rest[j]);
    }
    const double amplification = (1.0 - top_fraction) / random_fraction;
    for (int i = 0; i < rand_n; ++i) picked.emplace_back(rest[i], amplification);
  }

  std::sort(picked.begin(), picked.end());
  GossSample sample;
  sample.indices.reserve(picked.size());
  sample.multipliers.reserve(picked.size());
  for (const auto& [idx, mult] : picked) {
    sample.indices.push_back(idx);
    sample.multipliers.push_back(mult);
  }
  return sample;
}

BoostedEnsemble gbdt_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const GbdtConfig& config) {
  validate(config);
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n < 2) throw InvalidConfigError("gbdt_fit needs at least 2 samples");
  if (static_cast<int>(y.size()) != n) throw InvalidConfigError("label vector size mismatch");

  double weight_pos = 0.0, weight_neg = 0.0;
  for (int label : y) {
    if (label == 1) {
      weight_pos += config.class_weight;
    } else if (label == 0) {
      weight_neg += 1.0;
    } else {
      throw InvalidConfigError("labels must be 0 or 1");
    }
  }
  if (weight_pos == 0.0 || weight_neg == 0.0) {
    throw DegenerateClassError("gbdt_fit needs both classes present");
  }

  BoostedEnsemble ensemble;
  ensemble.base_score = std::log(weight_pos / weight_neg);
  ensemble.learning_rate = config.learning_rate;
  ensemble.n_features = d;
  ensemble.trees.reserve(config.n_trees);

  Rng rng(config.seed);
  std::vector<double> margins(n, ensemble.base_score);
  std::vector<double> g_raw(n), g(n), h(n);

  for (int t = 0; t < config.n_trees; ++t) {
    for (int i = 0; i < n; ++i) {
      const double w = y[i] == 1 ? config.class_weight : 1.0;
      const double p = sigmoid(margins[i]);
      g_raw[i] = w * (p - y[i]);
      h[i] = w * p * (1.0 - p);
      g[i] = g_raw[i];
    }

    // Row selection: GOSS replaces plain subsampling when enabled.
    std::vector<int> rows;
    if (config.goss) {
      GossSample sample = goss_sample(g_raw, config.goss->top_fraction,
                                      config.goss->random_fraction, derive_seed(config.seed, t));
      rows = std::move(sample.indices);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        g[rows[i]] = g_raw[rows[i]] * sample.multipliers[i];
        h[rows[i]] *= sample.multipliers[i];
      }
    } else if (config.subsample < 1.0) {
      const int m = std::max(1, static_cast<int>(std::round(config.subsample * n)));
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      for (int i = 0; i < m; ++i) {
        const int j = i + static_cast<int>(rng.below(all.size() - i));
        std::swap(all[i], all[j]);
      }
      rows.assign(all.begin(), all.begin() + m);
      std::sort(rows.begin(), rows.end());
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0);
    }

    // Column selection per tree.
    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);
    if (config.colsample_by_tree < 1.0) {
      const int k = std::max(1, static_cast<int>(std::round(config.colsample_by_tree * d)));
      for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(features.size() - i));
        std::swap(features[i], features[j]);
      }
      features.resize(k);
      std::sort(features.begin(), features.end());
    }

    TreeBuilder builder(x, g, h, features, config);
    RegressionTree tree = builder.build(rows);
    for (int i = 0; i < n; ++i) {
      margins[i] += config.learning_rate * tree.predict_row(x, i);
    }
    ensemble.trees.push_back(std::move(tree));
  }
  return ensemble;
}

Eigen::VectorXd gbdt_predict_margin(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                                    int first_trees) {
  if (static_cast<int>(x.cols()) != ensemble.n_features) {
    throw GridMismatchError("feature width " + std::to_string(x.cols()) +
                            " does not match training width " +
                            std::to_string(ensemble.n_features));
  }
  const int limit = first_trees < 0
                        ? static_cast<int>(ensemble.trees.size())
                        : std::min<int>(first_trees, static_cast<int>(ensemble.trees.size()));
  Eigen::VectorXd margins = Eigen::VectorXd::Constant(x.rows(), ensemble.base_score);
  for (int t = 0; t < limit; ++t) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      margins[i] += ensemble.learning_rate * ensemble.trees[t].predict_row(x, i);
    }
  }
  return margins;
}

Eigen::VectorXd gbdt_predict_proba(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                                   int first_trees) {
  Eigen::VectorXd margins = gbdt_predict_margin(ensemble, x, first_trees);
  return margins.unaryExpr([](double m) { return sigmoid(m); });
}

double gbdt_training_loss(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                          const std::vector<int>& y, double class_weight, int first_trees) {
  const Eigen::VectorXd margins = gbdt_predict_margin(ensemble, x, first_trees);
  double loss = 0.0;
  double weight_total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double w = y[i] == 1 ? class_weight : 1.0;
    // log(1 + exp(-z)) for the true class, computed stably.
    const double z = y[i] == 1 ? margins[i] : -margins[i];
    loss += w * (z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)));
    weight_total += w;
  }
  return loss / weight_total;
}

std::string ensemble_to_json(const BoostedEnsemble& ensemble) {
  nlohmann::json j;
  j["base_score"] = ensemble.base_score;
  j["learning_rate"] = ensemble.learning_rate;
  j["n_features"] = ensemble.n_features;
  j["trees"] = nlohmann::json::array();
  for (const RegressionTree& tree : ensemble.trees) {
    auto nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"value", n.value}});
    }
    j["trees"].push_back({{"nodes", std::move(nodes)}});
  }
  return j.dump() + "\n";
}

BoostedEnsemble ensemble_from_json(const std::string& text) {
  BoostedEnsemble ensemble;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    ensemble.base_score = j.at("base_score").get<double>();
    ensemble.learning_rate = j.at("learning_rate").get<double>();
    ensemble.n_features = j.at("n_features").get<int>();
    for (const auto& tj : j.at("trees")) {
      RegressionTree tree;
      for (const auto& nj : tj.at("nodes")) {
        TreeNode n;
        n.feature = nj.at("feature").get<int>();
        n.threshold = nj.at("threshold").get<double>();
        n.left = nj.at("left").get<int>();
        n.right = nj.at("right").get<int>();
        n.value = nj.at("value").get<double>();
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) throw InvalidConfigError("ensemble JSON: empty tree");
      ensemble.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("ensemble JSON: ") + e.what());
  }
  return ensemble;
}

}  // namespace nirspec
