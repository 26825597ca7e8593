#include "nirspec/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nirspec/snv.hpp"

namespace nirspec {

std::string_view preprocess_arm_name(PreprocessArm arm) {
  switch (arm) {
    case PreprocessArm::Raw: return "raw";
    case PreprocessArm::Snv: return "snv";
    case PreprocessArm::SnvFeatures: return "snv_features";
  }
  return "?";
}

PreprocessArm preprocess_arm_from_name(std::string_view name) {
  if (name == "raw") return PreprocessArm::Raw;
  if (name == "snv") return PreprocessArm::Snv;
  if (name == "snv_features" || name == "snv-features") return PreprocessArm::SnvFeatures;
  throw InvalidConfigError("unknown preprocessing arm '" + std::string(name) + "'");
}

std::string_view augment_arm_name(AugmentArm arm) {
  switch (arm) {
    case AugmentArm::None: return "none";
    case AugmentArm::Smote: return "smote";
    case AugmentArm::Gan: return "gan";
  }
  return "?";
}

AugmentArm augment_arm_from_name(std::string_view name) {
  if (name == "none") return AugmentArm::None;
  if (name == "smote") return AugmentArm::Smote;
  if (name == "gan") return AugmentArm::Gan;
  throw InvalidConfigError("unknown augmentation arm '" + std::string(name) + "'");
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gbdt: return "gbdt";
    case ModelKind::Plsda: return "plsda";
  }
  return "?";
}

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "gbdt") return ModelKind::Gbdt;
  if (name == "plsda") return ModelKind::Plsda;
  throw InvalidConfigError("unknown model '" + std::string(name) + "'");
}

std::string arm_code(AugmentArm augment, PreprocessArm preprocess) {
  const char* roman = augment == AugmentArm::None ? "I"
                      : augment == AugmentArm::Smote ? "II"
                                                     : "III";
  const char* letter = preprocess == PreprocessArm::Raw ? "a"
                       : preprocess == PreprocessArm::Snv ? "b"
                                                          : "c";
  return std::string(roman) + "-" + letter;
}

std::string PipelineSpec::describe() const {
  return arm_code(augment, preprocess) + " (" + std::string(augment_arm_name(augment)) + " + " +
         std::string(preprocess_arm_name(preprocess)) + ", " +
         std::string(model_kind_name(model)) + ")";
}

Dataset apply_augmentation(const Dataset& train, const PipelineSpec& spec, std::uint64_t salt) {
  switch (spec.augment) {
    case AugmentArm::None:
      return train;
    case AugmentArm::Smote: {
      SmoteConfig config = spec.smote;
      config.seed = derive_seed(config.seed, salt);
      const SmoteMetricSpace space = spec.preprocess == PreprocessArm::Raw
                                         ? SmoteMetricSpace::Stored
                                         : SmoteMetricSpace::Snv;
      return balance_with_smote(train, space, config);
    }
    case AugmentArm::Gan: {
      GanConfig config = spec.gan;
      config.seed = derive_seed(config.seed, salt);
      return balance_with_gan(train, config, spec.ellipse, spec.gan_max_rounds);
    }
  }
  throw InvalidConfigError("unknown augmentation arm");
}

FeatureMatrix design_matrix(const Dataset& dataset, const PipelineSpec& spec) {
  switch (spec.preprocess) {
    case PreprocessArm::Raw:
      return spectra_matrix(dataset);
    case PreprocessArm::Snv:
      return spectra_matrix(snv_dataset(dataset));
    case PreprocessArm::SnvFeatures:
      return extract_features(snv_dataset(dataset), spec.window);
  }
  throw InvalidConfigError("unknown preprocessing arm");
}

std::vector<int> TrainedModel::predict_labels(const Eigen::MatrixXd& x) const {
  if (kind == ModelKind::Gbdt) {
    const Eigen::VectorXd proba = gbdt_predict_proba(gbdt, x);
    std::vector<int> labels(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) labels[i] = proba[i] >= 0.5 ? 1 : 0;
    return labels;
  }
  return plsda_predict(plsda, x).labels;
}

Eigen::VectorXd TrainedModel::decision_scores(const Eigen::MatrixXd& x) const {
  if (kind == ModelKind::Gbdt) return gbdt_predict_proba(gbdt, x);
  return plsda_predict(plsda, x).scores;
}

int TrainedModel::n_features() const {
  return kind == ModelKind::Gbdt ? gbdt.n_features : plsda.n_features();
}

TrainedModel fit_model(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const PipelineSpec& spec) {
  TrainedModel model;
  model.kind = spec.model;
  if (spec.model == ModelKind::Gbdt) {
    model.gbdt = gbdt_fit(x, y, spec.gbdt);
  } else {
    model.plsda = plsda_fit(x, y, spec.plsda);
  }
  return model;
}

namespace {

nlohmann::json window_to_json(const WindowSpec& w) {
  return {{"window_count", w.window_count},
          {"overlap_fraction", w.overlap_fraction},
          {"feature_mask", w.mask.to_string()}};
}

void window_from_json(const nlohmann::json& j, WindowSpec& w) {
  w.window_count = j.value("window_count", w.window_count);
  w.overlap_fraction = j.value("overlap_fraction", w.overlap_fraction);
  if (j.contains("feature_mask")) {
    w.mask = FeatureMask::from_string(j["feature_mask"].get<std::string>());
  }
}

nlohmann::json gbdt_to_json_cfg(const GbdtConfig& c) {
  nlohmann::json j{{"n_trees", c.n_trees},
                   {"learning_rate", c.learning_rate},
                   {"max_depth", c.max_depth},
                   {"max_leaves", c.max_leaves},
                   {"class_weight", c.class_weight},
                   {"subsample", c.subsample},
                   {"colsample_by_tree", c.colsample_by_tree},
                   {"l1_alpha", c.l1_alpha},
                   {"l2_lambda", c.l2_lambda},
                   {"min_samples_leaf", c.min_samples_leaf},
                   {"seed", c.seed.value}};
  if (c.goss) {
    j["goss"] = {{"top_fraction", c.goss->top_fraction},
                 {"random_fraction", c.goss->random_fraction}};
  }
  return j;
}

void gbdt_from_json_cfg(const nlohmann::json& j, GbdtConfig& c) {
  c.n_trees = j.value("n_trees", c.n_trees);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.max_leaves = j.value("max_leaves", c.max_leaves);
  c.class_weight = j.value("class_weight", c.class_weight);
  c.subsample = j.value("subsample", c.subsample);
  c.colsample_by_tree = j.value("colsample_by_tree", c.colsample_by_tree);
  c.l1_alpha = j.value("l1_alpha", c.l1_alpha);
  c.l2_lambda = j.value("l2_lambda", c.l2_lambda);
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  c.seed.value = j.value("seed", c.seed.value);
  if (j.contains("goss") && !j["goss"].is_null()) {
    GossConfig g;
    g.top_fraction = j["goss"].value("top_fraction", g.top_fraction);
    g.random_fraction = j["goss"].value("random_fraction", g.random_fraction);
    c.goss = g;
  }
}

nlohmann::json plsda_to_json_cfg(const PlsdaConfig& c) {
  return {{"n_components", c.n_components},
          {"max_iterations", c.max_iterations},
          {"tolerance", c.tolerance},
          {"decision_threshold", c.decision_threshold}};
}

void plsda_from_json_cfg(const nlohmann::json& j, PlsdaConfig& c) {
  c.n_components = j.value("n_components", c.n_components);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.decision_threshold = j.value("decision_threshold", c.decision_threshold);
}

nlohmann::json gan_to_json_cfg(const GanConfig& c) {
  return {{"noise_dim", c.noise_dim},
          {"generator_hidden", c.generator_hidden},
          {"discriminator_hidden", c.discriminator_hidden},
          {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed.value}};
}

void gan_from_json_cfg(const nlohmann::json& j, GanConfig& c) {
  c.noise_dim = j.value("noise_dim", c.noise_dim);
  if (j.contains("generator_hidden")) {
    c.generator_hidden = j["generator_hidden"].get<std::vector<int>>();
  }
  if (j.contains("discriminator_hidden")) {
    c.discriminator_hidden = j["discriminator_hidden"].get<std::vector<int>>();
  }
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.momentum = j.value("momentum", c.momentum);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed.value = j.value("seed", c.seed.value);
}

nlohmann::json spec_to_json_obj(const PipelineSpec& spec) {
  nlohmann::json j;
  j["preprocess"] = std::string(preprocess_arm_name(spec.preprocess));
  j["augment"] = std::string(augment_arm_name(spec.augment));
  j["model"] = std::string(model_kind_name(spec.model));
  j["window"] = window_to_json(spec.window);
  j["gbdt"] = gbdt_to_json_cfg(spec.gbdt);
  j["plsda"] = plsda_to_json_cfg(spec.plsda);
  j["smote"] = {{"k_neighbors", spec.smote.k_neighbors}, {"seed", spec.smote.seed.value}};
  j["gan"] = gan_to_json_cfg(spec.gan);
  j["ellipse"] = {{"n_components", spec.ellipse.n_components},
                  {"confidence", spec.ellipse.confidence}};
  j["gan_max_rounds"] = spec.gan_max_rounds;
  j["seed"] = spec.seed.value;
  return j;
}

void spec_from_json_obj(const nlohmann::json& j, PipelineSpec& spec) {
  if (j.contains("preprocess")) {
    spec.preprocess = preprocess_arm_from_name(j["preprocess"].get<std::string>());
  }
  if (j.contains("augment")) {
    spec.augment = augment_arm_from_name(j["augment"].get<std::string>());
  }
  if (j.contains("model")) spec.model = model_kind_from_name(j["model"].get<std::string>());
  if (j.contains("window")) window_from_json(j["window"], spec.window);
  if (j.contains("gbdt")) gbdt_from_json_cfg(j["gbdt"], spec.gbdt);
  if (j.contains("plsda")) plsda_from_json_cfg(j["plsda"], spec.plsda);
  if (j.contains("smote")) {
    spec.smote.k_neighbors = j["smote"].value("k_neighbors", spec.smote.k_neighbors);
    spec.smote.seed.value = j["smote"].value("seed", spec.smote.seed.value);
  }
  if (j.contains("gan")) gan_from_json_cfg(j["gan"], spec.gan);
  if (j.contains("ellipse")) {
    spec.ellipse.n_components = j["ellipse"].value("n_components", spec.ellipse.n_components);
    spec.ellipse.confidence = j["ellipse"].value("confidence", spec.ellipse.confidence);
  }
  spec.gan_max_rounds = j.value("gan_max_rounds", spec.gan_max_rounds);
  spec.seed.value = j.value("seed", spec.seed.value);
}

}  // namespace

std::string pipeline_spec_to_json(const PipelineSpec& spec) {
  return spec_to_json_obj(spec).dump(2) + "\n";
}

PipelineSpec pipeline_spec_from_json(const std::string& text) {
  PipelineSpec spec;
  pipeline_spec_update_from_json(spec, text);
  return spec;
}

void pipeline_spec_update_from_json(PipelineSpec& spec, const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    spec_from_json_obj(j, spec);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("pipeline spec JSON: ") + e.what());
  }
}

std::string bundle_to_json(const ModelBundle& bundle) {
  nlohmann::json j;
  j["pipeline"] = spec_to_json_obj(bundle.spec);
  j["feature_names"] = bundle.feature_names;
  if (bundle.model.kind == ModelKind::Gbdt) {
    j["model"] = {{"kind", "gbdt"},
                  {"payload", nlohmann::json::parse(ensemble_to_json(bundle.model.gbdt))}};
  } else {
    j["model"] = {{"kind", "plsda"},
                  {"payload", nlohmann::json::parse(plsda_to_json(bundle.model.plsda))}};
  }
  return j.dump(2) + "\n";
}

ModelBundle bundle_from_json(const std::string& text) {
  ModelBundle bundle;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    spec_from_json_obj(j.at("pipeline"), bundle.spec);
    bundle.feature_names = j.value("feature_names", std::vector<std::string>{});
    const std::string kind = j.at("model").at("kind").get<std::string>();
    bundle.model.kind = model_kind_from_name(kind);
    const std::string payload = j.at("model").at("payload").dump();
    if (bundle.model.kind == ModelKind::Gbdt) {
      bundle.model.gbdt = ensemble_from_json(payload);
    } else {
      bundle.model.plsda = plsda_from_json(payload);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("model bundle JSON: ") + e.what());
  }
  return bundle;
}

void write_bundle(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << bundle_to_json(bundle);
  if (!out) throw IoError("write to '" + path + "' failed");
}

ModelBundle read_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return bundle_from_json(buf.str());
}

}  // namespace nirspec
