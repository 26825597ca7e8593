#pragma once

#include <string>
#include <vector>

#include "nirspec/ellipse.hpp"
#include "nirspec/features.hpp"
#include "nirspec/gan.hpp"
#include "nirspec/gbdt.hpp"
#include "nirspec/plsda.hpp"
#include "nirspec/smote.hpp"
#include "nirspec/types.hpp"

namespace nirspec {

/// Preprocessing arms: raw spectra, SNV spectra, or SNV + windowed features.
enum class PreprocessArm { Raw, Snv, SnvFeatures };
/// Class-balancing arms.
enum class AugmentArm { None, Smote, Gan };
enum class ModelKind { Gbdt, Plsda };

std::string_view preprocess_arm_name(PreprocessArm arm);
PreprocessArm preprocess_arm_from_name(std::string_view name);
std::string_view augment_arm_name(AugmentArm arm);
AugmentArm augment_arm_from_name(std::string_view name);
std::string_view model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(std::string_view name);

/// Experiment-grid code, e.g. augment=gan + preprocess=snv_features -> "III-c".
std::string arm_code(AugmentArm augment, PreprocessArm preprocess);

/// Full experiment description: arms, their configurations, and the seed.
struct PipelineSpec {
  PreprocessArm preprocess = PreprocessArm::Snv;
  AugmentArm augment = AugmentArm::None;
  ModelKind model = ModelKind::Gbdt;
  WindowSpec window;
  GbdtConfig gbdt;
  PlsdaConfig plsda;
  SmoteConfig smote;
  GanConfig gan;
  EllipseConfig ellipse;
  int gan_max_rounds = 20;
  RngSeed seed;

  std::string describe() const;
};

/// Balances the training set per the augmentation arm. Augmentation always
/// consumes the spectra as stored (GAN trains on raw spectra); the SMOTE
/// neighbor metric follows the preprocessing arm. `salt` decorrelates
/// per-fold augmentation seeds.
Dataset apply_augmentation(const Dataset& train, const PipelineSpec& spec, std::uint64_t salt);

/// Design matrix for the preprocessing arm: raw spectra columns, SNV
/// spectra columns, or windowed statistics of SNV spectra.
FeatureMatrix design_matrix(const Dataset& dataset, const PipelineSpec& spec);

/// Uniform wrapper over the two classifier families.
struct TrainedModel {
  ModelKind kind = ModelKind::Gbdt;
  BoostedEnsemble gbdt;
  PlsdaModel plsda;

  std::vector<int> predict_labels(const Eigen::MatrixXd& x) const;
  /// GBDT: probability of the cancer class; PLS-DA: regression score.
  Eigen::VectorXd decision_scores(const Eigen::MatrixXd& x) const;
  int n_features() const;
};

TrainedModel fit_model(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const PipelineSpec& spec);

/// Serialized artifact of `train`: the pipeline spec (preprocessing must be
/// replayed on new data), the fitted model, and the feature names.
struct ModelBundle {
  PipelineSpec spec;
  TrainedModel model;
  std::vector<std::string> feature_names;
};

std::string pipeline_spec_to_json(const PipelineSpec& spec);
PipelineSpec pipeline_spec_from_json(const std::string& text);
/// Overlays the JSON object's fields onto `spec` (missing keys keep values).
void pipeline_spec_update_from_json(PipelineSpec& spec, const std::string& text);

std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const std::string& text);
void write_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle read_bundle(const std::string& path);

}  // namespace nirspec
