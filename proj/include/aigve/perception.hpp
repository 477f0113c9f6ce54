#pragma once

// Embedding-alignment metrics (CLIPSim/CLIPTemp family), pooled-feature MLP
// quality head, and classical no-reference frame statistics.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "aigve/features.hpp"
#include "aigve/frames.hpp"
#include "aigve/metric.hpp"

namespace aigve {

struct EmbeddingSet {
  std::optional<Eigen::VectorXd> text;
  Eigen::MatrixXd frames;  // T x D
};

/// u.v / (|u||v|) clamped to [-1, 1]. ZeroNormVector if either norm is zero.
double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct ClipSimOptions {
  double scale = 1.0;
  /// Per-frame max(0, cos) before averaging (CLIPScore-style with scale 2.5).
  bool clamp_negative = false;
};

/// Mean text-to-frame cosine similarity, times `scale`.
double clip_sim_score(const EmbeddingSet& emb, const ClipSimOptions& options = {});
/// Mean cosine similarity of consecutive frame embeddings. Needs T >= 2.
double clip_temp_score(const EmbeddingSet& emb);

enum class Activation { Relu, None };

struct MlpLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::None;
};

struct MlpWeights {
  std::vector<MlpLayer> layers;

  std::size_t input_dim() const noexcept {
    return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.cols());
  }
};

/// `{"layers":[{"w":[[...]], "b":[...], "activation":"relu"|"none"}]}`; adjacent
/// layers must chain and the last layer must have one output.
MlpWeights parse_mlp_weights(const nlohmann::json& doc);
MlpWeights load_mlp_weights(const std::filesystem::path& path);

Eigen::VectorXd mlp_forward_vector(const MlpWeights& weights, const Eigen::VectorXd& x);
/// Single output of a scorer head.
double mlp_forward(const MlpWeights& weights, const Eigen::VectorXd& x);

/// Mean/std pooling over frames followed by the head; its input must be 2D.
double vqa_score(const MlpWeights& weights, const FeatureMatrix& per_frame);

/// Mean over frames of the variance of the 4-neighbour Laplacian of luma,
/// divided by its largest attainable value (4*255)^2.
double sharpness_score(const FrameSequence& frames);
/// Mean absolute luma change between consecutive frames, divided by 255.
double dynamics_score(const FrameSequence& frames);

/// Per-sample cosine aggregation over stored embeddings.
class EmbeddingSimilarityMetric final : public PerSampleMetric {
 public:
  enum class Mode { TextToFrame, FrameToFrame };

  struct Options {
    Mode mode = Mode::TextToFrame;
    std::string text_source = "text_embedding";
    std::string frame_source = "frame_embeddings";
    ClipSimOptions sim;
  };

  explicit EmbeddingSimilarityMetric(Options options) : options_(std::move(options)) {}

 protected:
  Score score_sample(const EvalSample& sample) const override;

 private:
  Options options_;
};

class VqaHeadMetric final : public PerSampleMetric {
 public:
  VqaHeadMetric(MlpWeights weights, std::string feature_source, std::size_t grid);

 protected:
  Score score_sample(const EvalSample& sample) const override;

 private:
  MlpWeights weights_;
  std::string feature_source_;
  std::size_t grid_;
};

class FrameStatisticMetric final : public PerSampleMetric {
 public:
  enum class Kind { Sharpness, Dynamics };
  explicit FrameStatisticMetric(Kind kind) : kind_(kind) {}

 protected:
  Score score_sample(const EvalSample& sample) const override;

 private:
  Kind kind_;
};

}  // namespace aigve
