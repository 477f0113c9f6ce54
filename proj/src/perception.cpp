#include "aigve/perception.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "aigve/distribution.hpp"
#include "aigve/error.hpp"

namespace aigve {

double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    throw Error(Errc::DimensionMismatch, "vectors of length " + std::to_string(u.size()) + " and " +
                                             std::to_string(v.size()));
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw Error(Errc::ZeroNormVector, "cosine of a zero-norm vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

double clip_sim_score(const EmbeddingSet& emb, const ClipSimOptions& options) {
  if (!emb.text) throw Error(Errc::MissingFeatureSource, "text embedding required");
  if (emb.frames.rows() < 1) throw Error(Errc::TooFewFrames, "at least one frame embedding required");
  double sum = 0.0;
  for (Eigen::Index t = 0; t < emb.frames.rows(); ++t) {
    double c = 0.0;
    try {
      c = cosine_similarity(*emb.text, emb.frames.row(t).transpose());
    } catch (const Error& e) {
      throw e.with_context("frame " + std::to_string(t));
    }
    sum += options.clamp_negative ? std::max(0.0, c) : c;
  }
  return options.scale * sum / static_cast<double>(emb.frames.rows());
}

double clip_temp_score(const EmbeddingSet& emb) {
  const auto t_count = emb.frames.rows();
  if (t_count < 2) throw Error(Errc::TooFewFrames, "temporal consistency needs at least 2 frames");
  double sum = 0.0;
  for (Eigen::Index t = 0; t + 1 < t_count; ++t) {
    try {
      sum += cosine_similarity(emb.frames.row(t).transpose(), emb.frames.row(t + 1).transpose());
    } catch (const Error& e) {
      throw e.with_context("frames " + std::to_string(t) + "/" + std::to_string(t + 1));
    }
  }
  return sum / static_cast<double>(t_count - 1);
}

MlpWeights parse_mlp_weights(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty())
    throw Error(Errc::SchemaError, "weights need a non-empty 'layers' list");
  MlpWeights weights;
  const auto& layers = doc["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    const std::string where = "layer " + std::to_string(i);
    if (!layer.is_object() || !layer.contains("w") || !layer.contains("b"))
      throw Error(Errc::SchemaError, where + " needs 'w' and 'b'");
    const auto& w = layer["w"];
    const auto& b = layer["b"];
    if (!w.is_array() || w.empty() || !w[0].is_array() || w[0].empty() || !b.is_array())
      throw Error(Errc::SchemaError, where + ": 'w' must be a non-empty out x in matrix, 'b' a list");

    MlpLayer parsed;
    const auto rows = static_cast<Eigen::Index>(w.size());
    const auto cols = static_cast<Eigen::Index>(w[0].size());
    parsed.weight.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = w[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw Error(Errc::DimensionMismatch, where + ": ragged weight matrix");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) throw Error(Errc::SchemaError, where + ": non-numeric weight");
        parsed.weight(r, c) = v.get<double>();
      }
    }
    if (static_cast<Eigen::Index>(b.size()) != rows)
      throw Error(Errc::DimensionMismatch, where + ": bias length " + std::to_string(b.size()) + " != out dim " +
                                               std::to_string(rows));
    parsed.bias.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& v = b[static_cast<std::size_t>(r)];
      if (!v.is_number()) throw Error(Errc::SchemaError, where + ": non-numeric bias");
      parsed.bias(r) = v.get<double>();
    }

    const std::string activation = layer.value("activation", "none");
    if (activation == "relu")
      parsed.activation = Activation::Relu;
    else if (activation == "none")
      parsed.activation = Activation::None;
    else
      throw Error(Errc::UnknownActivation, where + ": activation '" + activation + "'");

    if (!weights.layers.empty() && weights.layers.back().weight.rows() != cols)
      throw Error(Errc::DimensionMismatch, where + ": input dim " + std::to_string(cols) +
                                               " does not match previous output dim " +
                                               std::to_string(weights.layers.back().weight.rows()));
    weights.layers.push_back(std::move(parsed));
  }
  if (weights.layers.back().weight.rows() != 1)
    throw Error(Errc::DimensionMismatch, "scorer head must end in a single output");
  return weights;
}

MlpWeights load_mlp_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open weights file " + path.string());
  try {
    return parse_mlp_weights(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::SchemaError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

Eigen::VectorXd mlp_forward_vector(const MlpWeights& weights, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != weights.input_dim())
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(x.size()) + " values, head expects " +
                                             std::to_string(weights.input_dim()));
  Eigen::VectorXd h = x;
  for (const auto& layer : weights.layers) {
    h = layer.weight * h + layer.bias;
    if (layer.activation == Activation::Relu) h = h.cwiseMax(0.0);
  }
  return h;
}

double mlp_forward(const MlpWeights& weights, const Eigen::VectorXd& x) {
  const auto out = mlp_forward_vector(weights, x);
  if (out.size() != 1) throw Error(Errc::DimensionMismatch, "head produces " + std::to_string(out.size()) + " outputs");
  return out(0);
}

double vqa_score(const MlpWeights& weights, const FeatureMatrix& per_frame) {
  if (2 * per_frame.cols() != weights.input_dim())
    throw Error(Errc::DimensionMismatch, "pooled features have " + std::to_string(2 * per_frame.cols()) +
                                             " values, head expects 2D = " + std::to_string(weights.input_dim()));
  const auto pooled = pool_mean_std(per_frame);
  return mlp_forward(weights, to_eigen(pooled).row(0).transpose());
}

double sharpness_score(const FrameSequence& frames) {
  if (frames.count == 0) throw Error(Errc::TooFewFrames, "sharpness needs at least one frame");
  const std::size_t h = frames.height;
  const std::size_t w = frames.width;
  const double norm = (4.0 * 255.0) * (4.0 * 255.0);
  double total = 0.0;
  for (std::size_t t = 0; t < frames.count; ++t) {
    const auto luma = frame_luma(frames, t);
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> lap(h * w);
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t up = y == 0 ? 0 : y - 1;
      const std::size_t down = std::min(y + 1, h - 1);
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t left = x == 0 ? 0 : x - 1;
        const std::size_t right = std::min(x + 1, w - 1);
        lap[y * w + x] = 4.0 * luma[y * w + x] - luma[up * w + x] - luma[down * w + x] - luma[y * w + left] -
                         luma[y * w + right];
        sum += lap[y * w + x];
      }
    }
    const double mean = sum / static_cast<double>(h * w);
    for (double v : lap) sum_sq += (v - mean) * (v - mean);
    total += sum_sq / static_cast<double>(h * w) / norm;
  }
  return total / static_cast<double>(frames.count);
}

double dynamics_score(const FrameSequence& frames) {
  if (frames.count < 2) throw Error(Errc::TooFewFrames, "dynamics needs at least 2 frames");
  double total = 0.0;
  auto previous = frame_luma(frames, 0);
  for (std::size_t t = 1; t < frames.count; ++t) {
    auto current = frame_luma(frames, t);
    double diff = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) diff += std::abs(current[i] - previous[i]);
    total += diff / static_cast<double>(current.size()) / 255.0;
    previous = std::move(current);
  }
  return std::min(1.0, total / static_cast<double>(frames.count - 1));
}

PerSampleMetric::Score EmbeddingSimilarityMetric::score_sample(const EvalSample& sample) const {
  EmbeddingSet emb;
  emb.frames = to_eigen(require_feature(sample, options_.frame_source));
  if (options_.mode == Mode::FrameToFrame) return {clip_temp_score(emb), {}};

  const auto& text = require_feature(sample, options_.text_source);
  if (text.rows() != 1)
    throw Error(Errc::DimensionMismatch, "text embedding '" + options_.text_source + "' must be a single vector");
  emb.text = to_eigen(text).row(0).transpose();
  return {clip_sim_score(emb, options_.sim), {}};
}

VqaHeadMetric::VqaHeadMetric(MlpWeights weights, std::string feature_source, std::size_t grid)
    : weights_(std::move(weights)), feature_source_(std::move(feature_source)), grid_(grid) {}

PerSampleMetric::Score VqaHeadMetric::score_sample(const EvalSample& sample) const {
  return {vqa_score(weights_, sample_rows(sample, feature_source_, grid_)), {}};
}

PerSampleMetric::Score FrameStatisticMetric::score_sample(const EvalSample& sample) const {
  const auto& frames = require_frames(sample);
  return {kind_ == Kind::Sharpness ? sharpness_score(frames) : dynamics_score(frames), {}};
}

}  // namespace aigve
