#include "aigve/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "aigve/annotations.hpp"
#include "aigve/error.hpp"
#include "aigve/params.hpp"

namespace aigve {

Eigen::MatrixXd to_eigen(const FeatureMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m.at(r, c);
  return out;
}

GaussianStats fit_gaussian(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  if (n < 2) throw Error(Errc::TooFewSamples, "covariance needs at least 2 samples, got " + std::to_string(n));
  if (!samples.allFinite()) throw Error(Errc::NonFiniteValue, "feature pool contains non-finite values");
  GaussianStats stats;
  stats.n = static_cast<std::size_t>(n);
  stats.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - stats.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  stats.cov = 0.5 * (cov + cov.transpose());
  return stats;
}

GaussianStats fit_gaussian(const FeatureMatrix& samples) { return fit_gaussian(to_eigen(samples)); }

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw Error(Errc::DimensionMismatch, "sqrtm needs a square matrix");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw Error(Errc::NotSymmetric, "matrix is not symmetric within 1e-9");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success) throw Error(Errc::NotSymmetric, "eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double norm = lambda.cwiseAbs().maxCoeff();
  if (lambda.minCoeff() < -1e-8 * norm)
    throw Error(Errc::IndefiniteBeyondTolerance,
                "smallest eigenvalue " + std::to_string(lambda.minCoeff()) + " is below -1e-8*|S|");
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  Eigen::MatrixXd out = q * root.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b, double eps) {
  const auto d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || b.cov.rows() != d || a.cov.cols() != d || b.cov.cols() != d)
    throw Error(Errc::DimensionMismatch, "Gaussian summaries have different dimensions");

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd s1 = a.cov + eps * identity;
  const Eigen::MatrixXd s2 = b.cov + eps * identity;
  const Eigen::MatrixXd root1 = sqrtm_psd(s1);
  Eigen::MatrixXd inner = root1 * s2 * root1;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  const double trace_root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double distance = (a.mean - b.mean).squaredNorm() + s1.trace() + s2.trace() - 2.0 * trace_root;
  return std::max(0.0, distance);
}

InceptionScore inception_score(const Eigen::MatrixXd& probs, std::size_t splits) {
  const auto n = static_cast<std::size_t>(probs.rows());
  const auto k = probs.cols();
  if (splits == 0) throw Error(Errc::InvalidArgument, "splits must be at least 1");
  if (n < splits || n == 0)
    throw Error(Errc::TooFewSamples, std::to_string(n) + " rows cannot fill " + std::to_string(splits) + " splits");

  Eigen::MatrixXd p = probs;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    if (!p.row(r).allFinite() || (p.row(r).array() < 0.0).any())
      throw Error(Errc::RowNotDistribution, "row " + std::to_string(r) + " has negative or non-finite entries");
    const double sum = p.row(r).sum();
    if (std::abs(sum - 1.0) > 1e-6)
      throw Error(Errc::RowNotDistribution, "row " + std::to_string(r) + " sums to " + std::to_string(sum));
    p.row(r) /= sum;
  }

  std::vector<double> scores;
  scores.reserve(splits);
  for (std::size_t s = 0; s < splits; ++s) {
    const auto begin = static_cast<Eigen::Index>(s * n / splits);
    const auto end = static_cast<Eigen::Index>((s + 1) * n / splits);
    const auto count = static_cast<double>(end - begin);
    // Shifted mean: exactly the shared row when every row in the chunk is identical.
    Eigen::RowVectorXd marginal = Eigen::RowVectorXd::Zero(k);
    for (Eigen::Index r = begin; r < end; ++r) marginal += p.row(r) - p.row(begin);
    marginal = p.row(begin) + marginal / count;

    double kl_sum = 0.0;
    for (Eigen::Index r = begin; r < end; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        const double pc = p(r, c);
        if (pc > 0.0) kl_sum += pc * std::log(pc / marginal(c));
      }
    }
    scores.push_back(std::exp(kl_sum / count));
  }

  InceptionScore out;
  for (double s : scores) out.mean += s;
  out.mean /= static_cast<double>(scores.size());
  for (double s : scores) out.std += (s - out.mean) * (s - out.mean);
  out.std = std::sqrt(out.std / static_cast<double>(scores.size()));
  return out;
}

InceptionScore inception_score(const FeatureMatrix& probs, std::size_t splits) {
  return inception_score(to_eigen(probs), splits);
}

FeatureMatrix sample_rows(const EvalSample& sample, const std::string& source, std::size_t grid) {
  if (source == kClassicalSource) return extract_classical_frame_features(require_frames(sample), grid);
  return require_feature(sample, source);
}

FrechetMetric::FrechetMetric(Options options) : options_(std::move(options)) {
  if (!options_.reference_annotations) return;
  const auto set = load_annotations(*options_.reference_annotations);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto sample = get_eval_sample(set, i, {});
    add_rows(sample_rows(sample, options_.feature_source, options_.grid), real_);
  }
}

std::unique_ptr<Metric> FrechetMetric::from_config(const config::ConfigNode& params,
                                                   const std::filesystem::path& base_dir,
                                                   const std::string& default_source) {
  ParamReader reader(params);
  Options options;
  options.feature_source = reader.get_string("feature_source", default_source);
  options.role_key = reader.get_string("role_key", options.role_key);
  options.eps = reader.get_double("eps", options.eps);
  options.min_samples = reader.get_size("min_samples", options.min_samples);
  options.grid = reader.get_size("grid", options.grid);
  if (auto ref = reader.get_optional_string("reference_annotations")) options.reference_annotations = base_dir / *ref;
  reader.finish();
  if (options.eps < 0.0) throw Error(Errc::InvalidArgument, "eps must be non-negative");
  return std::make_unique<FrechetMetric>(std::move(options));
}

void FrechetMetric::add_rows(const FeatureMatrix& rows, std::vector<std::vector<double>>& pool) {
  if (dim_ && *dim_ != rows.cols())
    throw Error(Errc::DimensionMismatch,
                "feature width " + std::to_string(rows.cols()) + " differs from " + std::to_string(*dim_));
  dim_ = rows.cols();
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto row = rows.row(r);
    pool.emplace_back(row.begin(), row.end());
  }
}

void FrechetMetric::process(std::span<const EvalSample> batch, ProcessOutput& out) {
  for (const auto& sample : batch) {
    try {
      const auto rows = sample_rows(sample, options_.feature_source, options_.grid);
      if (options_.reference_annotations) {
        add_rows(rows, generated_);
        continue;
      }
      const auto role = sample.record.attribute(options_.role_key);
      if (role == "real")
        add_rows(rows, real_);
      else if (role == "generated")
        add_rows(rows, generated_);
      else
        throw Error(Errc::SchemaError, "record has no '" + options_.role_key + "' of \"real\" or \"generated\"");
    } catch (const std::exception& e) {
      out.add_error(sample, e.what());
    }
  }
}

namespace {

Eigen::MatrixXd pool_matrix(const std::vector<std::vector<double>>& pool, std::size_t dim) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < pool.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = pool[r][c];
  return m;
}

}  // namespace

std::map<std::string, double> FrechetMetric::compute_metrics() {
  const std::size_t needed = std::max<std::size_t>(options_.min_samples, 2);
  if (real_.size() < needed || generated_.size() < needed)
    throw Error(Errc::InsufficientSamples, "'" + name() + "' needs " + std::to_string(needed) +
                                               " rows per pool, has real=" + std::to_string(real_.size()) +
                                               " generated=" + std::to_string(generated_.size()));
  const std::size_t dim = *dim_;
  if (real_.size() <= dim || generated_.size() <= dim)
    std::clog << "warning: '" << name() << "' pools have no more rows than feature dimensions (" << dim
              << "); covariance is rank-deficient\n";

  const double distance = frechet_distance(fit_gaussian(pool_matrix(real_, dim)),
                                           fit_gaussian(pool_matrix(generated_, dim)), options_.eps);
  return {{name(), distance},
          {name() + "_mean_score", distance},
          {name() + "_real_rows", static_cast<double>(real_.size())},
          {name() + "_generated_rows", static_cast<double>(generated_.size())}};
}

InceptionScoreMetric::InceptionScoreMetric(std::string feature_source, std::size_t splits)
    : feature_source_(std::move(feature_source)), splits_(splits) {
  if (splits_ == 0) throw Error(Errc::InvalidArgument, "splits must be at least 1");
}

void InceptionScoreMetric::process(std::span<const EvalSample> batch, ProcessOutput& out) {
  for (const auto& sample : batch) {
    try {
      const auto& probs = require_feature(sample, feature_source_);
      if (classes_ && *classes_ != probs.cols())
        throw Error(Errc::DimensionMismatch, std::to_string(probs.cols()) + " classes, expected " +
                                                 std::to_string(*classes_));
      classes_ = probs.cols();
      for (std::size_t r = 0; r < probs.rows(); ++r) {
        const auto row = probs.row(r);
        rows_.emplace_back(row.begin(), row.end());
      }
    } catch (const std::exception& e) {
      out.add_error(sample, e.what());
    }
  }
}

std::map<std::string, double> InceptionScoreMetric::compute_metrics() {
  if (rows_.empty()) throw Error(Errc::InsufficientSamples, "'" + name() + "' received no probability rows");
  const auto score = inception_score(pool_matrix(rows_, *classes_), splits_);
  return {{name(), score.mean}, {name() + "_std", score.std}, {name() + "_mean_score", score.mean}};
}

}  // namespace aigve
