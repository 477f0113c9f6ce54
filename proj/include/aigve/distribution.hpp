#pragma once

// Distribution-comparison metrics: Frechet distance between Gaussian fits of
// two feature pools (FID/FVD) and Inception Score.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aigve/config.hpp"
#include "aigve/features.hpp"
#include "aigve/metric.hpp"

namespace aigve {

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t n = 0;
};

/// Column means and unbiased (N-1) covariance, symmetrized. Rows are samples.
GaussianStats fit_gaussian(const Eigen::MatrixXd& samples);
GaussianStats fit_gaussian(const FeatureMatrix& samples);

Eigen::MatrixXd to_eigen(const FeatureMatrix& m);

/// Principal square root of a symmetric positive semi-definite matrix via
/// eigendecomposition; eigenvalues in [-1e-8*|S|, 0) are treated as zero.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& s);

inline constexpr double kDefaultFrechetEps = 1e-6;

/// |mu1-mu2|^2 + Tr(S1) + Tr(S2) - 2 Tr((S1^1/2 S2 S1^1/2)^1/2) with eps*I added
/// to both covariances, clamped at zero.
double frechet_distance(const GaussianStats& a, const GaussianStats& b, double eps = kDefaultFrechetEps);

struct InceptionScore {
  double mean = 0.0;
  double std = 0.0;
};

/// Rows are class distributions (renormalized when within 1e-6 of summing to
/// one). Rows are split in order into `splits` near-equal chunks; each chunk
/// scores exp(mean KL(p_i || chunk marginal)); returns mean and population std.
InceptionScore inception_score(const Eigen::MatrixXd& probs, std::size_t splits = 1);
InceptionScore inception_score(const FeatureMatrix& probs, std::size_t splits = 1);

/// Feature source name that makes pooled-feature metrics derive per-frame grid
/// statistics from decoded frames instead of reading a feature file.
inline constexpr const char* kClassicalSource = "classical";

/// Rows contributed by `sample` for `source`: the stored feature matrix, or
/// classical frame statistics when `source` is "classical".
FeatureMatrix sample_rows(const EvalSample& sample, const std::string& source, std::size_t grid);

/// FID/FVD accumulator. Rows of `feature_source` go to the real or generated
/// pool according to the record attribute `role_key`, or all to the generated
/// pool when a reference annotation set supplies the real pool.
class FrechetMetric final : public Metric {
 public:
  struct Options {
    std::string feature_source = "frame_features";
    std::string role_key = "role";
    double eps = kDefaultFrechetEps;
    std::size_t min_samples = 2;
    std::size_t grid = 2;
    std::optional<std::filesystem::path> reference_annotations;
  };

  explicit FrechetMetric(Options options);

  /// `fid`/`fvd` factory: reads Options from config, relative paths against `base_dir`.
  static std::unique_ptr<Metric> from_config(const config::ConfigNode& params, const std::filesystem::path& base_dir,
                                             const std::string& default_source);

  void process(std::span<const EvalSample> batch, ProcessOutput& out) override;
  std::map<std::string, double> compute_metrics() override;

  std::size_t real_rows() const noexcept { return real_.size(); }
  std::size_t generated_rows() const noexcept { return generated_.size(); }

 private:
  void add_rows(const FeatureMatrix& rows, std::vector<std::vector<double>>& pool);

  Options options_;
  std::optional<std::size_t> dim_;
  std::vector<std::vector<double>> real_;
  std::vector<std::vector<double>> generated_;
};

class InceptionScoreMetric final : public Metric {
 public:
  InceptionScoreMetric(std::string feature_source, std::size_t splits);

  void process(std::span<const EvalSample> batch, ProcessOutput& out) override;
  std::map<std::string, double> compute_metrics() override;

 private:
  std::string feature_source_;
  std::size_t splits_;
  std::optional<std::size_t> classes_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace aigve
