#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "phykrig/dataset.hpp"
#include "phykrig/optimizer.hpp"
#include "phykrig/physics.hpp"

namespace phykrig {

// Gaussian predictive marginals per query row and output column, in the
// original (de-standardized) units of the training data.
struct PredictiveDistribution {
  Eigen::MatrixXd mean;      // n x m
  Eigen::MatrixXd variance;  // n x m, entries >= 0
};

enum class ModelKind {
  ZeroMeanGp,  // plain GP, prior mean 0
  PhyMeanGp,   // GP with the physics prediction as prior mean
  GpBias,      // additive-correction-only adjustment (reduces to PhyMeanGp)
  GpScale,     // multiplicative-correction-only adjustment
  Ar1,         // two-stage co-kriging with a constant scale factor
  Cka,         // full co-kriging adjustment: input-dependent scale + bias
  Rra          // ridge regression adjustment on random Fourier features
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Everything a fit needs besides the data: hyperparameter search settings,
// seeds, and the model-specific knobs.
struct FitConfig {
  OptimizerConfig optimizer;          // 500 iterations, lr 0.05, 3 restarts
  bool optimize = true;               // false: keep the initial hyperparameters
  Eigen::VectorXd initial_params;     // empty = model defaults
  Eigen::VectorXd warm_start;         // empty = none; replaces the default initial point
  std::uint64_t seed = 0;
  // Cap on the number of rows used for hyperparameter search (0 = all rows).
  // The posterior is always conditioned on the full data.
  int max_optimization_points = 0;
  bool standardize_inputs = true;

  // AR1: size and placement of the low-fidelity design.
  int ar1_low_fidelity_count = 40;
  Eigen::VectorXd ar1_box_low, ar1_box_high;

  // RRA: feature count per adjustment function, ridge strength, and the
  // feature lengthscale (in transformed input units). The features are
  // near-unit-norm and the residuals are scale-normalized before the solve,
  // so lambda plays the role of an assumed noise variance in those units;
  // the default matches the GP family's initial noise level (std 0.1).
  int rra_feature_count = 100;
  double rra_lambda = 0.01;
  double rra_lengthscale = 1.0;
};

class SurrogateModel {
public:
  virtual ~SurrogateModel() = default;
  virtual ModelKind kind() const = 0;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual Eigen::Index training_count() const = 0;
  // Marginal predictions for the rows of X.
  virtual PredictiveDistribution predict(const Eigen::MatrixXd& X) const = 0;
  // Versioned text dump; load_surrogate() restores it.
  virtual void save(std::ostream& out) const = 0;
};

// Fit a single-output surrogate. `physics` may be null only for ZeroMeanGp.
// GP variants require N >= 1; Cka and Rra accept N = 0 (prior only).
std::unique_ptr<SurrogateModel> fit_surrogate(ModelKind kind, const Dataset& data,
                                              std::shared_ptr<const PhysicsModel> physics,
                                              const FitConfig& config);

std::unique_ptr<SurrogateModel> load_surrogate(std::istream& in);

}  // namespace phykrig
