#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyblock/anfis/dataset.hpp"

namespace fuzzyblock::anfis {

// Generalized bell: 1 / (1 + |(x - c) / a|^(2b)).
struct BellMf {
  double c = 0.0;
  double a = 1.0;
  double b = 2.0;

  double operator()(double x) const;
};

// First-order TSK model on normalized inputs. Rules enumerate every
// combination of input MFs, first input most significant.
struct TskModel {
  std::vector<std::string> input_names;
  std::vector<std::vector<BellMf>> mfs;          // per input
  std::vector<std::vector<double>> consequents;  // per rule: c0, c1..cd
  NormalizationRecord normalization;
  std::vector<double> medians;  // raw input medians of the training data

  std::size_t inputs() const { return mfs.size(); }
  std::size_t rules() const;
  std::vector<int> rule_mfs(std::size_t rule) const;
  // Number of premise parameters (3 per MF).
  std::size_t premise_size() const;
  std::vector<double> premises() const;
  void set_premises(const std::vector<double>& p);
};

inline constexpr std::size_t kMaxRules = 1024;

// Centers equispaced over each column's observed range, a = half spacing,
// b = 2, zero consequents.
TskModel init_model(const Eigen::MatrixXd& x, const std::vector<int>& mfs_per_input);

struct Forward {
  double output = 0.0;
  Eigen::VectorXd strengths;  // normalized firing strengths
};

Forward forward(const TskModel& model, const double* x);
Eigen::VectorXd predict(const TskModel& model, const Eigen::MatrixXd& x);

double rmse(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
// 0.5 * mean squared error, the quantity the premise step descends.
double loss(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
// d loss / d premises, in premises() order.
std::vector<double> premise_gradient(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Least-squares consequents for fixed premises. Minimum-norm solution, with a
// small ridge when the design is rank deficient.
void fit_consequents(TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct TrainOptions {
  int epochs = 100;
  double learn_rate = 0.01;
};

struct TrainResult {
  TskModel model;
  std::vector<double> rmse_history;  // nonincreasing
  double final_learn_rate = 0.0;
};

TrainResult train(TskModel model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainOptions& opts);

// Linguistic labels for `count` MFs ordered by center.
std::vector<std::string> mf_labels(std::size_t count);
std::vector<std::string> extract_rules(const TskModel& model);

struct DamagePoint {
  double angle_deg = 0.0;
  double sf = 0.0;  // de-normalized
};

// Surrogate output around the section: angle swept over bin centers in
// [-180, 180), the other inputs held at their medians unless overridden
// (raw units, keyed by input index).
std::vector<DamagePoint> damage_map(const TskModel& model, int bins, int angle_input = kAngleInput,
                                    const std::map<int, double>& overrides = {});

// Raw-unit prediction through the stored normalization.
double predict_raw(const TskModel& model, const std::vector<double>& raw);

// Dataset helpers.
Eigen::MatrixXd input_matrix(const std::vector<Sample>& samples);
Eigen::VectorXd target_vector(const std::vector<Sample>& samples);

}  // namespace fuzzyblock::anfis
