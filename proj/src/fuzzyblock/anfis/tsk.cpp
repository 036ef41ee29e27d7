#include "fuzzyblock/anfis/tsk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::anfis {

namespace {

constexpr double kTinyStrength = 1e-300;
constexpr double kMinWidth = 1e-3;
constexpr double kMinShape = 0.5;

struct BellTerms {
  double mu;
  double dc, da, db;
};

BellTerms bell_with_partials(const BellMf& m, double x) {
  const double z = (x - m.c) / m.a;
  const double az = std::abs(z);
  if (az == 0.0) return {1.0, 0.0, 0.0, 0.0};
  const double u = std::pow(az, 2.0 * m.b);
  const double mu = 1.0 / (1.0 + u);
  const double du_dz = 2.0 * m.b * u / z;  // 2b |z|^(2b-1) sign(z)
  const double mu2 = mu * mu;
  return {mu, mu2 * du_dz / m.a, mu2 * du_dz * z / m.a, -mu2 * 2.0 * std::log(az) * u};
}

}  // namespace

double BellMf::operator()(double x) const {
  const double az = std::abs((x - c) / a);
  return 1.0 / (1.0 + std::pow(az, 2.0 * b));
}

std::size_t TskModel::rules() const {
  std::size_t r = 1;
  for (const auto& m : mfs) r *= m.size();
  return r;
}

std::vector<int> TskModel::rule_mfs(std::size_t rule) const {
  std::vector<int> idx(inputs());
  for (std::size_t k = inputs(); k-- > 0;) {
    idx[k] = static_cast<int>(rule % mfs[k].size());
    rule /= mfs[k].size();
  }
  return idx;
}

std::size_t TskModel::premise_size() const {
  std::size_t n = 0;
  for (const auto& m : mfs) n += 3 * m.size();
  return n;
}

std::vector<double> TskModel::premises() const {
  std::vector<double> p;
  for (const auto& in : mfs) {
    for (const auto& m : in) p.insert(p.end(), {m.c, m.a, m.b});
  }
  return p;
}

void TskModel::set_premises(const std::vector<double>& p) {
  require(p.size() == premise_size(), "premise vector length mismatch");
  std::size_t i = 0;
  for (auto& in : mfs) {
    for (auto& m : in) {
      m = {p[i], p[i + 1], p[i + 2]};
      i += 3;
    }
  }
}

TskModel init_model(const Eigen::MatrixXd& x, const std::vector<int>& mfs_per_input) {
  require(x.rows() >= 1, "training data is empty");
  require(static_cast<std::size_t>(x.cols()) == mfs_per_input.size(), "one MF count per input is required");
  std::size_t rules = 1;
  for (int m : mfs_per_input) {
    require(m >= 2, "each input needs at least 2 membership functions");
    rules *= static_cast<std::size_t>(m);
    if (rules > kMaxRules) {
      fail(ErrorCode::InvalidArgument,
           fmt::format("rule base exceeds {} rules; reduce mfs_per_input", kMaxRules));
    }
  }
  TskModel model;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double lo = x.col(k).minCoeff();
    const double hi = x.col(k).maxCoeff();
    if (!(hi > lo)) fail(ErrorCode::InvalidArgument, fmt::format("input column {} is constant", k));
    const int m = mfs_per_input[static_cast<std::size_t>(k)];
    const double step = (hi - lo) / (m - 1);
    std::vector<BellMf> row;
    for (int j = 0; j < m; ++j) row.push_back({lo + j * step, 0.5 * step, 2.0});
    model.mfs.push_back(std::move(row));
    model.input_names.push_back(k < static_cast<Eigen::Index>(kInputNames.size()) && x.cols() == 5
                                    ? kInputNames[static_cast<std::size_t>(k)]
                                    : fmt::format("x{}", k + 1));
  }
  model.consequents.assign(rules, std::vector<double>(static_cast<std::size_t>(x.cols()) + 1, 0.0));
  return model;
}

namespace {

// Raw (unnormalized) firing strengths.
Eigen::VectorXd raw_strengths(const TskModel& model, const double* x) {
  const std::size_t R = model.rules();
  Eigen::VectorXd w(static_cast<Eigen::Index>(R));
  std::vector<std::vector<double>> mu(model.inputs());
  for (std::size_t k = 0; k < model.inputs(); ++k) {
    for (const auto& m : model.mfs[k]) mu[k].push_back(m(x[k]));
  }
  for (std::size_t r = 0; r < R; ++r) {
    double p = 1.0;
    std::size_t rem = r;
    for (std::size_t k = model.inputs(); k-- > 0;) {
      p *= mu[k][rem % mu[k].size()];
      rem /= mu[k].size();
    }
    w[static_cast<Eigen::Index>(r)] = p;
  }
  return w;
}

double rule_output(const std::vector<double>& c, const double* x, std::size_t d) {
  double f = c[0];
  for (std::size_t k = 0; k < d; ++k) f += c[k + 1] * x[k];
  return f;
}

Eigen::VectorXd normalized(Eigen::VectorXd w) {
  const double s = w.sum();
  if (!(s > kTinyStrength)) return Eigen::VectorXd::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
  return w / s;
}

}  // namespace

Forward forward(const TskModel& model, const double* x) {
  Forward f;
  f.strengths = normalized(raw_strengths(model, x));
  for (std::size_t r = 0; r < model.rules(); ++r) {
    f.output += f.strengths[static_cast<Eigen::Index>(r)] * rule_output(model.consequents[r], x, model.inputs());
  }
  return f;
}

namespace {

std::vector<double> row_of(const Eigen::MatrixXd& x, Eigen::Index n) {
  std::vector<double> v(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index k = 0; k < x.cols(); ++k) v[static_cast<std::size_t>(k)] = x(n, k);
  return v;
}

}  // namespace

Eigen::VectorXd predict(const TskModel& model, const Eigen::MatrixXd& x) {
  require(static_cast<std::size_t>(x.cols()) == model.inputs(), "input width does not match the model");
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index n = 0; n < x.rows(); ++n) out[n] = forward(model, row_of(x, n).data()).output;
  return out;
}

double rmse(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return std::sqrt((predict(model, x) - y).squaredNorm() / static_cast<double>(y.size()));
}

double loss(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return 0.5 * (predict(model, x) - y).squaredNorm() / static_cast<double>(y.size());
}

std::vector<double> premise_gradient(const TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const std::size_t d = model.inputs();
  const std::size_t R = model.rules();
  std::vector<std::size_t> offset(d);
  for (std::size_t k = 0, o = 0; k < d; ++k) {
    offset[k] = o;
    o += 3 * model.mfs[k].size();
  }
  std::vector<double> grad(model.premise_size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  std::vector<std::vector<BellTerms>> terms(d);
  std::vector<std::vector<double>> dmu(d);
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    const auto xv = row_of(x, n);
    for (std::size_t k = 0; k < d; ++k) {
      terms[k].clear();
      for (const auto& m : model.mfs[k]) terms[k].push_back(bell_with_partials(m, xv[k]));
      dmu[k].assign(model.mfs[k].size(), 0.0);
    }
    double W = 0.0, num = 0.0;
    std::vector<double> w(R), f(R);
    std::vector<int> idx(d);
    for (std::size_t r = 0; r < R; ++r) {
      std::size_t rem = r;
      double p = 1.0;
      for (std::size_t k = d; k-- > 0;) {
        idx[k] = static_cast<int>(rem % model.mfs[k].size());
        rem /= model.mfs[k].size();
        p *= terms[k][static_cast<std::size_t>(idx[k])].mu;
      }
      w[r] = p;
      f[r] = rule_output(model.consequents[r], xv.data(), d);
      W += p;
      num += p * f[r];
    }
    if (!(W > kTinyStrength)) continue;  // uniform fallback has no premise dependence
    const double yhat = num / W;
    const double g = (yhat - y[n]) * inv_n;
    // d yhat / d mu_{k,j} = sum over rules using MF j on input k of
    // (f_r - yhat) / W * prod_{k' != k} mu.
    std::vector<double> prefix(d + 1);
    for (std::size_t r = 0; r < R; ++r) {
      std::size_t rem = r;
      for (std::size_t k = d; k-- > 0;) {
        idx[k] = static_cast<int>(rem % model.mfs[k].size());
        rem /= model.mfs[k].size();
      }
      prefix[0] = 1.0;
      for (std::size_t k = 0; k < d; ++k) prefix[k + 1] = prefix[k] * terms[k][static_cast<std::size_t>(idx[k])].mu;
      const double coef = (f[r] - yhat) / W;
      double suffix = 1.0;
      for (std::size_t k = d; k-- > 0;) {
        dmu[k][static_cast<std::size_t>(idx[k])] += coef * prefix[k] * suffix;
        suffix *= terms[k][static_cast<std::size_t>(idx[k])].mu;
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t j = 0; j < model.mfs[k].size(); ++j) {
        const auto& t = terms[k][j];
        const double s = g * dmu[k][j];
        grad[offset[k] + 3 * j] += s * t.dc;
        grad[offset[k] + 3 * j + 1] += s * t.da;
        grad[offset[k] + 3 * j + 2] += s * t.db;
      }
    }
  }
  return grad;
}

void fit_consequents(TskModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const std::size_t d = model.inputs();
  const std::size_t R = model.rules();
  const Eigen::Index cols = static_cast<Eigen::Index>(R * (d + 1));
  Eigen::MatrixXd phi(x.rows(), cols);
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    const auto xv = row_of(x, n);
    const Eigen::VectorXd wn = normalized(raw_strengths(model, xv.data()));
    for (std::size_t r = 0; r < R; ++r) {
      const Eigen::Index base = static_cast<Eigen::Index>(r * (d + 1));
      const double wr = wn[static_cast<Eigen::Index>(r)];
      phi(n, base) = wr;
      for (std::size_t k = 0; k < d; ++k) phi(n, base + static_cast<Eigen::Index>(k) + 1) = wr * xv[k];
    }
  }
  Eigen::VectorXd theta;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(phi);
  const bool full_rank = cod.rank() == std::min(phi.rows(), phi.cols());
  if (full_rank) theta = cod.solve(y);
  if (!full_rank || !theta.allFinite()) {
    constexpr double lambda = 1e-8;
    if (phi.rows() < phi.cols()) {
      Eigen::MatrixXd g = phi * phi.transpose();
      g.diagonal().array() += lambda;
      theta = phi.transpose() * g.ldlt().solve(y);
    } else {
      Eigen::MatrixXd g = phi.transpose() * phi;
      g.diagonal().array() += lambda;
      theta = g.ldlt().solve(phi.transpose() * y);
    }
  }
  if (!theta.allFinite()) fail(ErrorCode::Numeric, "consequent least squares produced non-finite values");
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t k = 0; k <= d; ++k) {
      model.consequents[r][k] = theta[static_cast<Eigen::Index>(r * (d + 1) + k)];
    }
  }
}

TrainResult train(TskModel model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainOptions& opts) {
  require(opts.epochs >= 1, "epochs must be at least 1");
  require(opts.learn_rate > 0.0, "learning rate must be positive");
  require(x.rows() == y.size() && x.rows() > 0, "training inputs and targets disagree in length");
  require(static_cast<std::size_t>(x.cols()) == model.inputs(), "input width does not match the model");

  TrainResult res;
  double lr = opts.learn_rate;
  TskModel best = model;
  double best_rmse = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    fit_consequents(model, x, y);
    const double e = rmse(model, x, y);
    if (!std::isfinite(e)) fail(ErrorCode::Numeric, fmt::format("training loss became non-finite at epoch {}", epoch + 1));
    if (e <= best_rmse) {
      best = model;
      best_rmse = e;
    } else {
      // Reject the premise step and retry from the best model with half the rate.
      model = best;
      lr *= 0.5;
    }
    res.rmse_history.push_back(best_rmse);
    if (epoch + 1 == opts.epochs) break;

    const auto g = premise_gradient(model, x, y);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (!std::isfinite(gn)) fail(ErrorCode::Numeric, fmt::format("premise gradient became non-finite at epoch {}", epoch + 1));
    if (gn == 0.0) continue;
    auto p = model.premises();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i] / gn;
    for (std::size_t i = 0; i < p.size(); i += 3) {
      p[i + 1] = std::max(std::abs(p[i + 1]), kMinWidth);
      p[i + 2] = std::max(p[i + 2], kMinShape);
    }
    model.set_premises(p);
  }
  res.model = std::move(best);
  res.final_learn_rate = lr;
  return res;
}

std::vector<std::string> mf_labels(std::size_t count) {
  switch (count) {
    case 2: return {"low", "high"};
    case 3: return {"low", "medium", "high"};
    case 4: return {"very low", "low", "high", "very high"};
    case 5: return {"very low", "low", "medium", "high", "very high"};
    default: break;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(fmt::format("level{}", i + 1));
  return out;
}

std::vector<std::string> extract_rules(const TskModel& model) {
  const std::size_t d = model.inputs();
  // Label by rank of the center, so trained MFs that swap order stay readable.
  std::vector<std::vector<std::string>> label(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto names = mf_labels(model.mfs[k].size());
    std::vector<std::size_t> order(model.mfs[k].size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return model.mfs[k][a].c < model.mfs[k][b].c; });
    label[k].resize(order.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) label[k][order[rank]] = names[rank];
  }
  std::vector<std::string> out;
  for (std::size_t r = 0; r < model.rules(); ++r) {
    const auto idx = model.rule_mfs(r);
    std::string line = "IF ";
    for (std::size_t k = 0; k < d; ++k) {
      if (k) line += " AND ";
      line += fmt::format("{} is {}", model.input_names[k], label[k][static_cast<std::size_t>(idx[k])]);
    }
    const auto& c = model.consequents[r];
    line += fmt::format(" THEN {} = {}", kTargetName, c[0]);
    for (std::size_t k = 0; k < d; ++k) {
      line += fmt::format(" {} {}*{}", std::signbit(c[k + 1]) ? '-' : '+', std::abs(c[k + 1]), model.input_names[k]);
    }
    out.push_back(std::move(line));
  }
  return out;
}

double predict_raw(const TskModel& model, const std::vector<double>& raw) {
  const auto xn = model.normalization.normalize_inputs(raw);
  return model.normalization.denormalize_target(forward(model, xn.data()).output);
}

std::vector<DamagePoint> damage_map(const TskModel& model, int bins, int angle_input,
                                    const std::map<int, double>& overrides) {
  require(bins >= 8, "angular bin count must be at least 8");
  require(angle_input >= 0 && static_cast<std::size_t>(angle_input) < model.inputs(), "angle input out of range");
  require(model.medians.size() == model.inputs(), "model has no input medians");
  std::vector<double> raw = model.medians;
  for (const auto& [k, v] : overrides) {
    require(k >= 0 && static_cast<std::size_t>(k) < raw.size(), "override input index out of range");
    raw[static_cast<std::size_t>(k)] = v;
  }
  std::vector<DamagePoint> out;
  const double width = 360.0 / bins;
  for (int i = 0; i < bins; ++i) {
    const double angle = -180.0 + (i + 0.5) * width;
    raw[static_cast<std::size_t>(angle_input)] = angle;
    out.push_back({angle, predict_raw(model, raw)});
  }
  return out;
}

Eigen::MatrixXd input_matrix(const std::vector<Sample>& samples) {
  require(!samples.empty(), "dataset is empty");
  const std::size_t d = samples.front().inputs.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(d));
  for (std::size_t n = 0; n < samples.size(); ++n) {
    require(samples[n].inputs.size() == d, "ragged dataset");
    for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = samples[n].inputs[k];
  }
  return x;
}

Eigen::VectorXd target_vector(const std::vector<Sample>& samples) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t n = 0; n < samples.size(); ++n) y[static_cast<Eigen::Index>(n)] = samples[n].target;
  return y;
}

}  // namespace fuzzyblock::anfis
