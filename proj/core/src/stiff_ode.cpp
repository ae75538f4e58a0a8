#include "frontline/stiff_ode.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr int kMaxOrder = 5;
constexpr int kNewtonMaxIter = 4;
constexpr int kFixedStepNewtonMaxIter = 50;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr int kJacobianReuseLimit = 20;
constexpr double kSlowConvergenceRate = 0.5;
const double kEps = std::numeric_limits<double>::epsilon();

double rms(const Vec& v) { return v.size() == 0 ? 0.0 : v.norm() / std::sqrt(static_cast<double>(v.size())); }

// Transforms differences for a step-size change by `factor`.
Mat compute_r(int order, double factor) {
  Mat m = Mat::Zero(order + 1, order + 1);
  m.row(0).setOnes();
  for (int i = 1; i <= order; ++i) {
    for (int j = 1; j <= order; ++j) m(i, j) = (i - 1 - factor * j) / static_cast<double>(i);
  }
  for (int i = 1; i <= order; ++i) m.row(i) = m.row(i).cwiseProduct(m.row(i - 1)).eval();
  return m;
}

void change_differences(Mat& d, int order, double factor) {
  const Mat ru = compute_r(order, factor) * compute_r(order, 1.0);
  d.topRows(order + 1) = (ru.transpose() * d.topRows(order + 1)).eval();
}

class RhsEvaluator {
 public:
  RhsEvaluator(const OdeRhs& rhs, IntegratorStats& stats) : rhs_(rhs), stats_(stats) {}

  // false when the callable threw a library error or produced non-finite values.
  bool operator()(double t, const Vec& y, Vec& out) {
    out.resize(y.size());
    ++stats_.rhs_evals;
    try {
      rhs_(t, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
           std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    } catch (const Error& e) {
      last_failure_ = e.what();
      return false;
    }
    if (!out.allFinite()) {
      last_failure_ = "right-hand side returned non-finite values";
      return false;
    }
    return true;
  }

  const std::string& last_failure() const { return last_failure_; }

 private:
  const OdeRhs& rhs_;
  IntegratorStats& stats_;
  std::string last_failure_;
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  double rate = 0.0;
  Vec y;
  Vec d;
};

class BdfStepper {
 public:
  BdfStepper(const OdeRhs& rhs, const Vec& y0, double t0, double t1, const Tolerances& tol, IntegratorStats& stats)
      : rhs_(rhs), eval_(rhs, stats), stats_(stats), tol_(tol), t_(t0), t_bound_(t1), y_(y0) {
    const auto n = y0.size();
    atol_ = Vec::Constant(n, tol.atol);
    if (!tol.atol_components.empty()) {
      if (static_cast<Eigen::Index>(tol.atol_components.size()) != n) {
        raise(ErrorCode::InvalidSpec, "atol_components size does not match the state");
      }
      atol_ = Eigen::Map<const Vec>(tol.atol_components.data(), n);
    }
    max_order_ = std::clamp(tol.max_order, 1, kMaxOrder);
    fixed_ = tol.fixed_step > 0.0;
    newton_tol_ = std::max(10.0 * kEps / tol.rtol, std::min(0.03, std::sqrt(tol.rtol)));
    if (fixed_) newton_tol_ = std::min(newton_tol_, 1e-12);

    for (int k = 1; k <= kMaxOrder; ++k) gamma_[k] = gamma_[k - 1] + 1.0 / k;
    for (int k = 0; k <= kMaxOrder; ++k) {
      alpha_[k] = gamma_[k];
      error_const_[k] = 1.0 / (k + 1);
    }

    Vec f0;
    if (!eval_(t_, y_, f0)) raise(ErrorCode::RhsFailure, "at t = " + num(t_) + ": " + eval_.last_failure());
    if (fixed_) {
      h_abs_ = tol.fixed_step;
    } else if (tol.initial_step > 0.0) {
      h_abs_ = tol.initial_step;
    } else {
      h_abs_ = initial_step(f0);
    }
    h_abs_ = std::min({h_abs_, tol.max_step, std::max(t_bound_ - t_, 0.0)});
    if (!(h_abs_ > 0.0)) h_abs_ = std::max(t_bound_ - t_, kEps);

    d_ = Mat::Zero(kMaxOrder + 3, n);
    d_.row(0) = y_.transpose();
    d_.row(1) = (f0 * h_abs_).transpose();
    refresh_jacobian(t_, y_, f0);
  }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const Vec& y() const { return y_; }

  // Evaluates the interpolant of the last accepted step at t in [t_old, t].
  Vec dense(double t) const {
    Vec out = d_.row(0).transpose();
    double p = 1.0;
    for (int j = 1; j <= dense_order_; ++j) {
      const double shift = t_ - dense_h_ * (j - 1);
      p *= (t - shift) / (dense_h_ * j);
      out += p * dense_d_.row(j).transpose();
    }
    return out;
  }

  void step() {
    t_old_ = t_;
    const double min_step = 10.0 * std::abs(std::nextafter(t_, INFINITY) - t_);
    double h_abs = h_abs_;
    if (!fixed_) {
      if (h_abs > tol_.max_step) {
        change_differences(d_, order_, tol_.max_step / h_abs);
        h_abs = tol_.max_step;
        n_equal_steps_ = 0;
        lu_.reset();
      } else if (h_abs < min_step) {
        change_differences(d_, order_, min_step / h_abs);
        h_abs = min_step;
        n_equal_steps_ = 0;
        lu_.reset();
      }
    }
    if (steps_since_jacobian_ >= kJacobianReuseLimit) jacobian_stale_ = true;
    if (jacobian_stale_) {
      Vec f;
      if (eval_(t_, y_, f)) {
        refresh_jacobian(t_, y_, f);
      }
    }

    bool current_jacobian = steps_since_jacobian_ == 0;
    double error_norm = 0.0;
    NewtonResult newton;
    double t_new = t_;
    Vec scale;
    double last_error_estimate = 0.0;

    for (;;) {
      if (h_abs < min_step) {
        std::ostringstream os;
        os << "step size " << h_abs << " underflowed at t = " << num(t_) << " (last error estimate "
           << last_error_estimate << ")";
        if (!eval_.last_failure().empty()) os << "; last rhs failure: " << eval_.last_failure();
        raise(ErrorCode::StepSizeUnderflow, os.str());
      }
      t_new = t_ + h_abs;
      if (t_new > t_bound_) {
        t_new = t_bound_;
        change_differences(d_, order_, std::abs(t_new - t_) / h_abs);
        n_equal_steps_ = 0;
        lu_.reset();
      }
      const double h = t_new - t_;
      h_abs = std::abs(h);

      Vec y_predict = d_.topRows(order_ + 1).colwise().sum().transpose();
      scale = atol_ + tol_.rtol * y_predict.cwiseAbs();
      Vec psi = Vec::Zero(y_.size());
      for (int k = 1; k <= order_; ++k) psi += gamma_[k] * d_.row(k).transpose();
      psi /= alpha_[order_];
      const double c = h / alpha_[order_];

      for (;;) {
        if (!lu_ || lu_c_ != c) factorize(c);
        newton = solve_system(t_new, y_predict, c, psi, scale);
        if (newton.converged || current_jacobian) break;
        Vec f;
        if (!eval_(t_new, y_predict, f)) break;
        refresh_jacobian(t_new, y_predict, f);
        current_jacobian = true;
      }

      if (!newton.converged) {
        if (fixed_) {
          raise(ErrorCode::NewtonDivergence,
                "Newton iteration failed in fixed-step mode at t = " + num(t_new) +
                    (eval_.last_failure().empty() ? "" : ": " + eval_.last_failure()));
        }
        ++stats_.steps_rejected;
        h_abs *= 0.5;
        change_differences(d_, order_, 0.5);
        n_equal_steps_ = 0;
        lu_.reset();
        continue;
      }

      scale = atol_ + tol_.rtol * newton.y.cwiseAbs();
      error_norm = rms((error_const_[order_] * newton.d).cwiseQuotient(scale));
      last_error_estimate = error_norm;
      if (!fixed_ && error_norm > 1.0) {
        ++stats_.steps_rejected;
        const double safety = 0.9 * (2 * kNewtonMaxIter + 1) / (2 * kNewtonMaxIter + newton.iterations);
        const double factor = std::max(kMinFactor, safety * std::pow(error_norm, -1.0 / (order_ + 1)));
        h_abs *= factor;
        change_differences(d_, order_, factor);
        n_equal_steps_ = 0;
        continue;
      }
      break;
    }

    ++stats_.steps_accepted;
    ++n_equal_steps_;
    ++steps_since_jacobian_;
    if (newton.rate > kSlowConvergenceRate) jacobian_stale_ = true;
    t_ = t_new;
    y_ = newton.y;
    h_abs_ = h_abs;

    d_.row(order_ + 2) = newton.d.transpose() - d_.row(order_ + 1);
    d_.row(order_ + 1) = newton.d.transpose();
    for (int i = order_; i >= 0; --i) d_.row(i) += d_.row(i + 1);

    dense_h_ = t_ - t_old_;
    dense_order_ = order_;
    dense_d_ = d_.topRows(order_ + 1);

    if (n_equal_steps_ < order_ + 1) return;

    if (fixed_) {
      if (order_ < max_order_) {
        ++order_;
        n_equal_steps_ = 0;
      }
      return;
    }

    const double safety = 0.9 * (2 * kNewtonMaxIter + 1) / (2 * kNewtonMaxIter + newton.iterations);
    const double inf = std::numeric_limits<double>::infinity();
    const double error_m =
        order_ > 1 ? rms((error_const_[order_ - 1] * d_.row(order_).transpose()).cwiseQuotient(scale)) : inf;
    const double error_p =
        order_ < max_order_ ? rms((error_const_[order_ + 1] * d_.row(order_ + 2).transpose()).cwiseQuotient(scale))
                            : inf;
    const double norms[3] = {error_m, error_norm, error_p};
    double best = -1.0;
    int delta = 0;
    for (int k = 0; k < 3; ++k) {
      const double f = norms[k] == 0.0 ? inf : std::pow(norms[k], -1.0 / (order_ + k));
      if (f > best) {
        best = f;
        delta = k - 1;
      }
    }
    order_ += delta;
    const double factor = std::min(kMaxFactor, safety * best);
    h_abs_ *= factor;
    change_differences(d_, order_, factor);
    n_equal_steps_ = 0;
    lu_.reset();
  }

 private:
  static std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  }

  double initial_step(const Vec& f0) {
    const Vec scale = atol_ + tol_.rtol * y_.cwiseAbs();
    const double d0 = rms(y_.cwiseQuotient(scale));
    const double d1 = rms(f0.cwiseQuotient(scale));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::max(t_bound_ - t_, kEps));
    Vec y1 = y_ + h0 * f0;
    Vec f1;
    if (!eval_(t_ + h0, y1, f1)) return h0;
    const double d2 = rms((f1 - f0).cwiseQuotient(scale)) / h0;
    double h1;
    if (d1 <= 1e-15 && d2 <= 1e-15) {
      h1 = std::max(1e-6, h0 * 1e-3);
    } else {
      h1 = std::pow(0.01 / std::max(d1, d2), 0.5);
    }
    return std::min(100.0 * h0, h1);
  }

  void refresh_jacobian(double t, const Vec& y, const Vec& f) {
    Vec jac_scale = atol_ / tol_.rtol;
    jacobian_ = fd_jacobian(rhs_, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), t,
                            std::span<const double>(jac_scale.data(), static_cast<std::size_t>(jac_scale.size())),
                            std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
    stats_.rhs_evals += y.size();
    ++stats_.jacobian_evals;
    steps_since_jacobian_ = 0;
    jacobian_stale_ = false;
    lu_.reset();
  }

  void factorize(double c) {
    const auto n = y_.size();
    lu_.emplace(Mat::Identity(n, n) - c * jacobian_);
    lu_c_ = c;
    ++stats_.lu_decompositions;
  }

  NewtonResult solve_system(double t_new, const Vec& y_predict, double c, const Vec& psi, const Vec& scale) {
    NewtonResult r;
    r.y = y_predict;
    r.d = Vec::Zero(y_predict.size());
    const int max_iter = fixed_ ? kFixedStepNewtonMaxIter : kNewtonMaxIter;
    double dy_norm_old = -1.0;
    Vec f;
    for (int k = 0; k < max_iter; ++k) {
      r.iterations = k + 1;
      ++stats_.newton_iters;
      if (!eval_(t_new, r.y, f)) break;
      const Vec dy = lu_->solve(c * f - psi - r.d);
      const double dy_norm = rms(dy.cwiseQuotient(scale));
      double rate = -1.0;
      if (dy_norm_old >= 0.0) {
        rate = dy_norm_old > 0.0 ? dy_norm / dy_norm_old : 0.0;
        r.rate = rate;
      }
      if (rate >= 0.0 &&
          (rate >= 1.0 || (!fixed_ && std::pow(rate, max_iter - k) / (1.0 - rate) * dy_norm > newton_tol_))) {
        break;
      }
      r.y += dy;
      r.d += dy;
      if (dy_norm == 0.0 || (rate >= 0.0 && rate / (1.0 - rate) * dy_norm < newton_tol_)) {
        r.converged = true;
        break;
      }
      dy_norm_old = dy_norm;
    }
    return r;
  }

  const OdeRhs& rhs_;
  RhsEvaluator eval_;
  IntegratorStats& stats_;
  Tolerances tol_;
  double t_;
  double t_old_ = 0.0;
  double t_bound_;
  Vec y_;
  Vec atol_;
  int max_order_ = kMaxOrder;
  bool fixed_ = false;
  double newton_tol_ = 0.0;
  double h_abs_ = 0.0;
  int order_ = 1;
  int n_equal_steps_ = 0;
  std::array<double, kMaxOrder + 1> gamma_{};
  std::array<double, kMaxOrder + 1> alpha_{};
  std::array<double, kMaxOrder + 2> error_const_{};
  Mat d_;
  Mat jacobian_;
  std::optional<Eigen::PartialPivLU<Mat>> lu_;
  double lu_c_ = 0.0;
  int steps_since_jacobian_ = 0;
  bool jacobian_stale_ = false;

  double dense_h_ = 0.0;
  int dense_order_ = 0;
  Mat dense_d_;
};

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Eigen::MatrixXd fd_jacobian(const OdeRhs& rhs, std::span<const double> y, double t, std::span<const double> scale,
                            std::span<const double> f0) {
  const auto n = static_cast<Eigen::Index>(y.size());
  if (!scale.empty() && scale.size() != y.size()) raise(ErrorCode::InvalidSpec, "jacobian scale size mismatch");
  const double root_eps = std::sqrt(kEps);
  Vec base(n);
  if (f0.size() == y.size()) {
    base = Eigen::Map<const Vec>(f0.data(), n);
  } else {
    rhs(t, y, std::span<double>(base.data(), static_cast<std::size_t>(n)));
  }
  Mat jac(n, n);
  std::vector<double> shifted(y.begin(), y.end());
  Vec f(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double yj = y[static_cast<std::size_t>(j)];
    const double sj = scale.empty() ? 1.0 : scale[static_cast<std::size_t>(j)];
    double delta = std::max(root_eps * std::abs(yj), root_eps * sj);
    if (!(delta > 0.0)) delta = root_eps;
    shifted[static_cast<std::size_t>(j)] = yj + delta;
    delta = shifted[static_cast<std::size_t>(j)] - yj;
    try {
      rhs(t, shifted, std::span<double>(f.data(), static_cast<std::size_t>(n)));
    } catch (const Error& e) {
      raise(ErrorCode::RhsFailure, std::string("jacobian column evaluation failed: ") + e.what());
    }
    jac.col(j) = (f - base) / delta;
    shifted[static_cast<std::size_t>(j)] = yj;
  }
  if (!jac.allFinite()) raise(ErrorCode::RhsFailure, "finite-difference jacobian is not finite");
  return jac;
}

IntegrationResult integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                            std::span<const double> output_times, const Tolerances& tol,
                            const StepObserver& observer) {
  if (!(t1 > t0)) raise(ErrorCode::InvalidSpec, "integration interval must have t1 > t0");
  if (!(tol.rtol >= 1e-12) || !(tol.atol > 0.0) || tol.max_order < 1 || tol.max_order > kMaxOrder) {
    raise(ErrorCode::InvalidSpec, "tolerances need rtol >= 1e-12, atol > 0 and 1 <= max_order <= 5");
  }
  for (double v : y0) {
    if (!std::isfinite(v)) raise(ErrorCode::InvalidSpec, "initial state must be finite");
  }
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < t0 || output_times[i] > t1 || (i > 0 && output_times[i] < output_times[i - 1])) {
      raise(ErrorCode::InvalidSpec, "output times must be sorted inside [t0, t1]");
    }
  }

  IntegrationResult result;
  std::size_t next = 0;
  const Vec start = Eigen::Map<const Vec>(y0.data(), static_cast<Eigen::Index>(y0.size()));
  while (next < output_times.size() && output_times[next] == t0) {
    result.times.push_back(t0);
    result.states.push_back(y0);
    ++next;
  }

  // Jacobian-related failures (RhsFailure from fd_jacobian) surface from here.
  BdfStepper stepper(rhs, start, t0, t1, tol, result.stats);
  result.t_final = t0;
  result.y_final = y0;
  while (stepper.t() < t1) {
    stepper.step();
    const double t = stepper.t();
    while (next < output_times.size() && output_times[next] <= t) {
      result.times.push_back(output_times[next]);
      result.states.push_back(output_times[next] == t ? to_std(stepper.y()) : to_std(stepper.dense(output_times[next])));
      ++next;
    }
    result.t_final = t;
    result.y_final = to_std(stepper.y());
    if (observer && observer(t, std::span<const double>(result.y_final))) {
      result.termination = Termination::Stopped;
      result.t_before = stepper.t_old();
      break;
    }
  }
  return result;
}

}  // namespace frontline
