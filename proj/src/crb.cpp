#include "gqfi/crb.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

namespace gqfi {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller normal pairs over a 64-bit Mersenne Twister stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    double acc = 0.0;
    for (size_t i = lo; i < hi; ++i) acc += v[i];
    return acc;
  }
  const size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

Eigen::MatrixXd draw_record(const MeasurementModel& model, int shots, std::uint64_t stream_seed) {
  const Eigen::LLT<Mat4> llt(model.outcome_cov);
  const Mat4 chol = llt.matrixL();
  NormalStream normals(stream_seed);
  Eigen::MatrixXd record(shots, 4);
  for (int s = 0; s < shots; ++s) {
    Vec4 z;
    for (int k = 0; k < 4; ++k) z(k) = normals.next();
    record.row(s) = (model.outcome_mean + chol * z).transpose();
  }
  return record;
}

// Zero-mean Gaussian log-likelihood up to a constant, from the sufficient
// statistic S = (1/shots) sum x x^T.
double log_likelihood(const Mat4& scatter, int shots, const ProbeParams& p, Parameter which,
                      double theta) {
  const ProbeParams q = with_parameter(p, which, theta);
  const Mat4 cov = probe_sigma(q, CovarianceModel::Conjugated) + Mat4::Identity();
  const Eigen::LLT<Mat4> llt(cov);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Mat4 l = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < 4; ++i) logdet += 2.0 * std::log(l(i, i));
  const double quad = llt.solve(scatter).trace();
  return -0.5 * shots * (logdet + quad);
}

}  // namespace

MeasurementModel measurement_model(const ProbeParams& p) {
  MeasurementModel m;
  m.outcome_cov = probe_sigma(p, CovarianceModel::Conjugated) + Mat4::Identity();
  m.outcome_mean = Vec4::Zero();
  return m;
}

Eigen::MatrixXd sample_outcomes(const ProbeParams& p, Parameter which, double theta_star,
                                int shots, std::uint64_t seed) {
  if (shots < 1) throw UnknownParameterError("sample_outcomes: shots must be >= 1");
  const ProbeParams q = with_parameter(p, which, theta_star);
  validate_params(q);
  return draw_record(measurement_model(q), shots, splitmix64(seed));
}

double classical_fisher(const ProbeParams& p, Parameter which) {
  const Mat4 cov = probe_sigma(p, CovarianceModel::Conjugated) + Mat4::Identity();
  const Mat4 dcov = d_sigma(p, which, CovarianceModel::Conjugated);
  const Mat4 w = cov.ldlt().solve(dcov);
  return 0.5 * (w * w).trace();
}

double mle_estimate(const Eigen::MatrixXd& record, const ProbeParams& p, Parameter which,
                    double search_lo, double search_hi) {
  if (record.rows() < 1 || record.cols() != 4) {
    throw UnknownParameterError("mle_estimate: record must be shots x 4");
  }
  if (!(search_lo < search_hi)) {
    throw UnknownParameterError("mle_estimate: empty search interval");
  }
  const int shots = static_cast<int>(record.rows());
  const Mat4 scatter = (record.transpose() * record) / static_cast<double>(shots);
  auto ll = [&](double theta) { return log_likelihood(scatter, shots, p, which, theta); };

  // Golden-section maximization to 1e-8 in theta.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = search_lo, b = search_hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ll(c), fd = ll(d);
  while (b - a > 1e-8) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = ll(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = ll(d);
    }
  }
  double theta = 0.5 * (a + b);

  // Flat likelihoods and boundary optima are not interior maxima.
  const double span = search_hi - search_lo;
  const double f_lo = ll(search_lo), f_hi = ll(search_hi), f_mid = ll(theta);
  if (std::abs(f_mid - f_lo) < 1e-10 * std::max(1.0, std::abs(f_mid)) &&
      std::abs(f_mid - f_hi) < 1e-10 * std::max(1.0, std::abs(f_mid))) {
    throw NoInteriorMaximumError("mle_estimate: likelihood is flat over the interval");
  }
  if (theta - search_lo < 1e-6 * span || search_hi - theta < 1e-6 * span) {
    throw NoInteriorMaximumError("mle_estimate: optimum pinned to interval endpoint");
  }

  // Local quadratic polish.
  const double h = 1e-5 * span;
  const double ym = ll(theta - h), y0 = f_mid, yp = ll(theta + h);
  const double denom = ym - 2.0 * y0 + yp;
  if (denom < -1e-300) {
    const double shift = 0.5 * h * (ym - yp) / denom;
    if (std::abs(shift) < h) theta += shift;
  }
  return theta;
}

namespace {

CrbReport crb_report_impl(const ProbeParams& p, Parameter which, double theta_star, int shots,
                          int trials, std::uint64_t seed, bool parallel) {
  if (shots < 2 || trials < 2) {
    throw UnknownParameterError("crb_report: shots and trials must be >= 2");
  }
  const ProbeParams at_star = with_parameter(p, which, theta_star);
  validate_params(at_star);

  CrbReport rep;
  rep.which = which;
  rep.theta_star = theta_star;
  rep.shots = shots;
  rep.trials = trials;
  rep.seed = seed;
  rep.classical_fi = classical_fisher(at_star, which);
  rep.qfi = qfi_fidelity_limit(at_star, which, CovarianceModel::Conjugated).value;
  rep.crb = 1.0 / (shots * rep.qfi);
  rep.classical_bound = 1.0 / (shots * rep.classical_fi);

  const double half_width = 0.5;
  const double lo = (which == Parameter::Phi) ? theta_star - half_width
                                              : std::max(theta_star - half_width, 1e-6);
  const double hi = theta_star + half_width;

  std::vector<double> estimates(trials, 0.0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t stream = splitmix64(seed ^ (0x51ed2701ULL + static_cast<std::uint64_t>(t)));
    const Eigen::MatrixXd record = draw_record(measurement_model(at_star), shots, stream);
    estimates[t] = mle_estimate(record, p, which, lo, hi);
  }

  const double mean = pairwise_sum(estimates, 0, estimates.size()) / trials;
  std::vector<double> sq(trials);
  for (int t = 0; t < trials; ++t) sq[t] = (estimates[t] - mean) * (estimates[t] - mean);
  rep.empirical_variance = pairwise_sum(sq, 0, sq.size()) / (trials - 1);
  rep.bias = mean - theta_star;
  return rep;
}

}  // namespace

CrbReport crb_report(const ProbeParams& p, Parameter which, double theta_star, int shots,
                     int trials, std::uint64_t seed) {
  return crb_report_impl(p, which, theta_star, shots, trials, seed, true);
}

CrbReport crb_report_serial(const ProbeParams& p, Parameter which, double theta_star,
                            int shots, int trials, std::uint64_t seed) {
  return crb_report_impl(p, which, theta_star, shots, trials, seed, false);
}

}  // namespace gqfi
