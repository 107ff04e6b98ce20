#include "lyapdisc/projgeom.hpp"

#include "lyapdisc/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace lyapdisc {

namespace {

void require_invertible(double det) {
  if (!(std::abs(det) > kInvertibleTol)) {
    std::ostringstream os;
    os << "matrix is not invertible (det = " << det << ")";
    throw Error(ErrorCode::NonInvertible, os.str());
  }
}

void require_sl2(const Matrix2& a) {
  if (!a.is_sl2()) {
    std::ostringstream os;
    os << "matrix is not in SL(2, R) (det = " << a.det() << ")";
    throw Error(ErrorCode::NotSl2, os.str());
  }
}

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

double canonical_angle(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  // fmod of a value just below a multiple of pi can land on pi after the shift.
  if (t >= kPi) t = 0.0;
  return t + 0.0;  // folds -0.0
}

ProjPoint ProjPoint::from_vector(Vec2 v) {
  if (v.x == 0.0 && v.y == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "zero vector has no projective class");
  }
  return ProjPoint(std::atan2(v.y, v.x));
}

Vec2 ProjPoint::representative() const { return {std::cos(theta_), std::sin(theta_)}; }

double Matrix2::det() const {
  const double bc = b_ * c_;
  const double err = std::fma(-b_, c_, bc);
  return std::fma(a_, d_, -bc) + err;
}

bool Matrix2::is_invertible() const { return std::abs(det()) > kInvertibleTol; }

bool Matrix2::is_sl2() const { return std::abs(det() - 1.0) < kSl2Tol; }

std::pair<double, double> Matrix2::singular_values() const {
  // A^T A = [[p, q], [q, r]]
  const double p = a_ * a_ + c_ * c_;
  const double q = a_ * b_ + c_ * d_;
  const double r = b_ * b_ + d_ * d_;
  const double mean = 0.5 * (p + r);
  const double radius = std::hypot(0.5 * (p - r), q);
  const double s1 = std::sqrt(mean + radius);
  const double s2 = s1 > 0.0 ? std::abs(det()) / s1 : 0.0;
  return {s1, s2};
}

ProjPoint Matrix2::least_expanding_direction() const {
  const double p = a_ * a_ + c_ * c_;
  const double q = std::fma(a_, b_, c_ * d_);
  const double r = b_ * b_ + d_ * d_;
  const auto [s1, s2] = singular_values();
  if (s1 - s2 <= 1e-15 * s1) return ProjPoint(0.5 * kPi);  // conformal: every direction
  // Top eigenvector of [[p, q], [q, r]] from the row with the larger diagonal,
  // using s1^2 - r = p - s2^2 to avoid cancellation.
  const double s2sq = s2 * s2;
  const Vec2 top = p >= r ? Vec2{p - s2sq, q} : Vec2{q, r - s2sq};
  return ProjPoint(std::atan2(top.y, top.x) + 0.5 * kPi);
}

Matrix2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

double proj_metric(ProjPoint x, ProjPoint y) {
  return std::abs(std::sin(x.theta() - y.theta()));
}

ProjPoint proj_action(const Matrix2& a, ProjPoint x) {
  require_invertible(a.det());
  return ProjPoint::from_vector(a * x.representative());
}

double dphi_norm_sl2(const Matrix2& a, ProjPoint x) {
  require_sl2(a);
  return 1.0 / (a * x.representative()).norm_squared();
}

double dphi_norm_bound(const Matrix2& a, ProjPoint x) {
  const double det = a.det();
  require_invertible(det);
  return std::abs(det) / (a * x.representative()).norm_squared();
}

double increment_ratio(const Matrix2& a, ProjPoint x, ProjPoint y, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  }
  const double base = proj_metric(x, y);
  if (base < kDegeneratePairTol) {
    std::ostringstream os;
    os << "points too close for an increment ratio (delta = " << base << ")";
    throw Error(ErrorCode::DegeneratePair, os.str());
  }
  const double image = proj_metric(proj_action(a, x), proj_action(a, y));
  return std::pow(image / base, alpha);
}

// ---------------------------------------------------------------------------

ProjPointN::ProjPointN(const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (v.size() < 2 || !(n > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "projective point needs a non-zero vector in R^d, d >= 2");
  }
  unit_ = v / n;
  Eigen::Index lead = 0;
  unit_.cwiseAbs().maxCoeff(&lead);
  if (unit_[lead] < 0.0) unit_ = -unit_;
}

double proj_metric(const ProjPointN& x, const ProjPointN& y) {
  if (x.dim() != y.dim()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  const double c = x.representative().dot(y.representative());
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

ProjPointN proj_action(const Eigen::MatrixXd& a, const ProjPointN& x) {
  if (a.rows() != a.cols() || a.cols() != x.dim()) {
    throw Error(ErrorCode::InvalidArgument, "matrix shape does not match the point");
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  require_invertible(svd.singularValues().prod());
  return ProjPointN(a * x.representative());
}

double dphi_norm_bound(const Eigen::MatrixXd& a, const ProjPointN& x) {
  if (a.rows() != a.cols() || a.cols() != x.dim()) {
    throw Error(ErrorCode::InvalidArgument, "matrix shape does not match the point");
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  require_invertible(s.prod());
  return s[0] * s[1] / (a * x.representative()).squaredNorm();
}

}  // namespace lyapdisc
