#pragma once

// Projective line P(R^2) and its projective matrix actions.
//
// A point of P(R^2) is stored as its canonical angle theta in [0, pi). The
// metric on P(R^2) is delta(x, y) = |x ^ y| / (|x| |y|) = |sin(theta_x - theta_y)|,
// which gives the projective line diameter 1.
//
// A small general-dimension layer (ProjPointN, Eigen matrices) carries the
// wedge-product form of the derivative bound for d >= 2.

#include <Eigen/Core>

#include <numbers>
#include <utility>

namespace lyapdisc {

inline constexpr double kPi = std::numbers::pi;

// |det| at or below this is treated as singular.
inline constexpr double kInvertibleTol = 1e-12;
// |det - 1| below this flags a matrix as SL(2, R).
inline constexpr double kSl2Tol = 1e-10;
// Increment ratios are rejected when delta(x, y) falls below this.
inline constexpr double kDegeneratePairTol = 1e-14;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm_squared() const { return x * x + y * y; }
  double norm() const;
};

inline double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
// Signed area u ^ v.
inline double wedge(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }

// Reduces an angle mod pi into [0, pi). Every ProjPoint goes through here.
double canonical_angle(double theta);

class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(double theta) : theta_(canonical_angle(theta)) {}

  // Projective class of a non-zero vector.
  static ProjPoint from_vector(Vec2 v);

  double theta() const { return theta_; }
  // Unit vector (cos theta, sin theta).
  Vec2 representative() const;

  friend bool operator==(ProjPoint, ProjPoint) = default;

 private:
  double theta_ = 0.0;
};

// Row-major 2x2 real matrix [[a, b], [c, d]].
class Matrix2 {
 public:
  constexpr Matrix2() = default;
  constexpr Matrix2(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}

  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  // a d - b c with the rounding error of b c compensated through fma.
  double det() const;
  bool is_invertible() const;
  bool is_sl2() const;

  Matrix2 transpose() const { return {a_, c_, b_, d_}; }

  friend Matrix2 operator*(const Matrix2& m, const Matrix2& n) {
    return {m.a_ * n.a_ + m.b_ * n.c_, m.a_ * n.b_ + m.b_ * n.d_,
            m.c_ * n.a_ + m.d_ * n.c_, m.c_ * n.b_ + m.d_ * n.d_};
  }
  friend Vec2 operator*(const Matrix2& m, Vec2 v) {
    return {m.a_ * v.x + m.b_ * v.y, m.c_ * v.x + m.d_ * v.y};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;

  // Singular values (s1 >= s2) from the closed-form eigenvalues of A^T A.
  // s2 is recovered as |det| / s1 to avoid cancellation for large norms.
  std::pair<double, double> singular_values() const;
  double operator_norm() const { return singular_values().first; }

  // Direction x minimising |A x|, i.e. the least expanding right singular
  // direction.
  ProjPoint least_expanding_direction() const;

 private:
  double a_ = 1.0;
  double b_ = 0.0;
  double c_ = 0.0;
  double d_ = 1.0;
};

Matrix2 rotation(double angle);

// delta(x, y) = |sin(theta_x - theta_y)|.
double proj_metric(ProjPoint x, ProjPoint y);

// Projective class of A * representative(x). Throws NonInvertible.
ProjPoint proj_action(const Matrix2& a, ProjPoint x);

// |(D Phi_A)_x| = 1 / |A x|^2 for A in SL(2, R). Throws NotSl2.
double dphi_norm_sl2(const Matrix2& a, ProjPoint x);

// |wedge_2 A| / |A x|^2 with |wedge_2 A| = |det A| in dimension two.
double dphi_norm_bound(const Matrix2& a, ProjPoint x);

// [delta(Phi_A x, Phi_A y) / delta(x, y)]^alpha.
// Throws DegeneratePair when delta(x, y) < kDegeneratePairTol.
double increment_ratio(const Matrix2& a, ProjPoint x, ProjPoint y, double alpha);

// ---------------------------------------------------------------------------
// General dimension.

// Point of P(R^d) stored as a unit vector whose largest-magnitude coordinate
// is positive.
class ProjPointN {
 public:
  explicit ProjPointN(const Eigen::VectorXd& v);

  const Eigen::VectorXd& representative() const { return unit_; }
  Eigen::Index dim() const { return unit_.size(); }

 private:
  Eigen::VectorXd unit_;
};

// |x ^ y| / (|x| |y|) computed from the Gram determinant.
double proj_metric(const ProjPointN& x, const ProjPointN& y);

ProjPointN proj_action(const Eigen::MatrixXd& a, const ProjPointN& x);

// |wedge_2 A| / |A x|^2 where |wedge_2 A| = s1 * s2 (top two singular values).
double dphi_norm_bound(const Eigen::MatrixXd& a, const ProjPointN& x);

}  // namespace lyapdisc
