#pragma once

#include <array>
#include <string>

#include <nlohmann/json.hpp>

#include "isingops/errors.hpp"
#include "isingops/grid.hpp"

namespace isingops {

using Point2 = std::array<double, 2>;  // (x0, x1)

// Double cone {x : |x0 - c0| + |x1 - c1| < r}.
struct DoubleCone {
  Point2 center{0.0, 0.0};
  double radius = 1.0;

  bool contains(const Point2& x) const;
};

// Right wedge {x1 - e1 > |x0 - e0|} or left wedge {x1 - e1 < -|x0 - e0|} with edge e.
struct Wedge {
  Point2 edge{0.0, 0.0};
  bool right = true;

  bool contains(const Point2& x) const;
  // Closure of the double cone lies inside the open wedge.
  bool contains(const DoubleCone& O) const;
};

// The double cone O_r = W_{(0,-r)} cap W'_{(0,r)} and the left wedge W'_{(0,-r)}
// that is spacelike to it.
Wedge left_wedge_spacelike_to(const DoubleCone& O);
bool overlaps(const DoubleCone& a, const DoubleCone& b);

// Compactly supported test function on 1+1 Minkowski space.
//  - Spline: A * B(x+ - c+) B(x- - c-) with x+- = x0 +- x1 and B a centered cardinal
//    B-spline of order q and half-width R (an iterated box convolution). Its support
//    is the double cone of radius R around c and its transform is a closed form.
//  - RadialBump: A * exp(-1/(1 - |x-c|^2/r^2)) on the Euclidean disk of radius r;
//    the transform is computed by polar quadrature.
class TestFunction2D {
public:
  enum class Kind { Zero, Spline, RadialBump };

  static TestFunction2D zero();
  static TestFunction2D spline(Point2 center, double half_width, int order, cplx amplitude = 1.0);
  static TestFunction2D radial_bump(Point2 center, double radius, cplx amplitude = 1.0);

  Kind kind() const { return kind_; }
  const Point2& center() const { return center_; }
  double size() const { return size_; }
  int order() const { return order_; }
  cplx amplitude() const { return amp_; }
  // Smallest double cone containing the support.
  DoubleCone support() const;

  cplx operator()(const Point2& x) const;

  TestFunction2D conj() const;
  TestFunction2D translated(const Point2& a) const;

  // (1/2pi) int d^2x f(x) e^{i(p0 x0 - p1 x1)} for complex momenta.
  cplx transform(cplx p0, cplx p1) const;
  // Same integral by tensor Gauss-Legendre quadrature over the support (audit route).
  cplx transform_quadrature(cplx p0, cplx p1, int nodes_per_dim = 96) const;

  nlohmann::json to_json() const;
  static TestFunction2D from_json(const nlohmann::json& j);

private:
  Kind kind_ = Kind::Zero;
  Point2 center_{0.0, 0.0};
  double size_ = 0.0;
  int order_ = 0;
  cplx amp_ = 0.0;
};

// f^{+-}(theta) = (1/2pi) int d^2x f(x) e^{+- i p(theta).x}, p(theta) = mu (cosh, sinh).
cplx fourier_pm(const TestFunction2D& f, cplx theta, int sign, const ModelParams& model);

// Centered cardinal B-spline of order q on [-R, R], normalized to unit integral.
double centered_bspline(double u, double R, int q);
// Its transform int B(u) e^{iku} du = sinc(kR/q)^q.
cplx centered_bspline_ft(cplx k, double R, int q);

}  // namespace isingops
