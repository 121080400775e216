#include "isingops/testfunction.hpp"

#include <cmath>
#include <vector>

namespace isingops {

bool DoubleCone::contains(const Point2& x) const {
  return std::abs(x[0] - center[0]) + std::abs(x[1] - center[1]) < radius;
}

bool Wedge::contains(const Point2& x) const {
  const double d = x[1] - edge[1];
  const double a = std::abs(x[0] - edge[0]);
  return right ? (d > a) : (d < -a);
}

bool Wedge::contains(const DoubleCone& O) const {
  // The diamond's extreme values of x1 -+ |x0| are attained at its corners.
  const double c0 = O.center[0] - edge[0];
  const double c1 = O.center[1] - edge[1];
  if (right) return c1 - std::abs(c0) - O.radius > 0.0;
  return c1 + std::abs(c0) + O.radius < 0.0;
}

Wedge left_wedge_spacelike_to(const DoubleCone& O) {
  return Wedge{{O.center[0], O.center[1] - O.radius}, false};
}

bool overlaps(const DoubleCone& a, const DoubleCone& b) {
  const double dp = std::abs((a.center[0] + a.center[1]) - (b.center[0] + b.center[1]));
  const double dm = std::abs((a.center[0] - a.center[1]) - (b.center[0] - b.center[1]));
  return dp < a.radius + b.radius && dm < a.radius + b.radius;
}

double centered_bspline(double u, double R, int q) {
  if (q < 1) throw InvalidArgument("B-spline order must be positive");
  if (u <= -R || u >= R) return 0.0;
  const double t = q * (u + R) / (2.0 * R);  // in (0, q)
  std::vector<double> m(q, 0.0);
  for (int s = 0; s < q; ++s) m[s] = (t - s >= 0.0 && t - s < 1.0) ? 1.0 : 0.0;
  for (int j = 2; j <= q; ++j)
    for (int s = 0; s <= q - j; ++s) {
      const double ts = t - s;
      m[s] = (ts * m[s] + (j - ts) * m[s + 1]) / (j - 1);
    }
  return m[0] * q / (2.0 * R);
}

namespace {

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

}  // namespace

cplx centered_bspline_ft(cplx k, double R, int q) {
  const cplx s = sinc(k * (R / q));
  cplx r = 1.0;
  for (int j = 0; j < q; ++j) r *= s;
  return r;
}

TestFunction2D TestFunction2D::zero() { return {}; }

TestFunction2D TestFunction2D::spline(Point2 center, double half_width, int order, cplx amplitude) {
  if (!(half_width > 0.0)) throw InvalidArgument("spline half-width must be positive");
  if (order < 2) throw InvalidArgument("spline order must be at least 2");
  TestFunction2D f;
  f.kind_ = Kind::Spline;
  f.center_ = center;
  f.size_ = half_width;
  f.order_ = order;
  f.amp_ = amplitude;
  return f;
}

TestFunction2D TestFunction2D::radial_bump(Point2 center, double radius, cplx amplitude) {
  if (!(radius > 0.0)) throw InvalidArgument("bump radius must be positive");
  TestFunction2D f;
  f.kind_ = Kind::RadialBump;
  f.center_ = center;
  f.size_ = radius;
  f.amp_ = amplitude;
  return f;
}

DoubleCone TestFunction2D::support() const {
  switch (kind_) {
    case Kind::Zero: return {center_, 0.0};
    case Kind::Spline: return {center_, size_};
    case Kind::RadialBump: return {center_, size_ * std::sqrt(2.0)};
  }
  return {};
}

cplx TestFunction2D::operator()(const Point2& x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Spline: {
      const double up = (x[0] + x[1]) - (center_[0] + center_[1]);
      const double um = (x[0] - x[1]) - (center_[0] - center_[1]);
      return amp_ * centered_bspline(up, size_, order_) * centered_bspline(um, size_, order_);
    }
    case Kind::RadialBump: {
      const double d0 = x[0] - center_[0], d1 = x[1] - center_[1];
      const double s = (d0 * d0 + d1 * d1) / (size_ * size_);
      if (s >= 1.0) return 0.0;
      return amp_ * std::exp(-1.0 / (1.0 - s));
    }
  }
  return 0.0;
}

TestFunction2D TestFunction2D::conj() const {
  TestFunction2D f = *this;
  f.amp_ = std::conj(amp_);
  return f;
}

TestFunction2D TestFunction2D::translated(const Point2& a) const {
  TestFunction2D f = *this;
  f.center_ = {center_[0] + a[0], center_[1] + a[1]};
  return f;
}

cplx TestFunction2D::transform(cplx p0, cplx p1) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Spline: {
      // p.x = (p+ x- + p- x+)/2 and d^2x = dx+ dx- / 2
      const cplx pp = p0 + p1, pm = p0 - p1;
      const double cp = center_[0] + center_[1], cm = center_[0] - center_[1];
      const cplx phase = std::exp(kI * 0.5 * (pm * cp + pp * cm));
      return amp_ / (4.0 * kPi) * phase * centered_bspline_ft(0.5 * pm, size_, order_) *
             centered_bspline_ft(0.5 * pp, size_, order_);
    }
    case Kind::RadialBump: return transform_quadrature(p0, p1);
  }
  return 0.0;
}

cplx TestFunction2D::transform_quadrature(cplx p0, cplx p1, int nodes_per_dim) const {
  if (kind_ == Kind::Zero) return 0.0;
  const RapidityGrid gl(nodes_per_dim, 1.0);
  cplx acc = 0.0;
  if (kind_ == Kind::Spline) {
    // light-cone coordinates; split each axis at the spline knots
    const int q = order_;
    const double R = size_;
    const double cp = center_[0] + center_[1], cm = center_[0] - center_[1];
    const int per = std::max(4, nodes_per_dim / q);
    const RapidityGrid sub(per, 1.0);
    std::vector<double> u, wu;
    for (int s = 0; s < q; ++s) {
      const double a = -R + 2.0 * R * s / q, b = -R + 2.0 * R * (s + 1) / q;
      for (int i = 0; i < per; ++i) {
        u.push_back(0.5 * (a + b) + 0.5 * (b - a) * sub.node(i));
        wu.push_back(0.5 * (b - a) * sub.weight(i));
      }
    }
    std::vector<double> Bv(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) Bv[i] = centered_bspline(u[i], R, q);
    const cplx pp = p0 + p1, pm = p0 - p1;
    cplx sp = 0.0, sm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      sp += wu[i] * Bv[i] * std::exp(kI * 0.5 * pm * (cp + u[i]));
      sm += wu[i] * Bv[i] * std::exp(kI * 0.5 * pp * (cm + u[i]));
    }
    acc = 0.5 * sp * sm;  // dx0 dx1 = dx+ dx- / 2
    return amp_ * acc / (2.0 * kPi);
  }
  // radial bump: polar coordinates, Gauss-Legendre in radius, trapezoid in angle
  const int nang = 2 * nodes_per_dim;
  for (int i = 0; i < nodes_per_dim; ++i) {
    const double rho = 0.5 * size_ * (1.0 + gl.node(i));
    const double wr = 0.5 * size_ * gl.weight(i);
    const double s = rho * rho / (size_ * size_);
    if (s >= 1.0) continue;
    const double radial = std::exp(-1.0 / (1.0 - s));
    cplx ring = 0.0;
    for (int a = 0; a < nang; ++a) {
      const double phi = 2.0 * kPi * a / nang;
      const double x0 = center_[0] + rho * std::cos(phi);
      const double x1 = center_[1] + rho * std::sin(phi);
      ring += std::exp(kI * (p0 * x0 - p1 * x1));
    }
    acc += wr * rho * radial * ring * (2.0 * kPi / nang);
  }
  return amp_ * acc / (2.0 * kPi);
}

nlohmann::json TestFunction2D::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::Zero: j["kind"] = "zero"; break;
    case Kind::Spline:
      j["kind"] = "spline";
      j["half_width"] = size_;
      j["order"] = order_;
      break;
    case Kind::RadialBump:
      j["kind"] = "bump";
      j["radius"] = size_;
      break;
  }
  j["center"] = {center_[0], center_[1]};
  j["amplitude"] = {amp_.real(), amp_.imag()};
  const DoubleCone O = support();
  j["support"] = {{"type", "double_cone"}, {"center", {O.center[0], O.center[1]}}, {"radius", O.radius}};
  return j;
}

TestFunction2D TestFunction2D::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("test function must be a JSON object");
  const std::string kind = j.value("kind", "spline");
  Point2 c{0.0, 0.0};
  if (j.contains("center")) {
    const auto& cj = j.at("center");
    if (!cj.is_array() || cj.size() != 2) throw InvalidArgument("center must be [x0, x1]");
    c = {cj[0].get<double>(), cj[1].get<double>()};
  }
  cplx amp = 1.0;
  if (j.contains("amplitude")) {
    const auto& a = j.at("amplitude");
    amp = a.is_array() ? cplx(a.at(0).get<double>(), a.at(1).get<double>()) : cplx(a.get<double>(), 0.0);
  }
  if (kind == "zero") return zero();
  if (kind == "spline") return spline(c, j.at("half_width").get<double>(), j.value("order", 8), amp);
  if (kind == "bump") return radial_bump(c, j.at("radius").get<double>(), amp);
  throw InvalidArgument("unknown test function kind: " + kind);
}

cplx fourier_pm(const TestFunction2D& f, cplx theta, int sign, const ModelParams& model) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const cplx p0 = model.mu * std::cosh(theta), p1 = model.mu * std::sinh(theta);
  const double s = static_cast<double>(sign);
  return f.transform(s * p0, s * p1);
}

}  // namespace isingops
