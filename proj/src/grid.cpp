#include "isingops/grid.hpp"

#include <algorithm>
#include <cmath>

namespace isingops {

void ModelParams::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("mass must be positive");
  if (S != -1.0) throw InvalidArgument("only the scattering constant S = -1 is supported");
}

// Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

namespace {

// coth(x/2) - 2/x, smooth through x = 0.
double coth_remainder(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x / 6.0 - x * x2 / 360.0 + x * x2 * x2 / 15120.0;
  }
  return 1.0 / std::tanh(0.5 * x) - 2.0 / x;
}

}  // namespace

RapidityGrid::RapidityGrid(int nodes, double cutoff) : cutoff_(cutoff) {
  if (nodes < 2) throw InvalidArgument("grid needs at least two nodes");
  if (!(cutoff > 0.0)) throw InvalidArgument("grid cutoff must be positive");
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  nodes_.resize(nodes);
  weights_.resize(nodes);
  bary_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    nodes_[i] = cutoff * x[i];
    weights_[i] = cutoff * w[i];
    // barycentric weights of Gauss-Legendre points
    bary_[i] = ((i % 2 == 0) ? 1.0 : -1.0) * std::sqrt((1.0 - x[i] * x[i]) * w[i]);
  }
  const int n = nodes;
  D_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      D_(i, j) = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      diag -= D_(i, j);
    }
    D_(i, i) = diag;
  }
  C_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // pole at node i
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      C_(i, j) += weights_[j] * coth_remainder(nodes_[j] - nodes_[i]);
      if (j != i) {
        const double h = weights_[j] / (nodes_[j] - nodes_[i]);
        C_(i, j) += 2.0 * h;
        off += h;
      }
      C_(i, j) += 2.0 * weights_[i] * D_(i, j);
    }
    C_(i, i) += 2.0 * (std::log((cutoff - nodes_[i]) / (cutoff + nodes_[i])) - off);
  }
}

bool RapidityGrid::same_as(const RapidityGrid& o) const {
  return size() == o.size() && cutoff_ == o.cutoff_;
}

std::vector<double> RapidityGrid::interpolation_row(double t) const {
  const int n = size();
  std::vector<double> row(n, 0.0);
  for (int j = 0; j < n; ++j)
    if (t == nodes_[j]) {
      row[j] = 1.0;
      return row;
    }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    row[j] = bary_[j] / (t - nodes_[j]);
    denom += row[j];
  }
  for (auto& r : row) r /= denom;
  return row;
}

bool RapidityGrid::cubic_row(double t, int& first, double w[4]) const {
  if (t < -cutoff_ || t > cutoff_) return false;
  const int n = size();
  const int k = static_cast<int>(std::lower_bound(nodes_.begin(), nodes_.end(), t) - nodes_.begin());
  first = std::clamp(k - 2, 0, std::max(0, n - 4));
  const int cnt = std::min(4, n);
  for (int a = 0; a < 4; ++a) w[a] = 0.0;
  for (int a = 0; a < cnt; ++a) {
    double l = 1.0;
    for (int b = 0; b < cnt; ++b)
      if (b != a) l *= (t - nodes_[first + b]) / (nodes_[first + a] - nodes_[first + b]);
    w[a] = l;
  }
  return true;
}

Indicatrix Indicatrix::log_type(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("log-type indicatrix needs beta > 0");
  return {Kind::Log, beta};
}

Indicatrix Indicatrix::power_type(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("power-type indicatrix needs 0 < alpha < 1");
  return {Kind::Power, alpha};
}

double Indicatrix::operator()(double p) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Log: return param * std::log1p(p);
    case Kind::Power: return std::pow(p, param);
  }
  return 0.0;
}

std::string Indicatrix::describe() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Log: return "log(beta=" + std::to_string(param) + ")";
    case Kind::Power: return "power(alpha=" + std::to_string(param) + ")";
  }
  return "";
}

nlohmann::json Indicatrix::to_json() const {
  switch (kind) {
    case Kind::Zero: return {{"kind", "zero"}};
    case Kind::Log: return {{"kind", "log"}, {"beta", param}};
    case Kind::Power: return {{"kind", "power"}, {"alpha", param}};
  }
  return {};
}

Indicatrix Indicatrix::from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") return zero();
  if (kind == "log") return log_type(j.at("beta").get<double>());
  if (kind == "power") return power_type(j.at("alpha").get<double>());
  throw InvalidArgument("unknown indicatrix kind: " + kind);
}

}  // namespace isingops
