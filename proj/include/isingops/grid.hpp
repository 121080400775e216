#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "isingops/errors.hpp"

namespace isingops {

struct ModelParams {
  double mu = 1.0;
  double S = -1.0;  // only S = -1 is implemented and validated

  void validate() const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Legendre rapidity grid on [-Theta, Theta].
class RapidityGrid {
public:
  RapidityGrid() = default;
  RapidityGrid(int nodes, double cutoff);

  int size() const { return static_cast<int>(nodes_.size()); }
  double cutoff() const { return cutoff_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }

  bool same_as(const RapidityGrid& o) const;

  // Spectral differentiation matrix of the degree size()-1 interpolant: (D u)_i = u'(node_i).
  const Eigen::MatrixXd& diff_matrix() const { return D_; }

  // Row i holds the quadrature weights c_{ij} with
  //   PV int u(t) coth((t - node_i)/2) dt  ~  sum_j c_{ij} u(node_j).
  // Exact for polynomial u of degree < size() in the 2/x part; the smooth
  // remainder coth(x/2) - 2/x is integrated by the Gauss rule.
  const Eigen::MatrixXd& pv_coth_matrix() const { return C_; }

  // Spectral (barycentric) interpolation weights of the grid values at t.
  std::vector<double> interpolation_row(double t) const;
  // Local cubic Lagrange interpolation weights (4 nearest nodes); returns false when t
  // lies outside [-Theta, Theta].
  bool cubic_row(double t, int& first, double w[4]) const;

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
  double cutoff_ = 0.0;
  Eigen::MatrixXd D_;
  Eigen::MatrixXd C_;
};

// Analytic indicatrix: omega(p) = beta log(1+p) or p^alpha.
struct Indicatrix {
  enum class Kind { Zero, Log, Power };
  Kind kind = Kind::Zero;
  double param = 0.0;

  static Indicatrix zero() { return {}; }
  static Indicatrix log_type(double beta);
  static Indicatrix power_type(double alpha);

  double operator()(double p) const;
  std::string describe() const;
  nlohmann::json to_json() const;
  static Indicatrix from_json(const nlohmann::json& j);
};

}  // namespace isingops
