#include "isingops/reeh_schlieder.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "isingops/combinatorics.hpp"

namespace isingops {

double ball_radius_for(const RapidityGrid& grid, int count) {
  std::vector<double> a;
  for (double t : grid.nodes()) a.push_back(std::abs(t));
  std::sort(a.begin(), a.end());
  if (count <= 0 || count > static_cast<int>(a.size())) throw InvalidArgument("ball node count out of range");
  if (count == static_cast<int>(a.size())) return a.back();
  return 0.5 * (a[count - 1] + a[count]);
}

RankResult reeh_schlieder_rank(const std::vector<CoefficientFamily>& fams, int m, double rho, const RapidityGrid& grid,
                               double threshold) {
  if (fams.empty()) throw InvalidArgument("rank test needs at least one family");
  if (m < 0) throw InvalidArgument("sector must be nonnegative");
  std::vector<double> ball;
  for (double t : grid.nodes())
    if (std::abs(t) <= rho) ball.push_back(t);
  RankResult res;
  res.in_ball = static_cast<int>(ball.size());
  res.target = static_cast<int>(binom(res.in_ball, m));
  if (res.target == 0) return res;
  std::vector<std::vector<cplx>> tuples;
  std::vector<int> c(std::max(m, 1));
  combo_first(c.data(), m);
  do {
    std::vector<cplx> z(m);
    for (int j = 0; j < m; ++j) z[j] = ball[c[j]];
    tuples.push_back(z);
  } while (m > 0 && combo_next(c.data(), m, res.in_ball));

  std::vector<Eigen::RowVectorXcd> rows;
  for (const auto& fam : fams) {
    Eigen::RowVectorXcd r(res.target);
    for (int i = 0; i < res.target; ++i) r(i) = F_eval(fam, tuples[i]);
    const double nr = r.norm();
    if (nr > 0.0 && std::isfinite(nr)) rows.push_back(r / nr);
  }
  res.families = static_cast<int>(rows.size());
  if (rows.empty()) return res;
  Eigen::MatrixXcd A(rows.size(), res.target);
  for (std::size_t i = 0; i < rows.size(); ++i) A.row(i) = rows[i];
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) res.singular_values.push_back(s(i));
  const double top = s.size() > 0 ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold * top) ++res.rank;
  return res;
}

std::vector<CoefficientFamily> rs_family_sweep(const TestFunction2D& base_g, int degree, int translates, double step,
                                               const ModelParams& model) {
  // lattice offsets in light-cone coordinates, nearest first
  std::vector<std::pair<int, int>> pts;
  const int span = 1 + static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max(translates, 1)))));
  for (int i = -span; i <= span; ++i)
    for (int j = -span; j <= span; ++j) pts.emplace_back(i, j);
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    const int da = a.first * a.first + a.second * a.second, db = b.first * b.first + b.second * b.second;
    if (da != db) return da < db;
    return a < b;
  });
  std::vector<CoefficientFamily> out;
  const auto monos = ising_monomials(degree);
  for (int t = 0; t < translates && t < static_cast<int>(pts.size()); ++t) {
    const double up = step * pts[t].first, um = step * pts[t].second;  // x+ and x- offsets
    const Point2 a{0.5 * (up + um), 0.5 * (up - um)};
    const TestFunction2D g = base_g.translated(a);
    for (const auto& gens : monos) out.push_back(CoefficientFamily::odd(SymLaurent::monomial(gens), g, model));
  }
  return out;
}

int RankSweep::best_rank() const {
  int b = 0;
  for (const auto& r : rows) b = std::max(b, r.rank);
  return b;
}

nlohmann::json RankSweep::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"degree", r.degree}, {"translates", r.translates}, {"families", r.families}, {"rank", r.rank}});
  return {{"m", m}, {"target", target}, {"rows", arr}};
}

RankSweep rank_sweep(const TestFunction2D& base_g, int m, const std::vector<int>& degrees,
                     const std::vector<int>& translate_counts, double step, const RapidityGrid& grid, int in_ball,
                     const ModelParams& model) {
  RankSweep sw;
  sw.m = m;
  const double rho = ball_radius_for(grid, in_ball);
  for (int d : degrees)
    for (int t : translate_counts) {
      const auto fams = rs_family_sweep(base_g, d, t, step, model);
      const RankResult r = reeh_schlieder_rank(fams, m, rho, grid);
      sw.target = r.target;
      sw.rows.push_back({d, t, r.families, r.rank});
    }
  return sw;
}

}  // namespace isingops
