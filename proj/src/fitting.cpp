#include "maglat/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "maglat/errors.hpp"

namespace maglat {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double rel_step_norm(const VectorXd& step, const VectorXd& p) {
  return step.norm() / (p.norm() + 1e-300);
}

// Damped normal equations (Levenberg-Marquardt style).  model(i, p) gives
// f(x_i; p); jacobian(i, p, row) fills df/dp at x_i.  Throws NonConvergence
// when no acceptable step is found; checks the analytic Jacobian against
// central finite differences at the solution (1e-4 relative) and warns on
// disagreement.
template <class ModelFn, class JacFn>
void lm_fit(const std::vector<double>& y, ModelFn model, JacFn jacobian,
            FitResult& out) {
  const int n = static_cast<int>(y.size());
  const int k = static_cast<int>(out.params.size());
  VectorXd p = Eigen::Map<const VectorXd>(out.params.data(), k);

  auto residual = [&](const VectorXd& q) {
    VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = y[i] - model(i, q);
    return r;
  };
  auto fill_jacobian = [&](const VectorXd& q, MatrixXd& J) {
    VectorXd row(k);
    for (int i = 0; i < n; ++i) {
      jacobian(i, q, row);
      J.row(i) = row;
    }
  };

  VectorXd r = residual(p);
  double rss = r.squaredNorm();
  MatrixXd J(n, k);
  double lambda = 1e-3;
  out.converged = false;
  out.final_step = std::numeric_limits<double>::infinity();

  for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
    fill_jacobian(p, J);
    const MatrixXd jtj = J.transpose() * J;
    const VectorXd g = J.transpose() * r;
    MatrixXd damped = jtj;
    for (int j = 0; j < k; ++j)
      damped(j, j) += lambda * std::max(jtj(j, j), 1e-300);
    const VectorXd step = damped.ldlt().solve(g);
    const VectorXd p_try = p + step;
    const VectorXd r_try = residual(p_try);
    const double rss_try = r_try.squaredNorm();
    if (rss_try <= rss) {
      out.final_step = rel_step_norm(step, p);
      p = p_try;
      r = r_try;
      const double drop = rss - rss_try;
      rss = rss_try;
      lambda = std::max(lambda * 0.1, 1e-14);
      if (out.final_step < 1e-11 || drop <= 1e-30) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e13) break;
    }
  }
  if (!out.converged && !(out.final_step < 1e-9))
    throw NonConvergence("fit did not converge in 200 iterations");
  out.converged = true;

  // Uncertainties from the residual-scaled normal matrix.
  fill_jacobian(p, J);
  const MatrixXd jtj = J.transpose() * J;
  out.sigmas.assign(k, 0.0);
  if (n > k) {
    const MatrixXd cov = jtj.ldlt().solve(
        MatrixXd::Identity(k, k)) * (rss / (n - k));
    for (int j = 0; j < k; ++j)
      out.sigmas[j] = std::sqrt(std::max(cov(j, j), 0.0));
  }

  // Finite-difference agreement check of the analytic Jacobian.
  MatrixXd jfd(n, k);
  double scale = 1e-300;
  for (int j = 0; j < k; ++j) {
    const double h = 1e-6 * std::max(std::abs(p[j]), 1e-8);
    VectorXd pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    for (int i = 0; i < n; ++i)
      jfd(i, j) = (model(i, pp) - model(i, pm)) / (2.0 * h);
  }
  scale = std::max(scale, J.cwiseAbs().maxCoeff());
  const double disagree = (J - jfd).cwiseAbs().maxCoeff() / scale;
  if (disagree > 1e-4)
    out.warnings.push_back(
        "analytic Jacobian disagrees with finite differences (" +
        std::to_string(disagree) + " relative)");

  for (int j = 0; j < k; ++j) out.params[j] = p[j];
  out.residuals.assign(r.data(), r.data() + n);
  out.residual_norm = std::sqrt(rss);
}

double centered_r_squared(const std::vector<double>& y, double rss) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  if (tss <= 0.0) return rss == 0.0 ? 1.0 : 0.0;
  return 1.0 - rss / tss;
}

void require_same_size(const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size())
    throw InvariantError("fit: x and y sizes differ");
}

}  // namespace

double FitResult::param(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return params[i];
  throw std::out_of_range("fit has no parameter named " + name);
}

double FitResult::sigma(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return sigmas[i];
  throw std::out_of_range("fit has no parameter named " + name);
}

FitResult fit_gaussian_peak(const std::vector<double>& x,
                            const std::vector<double>& y, bool with_baseline,
                            const std::vector<double>* init) {
  require_same_size(x, y);
  const int n = static_cast<int>(x.size());
  if (n < 5) throw InvariantError("fit_gaussian_peak: needs >= 5 points");

  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const int imax = static_cast<int>(
      std::max_element(y.begin(), y.end()) - y.begin());
  if (x[imax] == *xmin_it || x[imax] == *xmax_it)
    throw NonConvergence("fit_gaussian_peak: peak at scan boundary");

  FitResult out;
  out.param_names = {"amplitude", "b0", "gamma"};
  if (with_baseline) out.param_names.push_back("baseline");
  if (init) {
    if (static_cast<int>(init->size()) != (with_baseline ? 4 : 3))
      throw InvariantError("fit_gaussian_peak: bad init size");
    out.params = *init;
  } else {
    const double base = *std::min_element(y.begin(), y.end());
    // Second-moment width of (y - base) treated as a density over x.
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = std::max(y[i] - base, 0.0);
      w0 += w;
      w1 += w * x[i];
    }
    const double xbar = w0 > 0.0 ? w1 / w0 : x[imax];
    for (int i = 0; i < n; ++i)
      w2 += std::max(y[i] - base, 0.0) * (x[i] - xbar) * (x[i] - xbar);
    const double var = w0 > 0.0 ? w2 / w0 : 0.0;
    const double span = *xmax_it - *xmin_it;
    const double gamma0 = var > 0.0 ? 0.5 / var : 1.0 / (span * span);
    out.params = {y[imax] - (with_baseline ? base : 0.0), x[imax], gamma0};
    if (with_baseline) out.params.push_back(base);
  }

  auto model = [&](int i, const VectorXd& p) {
    const double d = x[i] - p[1];
    const double val = p[0] * std::exp(-p[2] * d * d);
    return p.size() > 3 ? val + p[3] : val;
  };
  auto jac = [&](int i, const VectorXd& p, VectorXd& row) {
    const double d = x[i] - p[1];
    const double e = std::exp(-p[2] * d * d);
    row[0] = e;
    row[1] = p[0] * e * 2.0 * p[2] * d;
    row[2] = -p[0] * e * d * d;
    if (p.size() > 3) row[3] = 1.0;
  };
  lm_fit(y, model, jac, out);
  out.r_squared = centered_r_squared(y, out.residual_norm * out.residual_norm);

  const double b0 = out.param("b0");
  if (b0 <= *xmin_it || b0 >= *xmax_it)
    throw NonConvergence("fit_gaussian_peak: fitted peak at scan boundary");
  if (out.param("gamma") <= 0.0)
    throw NonConvergence("fit_gaussian_peak: non-positive width parameter");
  return out;
}

FitResult fit_gaussian_peak(const ScanCurve& scan, bool with_baseline) {
  return fit_gaussian_peak(scan.B_G, scan.efficiency, with_baseline);
}

FitResult fit_exponential(const std::vector<double>& t,
                          const std::vector<double>& y,
                          const std::vector<double>* init) {
  require_same_size(t, y);
  const int n = static_cast<int>(t.size());
  if (n < 4) throw InvariantError("fit_exponential: needs >= 4 points");
  int positive = 0;
  for (double v : y) positive += v > 0.0;
  if (2 * positive < n)
    throw InvariantError("fit_exponential: non-positive data majority");

  FitResult out;
  out.param_names = {"eta0", "tau"};
  double pos_min = 0.0, pos_max = 0.0;
  {
    // Log-linear regression on the positive values for the starting point.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    pos_min = 1e300;
    for (int i = 0; i < n; ++i) {
      if (y[i] <= 0.0) continue;
      const double ly = std::log(y[i]);
      sx += t[i];
      sy += ly;
      sxx += t[i] * t[i];
      sxy += t[i] * ly;
      ++m;
      pos_min = std::min(pos_min, y[i]);
      pos_max = std::max(pos_max, y[i]);
    }
    const double det = m * sxx - sx * sx;
    const double slope = det != 0.0 ? (m * sxy - sx * sy) / det : 0.0;
    const double icept = det != 0.0 ? (sy * sxx - sx * sxy) / det : 0.0;
    const double span = *std::max_element(t.begin(), t.end()) -
                        *std::min_element(t.begin(), t.end());
    out.params = {std::exp(icept),
                  slope < 0.0 ? -1.0 / slope : std::max(span, 1e-9) * 10.0};
  }
  if (init) {
    if (init->size() != 2)
      throw InvariantError("fit_exponential: bad init size");
    out.params = *init;
  }

  auto model = [&](int i, const VectorXd& p) {
    return p[0] * std::exp(-t[i] / p[1]);
  };
  auto jac = [&](int i, const VectorXd& p, VectorXd& row) {
    const double e = std::exp(-t[i] / p[1]);
    row[0] = e;
    row[1] = p[0] * e * t[i] / (p[1] * p[1]);
  };
  lm_fit(y, model, jac, out);
  out.r_squared = centered_r_squared(y, out.residual_norm * out.residual_norm);

  if (pos_max < 10.0 * pos_min)
    out.warnings.push_back("data span less than one decade of decay");
  if (out.r_squared < 0.95)
    out.warnings.push_back("poor single-exponential fit (R^2 < 0.95)");
  return out;
}

FitResult fit_exponential(const DecayCurve& decay) {
  return fit_exponential(decay.t_s, decay.efficiency);
}

FitResult fit_linear_origin(const std::vector<double>& x,
                            const std::vector<double>& y) {
  require_same_size(x, y);
  const int n = static_cast<int>(x.size());
  if (n < 1) throw InvariantError("fit_linear_origin: needs >= 1 point");
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  if (sxx == 0.0)
    throw InvariantError("fit_linear_origin: degenerate x (all zero)");

  FitResult out;
  out.param_names = {"slope"};
  out.params = {sxy / sxx};
  out.converged = true;
  out.residuals.resize(n);
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    out.residuals[i] = y[i] - out.params[0] * x[i];
    rss += out.residuals[i] * out.residuals[i];
  }
  out.residual_norm = std::sqrt(rss);
  out.sigmas = {n > 1 ? std::sqrt(rss / (n - 1) / sxx) : 0.0};
  out.r_squared = syy > 0.0 ? 1.0 - rss / syy : (rss == 0.0 ? 1.0 : 0.0);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_cell(const std::string& cell, const std::string& column,
                  int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty())
    throw ConfigError("non-numeric cell in column '" + column + "' at line " +
                      std::to_string(line_no));
  return v;
}

}  // namespace

std::variant<DecayCurve, ScanCurve> ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2)
    throw ConfigError(path + ": header must name at least two columns");
  const std::string& abscissa = header[0];
  if (abscissa != "t_s" && abscissa != "B_G")
    throw ConfigError(path + ": unrecognized abscissa column '" + abscissa +
                      "' (expected t_s or B_G)");
  if (header[1] != "efficiency")
    throw ConfigError(path + ": unrecognized value column '" + header[1] +
                      "' (expected efficiency)");

  std::vector<std::pair<double, double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 2)
      throw ConfigError(path + ": too few cells at line " +
                        std::to_string(line_no));
    rows.emplace_back(parse_cell(cells[0], abscissa, line_no),
                      parse_cell(cells[1], "efficiency", line_no));
  }
  if (rows.empty()) throw ConfigError(path + ": no data rows");

  std::vector<std::string> warnings;
  if (!std::is_sorted(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) {
                        return a.first < b.first;
                      })) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    warnings.push_back("abscissa unsorted; sorted ascending");
  }

  if (abscissa == "t_s") {
    DecayCurve c;
    for (const auto& [a, v] : rows) {
      c.t_s.push_back(a);
      c.efficiency.push_back(v);
    }
    c.warnings = warnings;
    return c;
  }
  ScanCurve c;
  for (const auto& [a, v] : rows) {
    c.B_G.push_back(a);
    c.efficiency.push_back(v);
  }
  c.warnings = warnings;
  return c;
}

}  // namespace maglat
