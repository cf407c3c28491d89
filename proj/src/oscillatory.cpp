#include "tomaslab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tomaslab/bump.hpp"
#include "tomaslab/lorentz.hpp"

namespace tomaslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBlock = 1024;

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::string describe(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::ostringstream s;
  s << "x = (" << x.transpose() << "), y = (" << y.transpose() << ")";
  return s.str();
}

// Points of a tensor grid with `per_axis` samples on [-half, half] per axis.
std::vector<std::vector<double>> box_samples(std::span<const double> half, int per_axis) {
  std::vector<std::vector<double>> out;
  const std::size_t d = half.size();
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(per_axis);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> p(d);
    std::size_t rem = flat;
    for (std::size_t a = d; a-- > 0;) {
      const auto i = static_cast<double>(rem % per_axis);
      rem /= per_axis;
      p[a] = half[a] * (2.0 * i / (per_axis - 1) - 1.0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

int sample_count(std::size_t dims) { return dims <= 2 ? 9 : (dims <= 4 ? 7 : 5); }

void check_dims(const PhaseSpec& spec, std::size_t x_dims, std::size_t y_dims, const char* who) {
  if (!spec.phase) throw std::invalid_argument(std::string(who) + ": phase spec has no phase");
  if (x_dims != static_cast<std::size_t>(spec.phase->x_dim()) || y_dims != static_cast<std::size_t>(spec.phase->y_dim())) {
    throw std::invalid_argument(std::string(who) + ": grid dimensions do not match phase '" + spec.phase->name() + "'");
  }
}

std::vector<double> field_half_widths(const SampledField& f) {
  std::vector<double> half(f.dimension());
  for (std::size_t a = 0; a < f.dimension(); ++a) {
    const double lo = f.origin[a];
    const double hi = lo + static_cast<double>(f.shape[a] - 1) * f.spacing[a];
    half[a] = std::max(std::abs(lo), std::abs(hi));
  }
  return half;
}

std::vector<double> axis_points(const SampledField& f, std::size_t a) {
  std::vector<double> out(f.shape[a]);
  for (std::size_t i = 0; i < f.shape[a]; ++i) out[i] = f.origin[a] + static_cast<double>(i) * f.spacing[a];
  return out;
}

// Gamma(y) = grad_x phi(0, y) and h(y) = phi(0, y) for phases linear in x.
void linear_parts(const Phase& phase, std::span<const double> y, Eigen::VectorXd& gamma, double& h) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(phase.x_dim());
  gamma = phase.grad_x(as_span(zero), y);
  h = phase.value(as_span(zero), y);
}

int numeric_rank(const Eigen::VectorXd& singular, double threshold) {
  int r = 0;
  for (int i = 0; i < singular.size(); ++i) {
    if (singular(i) > threshold) ++r;
  }
  return r;
}

double det_mixed(const Phase& phase, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return phase.mixed_hessian(as_span(x), as_span(y)).determinant();
}

}  // namespace

double max_y_gradient(const PhaseSpec& spec, std::span<const double> y_half_width) {
  const Phase& phase = *spec.phase;
  const std::vector<double> x_half(phase.x_dim(), spec.support_radius);
  const int nx = sample_count(x_half.size() + y_half_width.size());
  const auto xs = box_samples(x_half, nx);
  const auto ys = box_samples(y_half_width, nx);
  double g = 0.0;
  for (const auto& x : xs) {
    for (const auto& y : ys) g = std::max(g, phase.grad_y(x, y).norm());
  }
  return g;
}

double required_y_spacing(const PhaseSpec& spec, double lambda, std::span<const double> y_half_width) {
  const double g = max_y_gradient(spec, y_half_width);
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  return kTwoPi / (10.0 * lambda * g);
}

SampledField apply_T_lambda(const PhaseSpec& spec, double lambda, const SampledField& f, const SampledField& x_grid) {
  check_dims(spec, x_grid.dimension(), f.dimension(), "apply_T_lambda");
  if (!(lambda >= 1.0)) throw std::invalid_argument("apply_T_lambda: lambda must be >= 1");
  const Phase& phase = *spec.phase;
  const double need = required_y_spacing(spec, lambda, field_half_widths(f));
  for (double h : f.spacing) {
    if (h > need * (1.0 + 1e-9)) {
      std::ostringstream s;
      s << "apply_T_lambda: y spacing " << h << " exceeds the required " << need << " at lambda = " << lambda;
      throw std::invalid_argument(s.str());
    }
  }
  const std::size_t dy = f.dimension();
  const std::size_t dx = x_grid.dimension();

  // Effective weights c(y) = f(y) zeta_y(y) dy, dropping zeros.
  std::vector<std::vector<double>> ys;
  std::vector<Complex> c;
  std::vector<double> y(dy);
  const double vol = f.cell_volume();
  for (std::size_t k = 0; k < f.size(); ++k) {
    f.point(k, y);
    const Complex w = f.values[k] * spec.amplitude_y(y) * vol;
    if (w != Complex{}) {
      ys.push_back(y);
      c.push_back(w);
    }
  }

  SampledField out = zeros_like(x_grid);
  if (c.empty()) return out;
  std::vector<double> x(dx);

  if (phase.linear_in_x()) {
    std::vector<std::vector<double>> axes(dx);
    for (std::size_t a = 0; a < dx; ++a) axes[a] = axis_points(x_grid, a);
    const auto n_last = static_cast<Eigen::Index>(x_grid.shape[dx - 1]);
    Eigen::Index n_lead = 1;
    for (std::size_t a = 0; a + 1 < dx; ++a) n_lead *= static_cast<Eigen::Index>(x_grid.shape[a]);
    CMatrix result = CMatrix::Zero(n_lead, n_last);
    Eigen::VectorXd gamma;
    double h = 0.0;
    for (std::size_t start = 0; start < c.size(); start += kBlock) {
      const auto b = static_cast<Eigen::Index>(std::min(kBlock, c.size() - start));
      CMatrix lead = CMatrix::Ones(n_lead, b);
      CMatrix last(n_last, b);
      for (Eigen::Index col = 0; col < b; ++col) {
        const auto idx = start + static_cast<std::size_t>(col);
        linear_parts(phase, ys[idx], gamma, h);
        const Complex weight = c[idx] * std::polar(1.0, lambda * h);
        // Khatri-Rao product over the leading axes, row-major in the multi-index.
        Eigen::Index stride = n_lead;
        for (std::size_t a = 0; a + 1 < dx; ++a) {
          const auto n = static_cast<Eigen::Index>(axes[a].size());
          stride /= n;
          for (Eigen::Index row = 0; row < n_lead; ++row) {
            const auto i = static_cast<std::size_t>((row / stride) % n);
            lead(row, col) *= std::polar(1.0, lambda * axes[a][i] * gamma(static_cast<Eigen::Index>(a)));
          }
        }
        for (Eigen::Index m = 0; m < n_last; ++m) {
          last(m, col) = weight * std::polar(1.0, lambda * axes[dx - 1][static_cast<std::size_t>(m)] *
                                                      gamma(static_cast<Eigen::Index>(dx - 1)));
        }
      }
      result.noalias() += lead * last.transpose();
    }
    for (Eigen::Index row = 0; row < n_lead; ++row) {
      for (Eigen::Index m = 0; m < n_last; ++m) {
        const auto flat = static_cast<std::size_t>(row * n_last + m);
        x_grid.point(flat, x);
        out.values[flat] = result(row, m) * spec.amplitude_x(x);
      }
    }
    return out;
  }

  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    x_grid.point(flat, x);
    const double ax = spec.amplitude_x(x);
    if (ax == 0.0) continue;
    Complex acc{};
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * std::polar(1.0, lambda * phase.value(x, ys[k]));
    out.values[flat] = ax * acc;
  }
  return out;
}

SampledField apply_T_lambda_adjoint(const PhaseSpec& spec, double lambda, const SampledField& g,
                                    const SampledField& y_grid) {
  check_dims(spec, g.dimension(), y_grid.dimension(), "apply_T_lambda_adjoint");
  const Phase& phase = *spec.phase;
  const std::size_t dx = g.dimension();
  const std::size_t dy = y_grid.dimension();
  std::vector<double> x(dx), y(dy);
  // Weighted input g(x) zeta_x(x) dx.
  std::vector<Complex> gw(g.size());
  const double vol = g.cell_volume();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.point(flat, x);
    gw[flat] = g.values[flat] * spec.amplitude_x(x) * vol;
  }
  SampledField out = zeros_like(y_grid);

  if (phase.linear_in_x()) {
    std::vector<std::vector<double>> axes(dx);
    for (std::size_t a = 0; a < dx; ++a) axes[a] = axis_points(g, a);
    const auto n_last = static_cast<Eigen::Index>(g.shape[dx - 1]);
    Eigen::Index n_lead = 1;
    for (std::size_t a = 0; a + 1 < dx; ++a) n_lead *= static_cast<Eigen::Index>(g.shape[a]);
    CMatrix G(n_lead, n_last);
    for (Eigen::Index row = 0; row < n_lead; ++row) {
      for (Eigen::Index m = 0; m < n_last; ++m) G(row, m) = gw[static_cast<std::size_t>(row * n_last + m)];
    }
    Eigen::VectorXd gamma;
    double h = 0.0;
    for (std::size_t start = 0; start < out.size(); start += kBlock) {
      const auto b = static_cast<Eigen::Index>(std::min(kBlock, out.size() - start));
      CMatrix lead = CMatrix::Ones(n_lead, b);
      CMatrix last(n_last, b);
      std::vector<Complex> tail(static_cast<std::size_t>(b));
      for (Eigen::Index col = 0; col < b; ++col) {
        const auto idx = start + static_cast<std::size_t>(col);
        y_grid.point(idx, y);
        linear_parts(phase, y, gamma, h);
        tail[static_cast<std::size_t>(col)] = spec.amplitude_y(y) * std::polar(1.0, -lambda * h);
        Eigen::Index stride = n_lead;
        for (std::size_t a = 0; a + 1 < dx; ++a) {
          const auto n = static_cast<Eigen::Index>(axes[a].size());
          stride /= n;
          for (Eigen::Index row = 0; row < n_lead; ++row) {
            const auto i = static_cast<std::size_t>((row / stride) % n);
            lead(row, col) *= std::polar(1.0, -lambda * axes[a][i] * gamma(static_cast<Eigen::Index>(a)));
          }
        }
        for (Eigen::Index m = 0; m < n_last; ++m) {
          last(m, col) = std::polar(1.0, -lambda * axes[dx - 1][static_cast<std::size_t>(m)] *
                                             gamma(static_cast<Eigen::Index>(dx - 1)));
        }
      }
      const CMatrix partial = G * last;  // n_lead x b
      for (Eigen::Index col = 0; col < b; ++col) {
        const Complex s = (lead.col(col).array() * partial.col(col).array()).sum();
        out.values[start + static_cast<std::size_t>(col)] = s * tail[static_cast<std::size_t>(col)];
      }
    }
    return out;
  }

  for (std::size_t k = 0; k < out.size(); ++k) {
    y_grid.point(k, y);
    const double ay = spec.amplitude_y(y);
    if (ay == 0.0) continue;
    Complex acc{};
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      if (gw[flat] == Complex{}) continue;
      g.point(flat, x);
      acc += gw[flat] * std::polar(1.0, -lambda * phase.value(x, y));
    }
    out.values[k] = ay * acc;
  }
  return out;
}

SampledField scaling_x_grid(const PhaseSpec& spec, double lambda) {
  const auto d = static_cast<std::size_t>(spec.phase->x_dim());
  const double r = spec.support_radius;
  std::vector<double> origin(d, -r), spacing(d);
  std::vector<std::size_t> shape(d);
  for (std::size_t a = 0; a < d; ++a) {
    spacing[a] = (a + 1 < d) ? 1.0 / (8.0 * std::sqrt(lambda)) : 1.0 / 64.0;
    shape[a] = static_cast<std::size_t>(std::ceil(2.0 * r / spacing[a] - 1e-9));
  }
  return make_field(origin, spacing, shape);
}

SampledField sample_test_function(const TestFunction& tf, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("sample_test_function: spacing must be positive");
  const std::size_t d = tf.half_width.size();
  std::vector<double> origin(d), step(d);
  std::vector<std::size_t> shape(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto k = static_cast<std::size_t>(std::ceil(tf.half_width[a] / spacing - 1e-9));
    step[a] = tf.half_width[a] / static_cast<double>(std::max<std::size_t>(k, 1));
    origin[a] = -tf.half_width[a];
    shape[a] = 2 * std::max<std::size_t>(k, 1) + 1;
  }
  SampledField f = make_field(origin, step, shape);
  std::vector<double> y(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.point(flat, y);
    f.values[flat] = tf.f(y);
  }
  return f;
}

double refinement_error(const PhaseSpec& spec, double lambda, const TestFunction& tf, const SampledField& x_grid) {
  const double h = required_y_spacing(spec, lambda, tf.half_width);
  const double base = std::min(h, *std::min_element(tf.half_width.begin(), tf.half_width.end()) / 16.0);
  const SampledField coarse = apply_T_lambda(spec, lambda, sample_test_function(tf, base), x_grid);
  const SampledField fine = apply_T_lambda(spec, lambda, sample_test_function(tf, base / 2.0), x_grid);
  SampledField diff = coarse;
  for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= fine.values[i];
  const double ref = l2_norm(fine);
  return ref == 0.0 ? l2_norm(diff) : l2_norm(diff) / ref;
}

ConditionReport check_rank_mixed_hessian(const Phase& phase, std::span<const Probe> probes, int target, double tol) {
  ConditionReport report;
  report.condition = "rank mixed Hessian >= " + std::to_string(target);
  report.tolerance = tol;
  report.verdict = true;
  for (const auto& [x, y] : probes) {
    const Eigen::MatrixXd m = phase.mixed_hessian(as_span(x), as_span(y));
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    const int rank = s.size() == 0 ? 0 : numeric_rank(s, tol * s(0));
    report.probes.emplace_back(x, y);
    report.values.push_back(rank);
    report.passed.push_back(rank >= target);
    report.verdict = report.verdict && rank >= target;
  }
  return report;
}

ConditionReport check_curvature_rank(const Phase& phase, std::span<const Probe> probes, int kappa, double tol) {
  ConditionReport report;
  report.condition = "curvature rank >= " + std::to_string(kappa);
  report.tolerance = tol;
  report.verdict = true;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& [x, y] = probes[p];
    const Eigen::MatrixXd m = phase.mixed_hessian(as_span(x), as_span(y));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU);
    const Eigen::VectorXd s = svd.singularValues();
    const double scale = s.size() == 0 ? 0.0 : s(0);
    const int rank = numeric_rank(s, tol * scale);
    if (scale == 0.0 || m.rows() - rank != 1) {
      throw std::domain_error("check_curvature_rank: left kernel of phi_xy is " +
                              std::to_string(m.rows() - rank) + "-dimensional at probe " + std::to_string(p) + " (" +
                              describe(x, y) + ")");
    }
    const Eigen::VectorXd u = svd.matrixU().col(m.rows() - 1);
    const ThirdTensor t = phase.third_xyy(as_span(x), as_span(y));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(phase.y_dim(), phase.y_dim());
    for (int i = 0; i < phase.x_dim(); ++i) h += u(i) * t[static_cast<std::size_t>(i)];
    const Eigen::VectorXd hs = Eigen::JacobiSVD<Eigen::MatrixXd>(h).singularValues();
    const int curvature = numeric_rank(hs, tol * scale);
    report.probes.emplace_back(x, y);
    report.values.push_back(curvature);
    report.passed.push_back(curvature >= kappa);
    report.verdict = report.verdict && curvature >= kappa;
  }
  return report;
}

Eigen::VectorXd grad_y_det_mixed_hessian(const Phase& phase, std::span<const double> x, std::span<const double> y) {
  const Eigen::MatrixXd m = phase.mixed_hessian(x, y);
  if (m.rows() != m.cols()) throw std::invalid_argument("grad_y det: mixed Hessian must be square");
  const Eigen::Index n = m.rows();
  // Cofactor matrix C_ij = (-1)^{i+j} det(minor_ij).
  Eigen::MatrixXd cof(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (n == 1) {
        cof(i, j) = 1.0;
        continue;
      }
      Eigen::MatrixXd minor(n - 1, n - 1);
      for (Eigen::Index r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = m(r, c);
        }
        ++mr;
      }
      cof(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * minor.determinant();
    }
  }
  const ThirdTensor t = phase.third_xyy(x, y);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) g(k) += cof(i, j) * t[static_cast<std::size_t>(i)](j, k);
    }
  }
  return g;
}

namespace {

// Rank of the second fundamental form of L_x = {Phi_x(x, y) : det Phi_xy = 0}
// at the image of y0, via an implicit parametrization of the singular set.
int surface_curvature_rank(const Phase& phase, const Eigen::VectorXd& x, const Eigen::VectorXd& y0,
                           const FoldOptions& options, std::string& note) {
  const int d = phase.y_dim();
  const Eigen::VectorXd grad = grad_y_det_mixed_hessian(phase, as_span(x), as_span(y0));
  const Eigen::VectorXd n = grad.normalized();
  // Orthonormal tangent basis of the singular set: complement of n.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(n.transpose(), Eigen::ComputeFullV);
  const Eigen::MatrixXd tangent = svd.matrixV().rightCols(d - 1);
  const int m = d - 1;
  const double h = options.surface_step;

  auto lift = [&](const Eigen::VectorXd& s) {
    Eigen::VectorXd y = y0 + tangent * s;
    for (int it = 0; it < 50; ++it) {
      const double det = det_mixed(phase, x, y);
      const double slope = grad_y_det_mixed_hessian(phase, as_span(x), as_span(y)).dot(n);
      if (slope == 0.0) break;
      const double step = det / slope;
      y -= step * n;
      if (std::abs(step) < 1e-15) break;
    }
    return phase.grad_x(as_span(x), as_span(y)).eval();
  };

  const Eigen::VectorXd f0 = lift(Eigen::VectorXd::Zero(m));
  std::vector<Eigen::VectorXd> first(m);
  std::vector<std::vector<Eigen::VectorXd>> second(m, std::vector<Eigen::VectorXd>(m));
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e(a) = h;
    const Eigen::VectorXd fp = lift(e), fm = lift(-e);
    first[a] = (fp - fm) / (2.0 * h);
    second[a][a] = (fp - 2.0 * f0 + fm) / (h * h);
    for (int b = 0; b < a; ++b) {
      Eigen::VectorXd eb = Eigen::VectorXd::Zero(m);
      eb(b) = h;
      second[a][b] = (lift(e + eb) - lift(e - eb) - lift(-e + eb) + lift(-e - eb)) / (4.0 * h * h);
      second[b][a] = second[a][b];
    }
  }
  Eigen::MatrixXd tangents(phase.x_dim(), m);
  for (int a = 0; a < m; ++a) tangents.col(a) = first[a];
  Eigen::JacobiSVD<Eigen::MatrixXd> tsvd(tangents, Eigen::ComputeFullU);
  const Eigen::VectorXd ts = tsvd.singularValues();
  if (m > 0 && (ts(m - 1) <= options.rank_tol * ts(0))) {
    note = "L_x is not immersed at a singular point";
    return -1;
  }
  const Eigen::VectorXd normal = tsvd.matrixU().col(phase.x_dim() - 1);
  Eigen::MatrixXd I(m, m), II(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      I(a, b) = first[a].dot(first[b]);
      II(a, b) = second[a][b].dot(normal);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(II, I);
  int rank = 0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(eig.eigenvalues()(i)) > options.curvature_tol) ++rank;
  }
  return rank;
}

}  // namespace

ConditionReport check_fold(const Phase& phase, std::span<const Probe> probes, int kappa, const FoldOptions& options) {
  if (phase.x_dim() != phase.y_dim()) throw std::invalid_argument("check_fold: needs equal x and y dimensions");
  ConditionReport report;
  report.condition = "fold singularities with curvature rank >= " + std::to_string(kappa);
  report.tolerance = options.derivative_tol;

  std::vector<Probe> singular;
  for (std::size_t p = 0; p + 1 < probes.size(); p += 2) {
    Eigen::VectorXd xa = probes[p].first, ya = probes[p].second;
    Eigen::VectorXd xb = probes[p + 1].first, yb = probes[p + 1].second;
    double da = det_mixed(phase, xa, ya);
    const double db = det_mixed(phase, xb, yb);
    if (da == 0.0) {
      singular.emplace_back(xa, ya);
      continue;
    }
    if (db == 0.0) {
      singular.emplace_back(xb, yb);
      continue;
    }
    if ((da > 0.0) == (db > 0.0)) continue;
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd xm = 0.5 * (xa + xb), ym = 0.5 * (ya + yb);
      const double dm = det_mixed(phase, xm, ym);
      if (dm == 0.0) {
        xa = xb = xm;
        ya = yb = ym;
        break;
      }
      if ((dm > 0.0) == (da > 0.0)) {
        xa = xm;
        ya = ym;
        da = dm;
      } else {
        xb = xm;
        yb = ym;
      }
    }
    singular.emplace_back(0.5 * (xa + xb), 0.5 * (ya + yb));
  }

  if (singular.empty()) {
    report.vacuous = true;
    report.verdict = true;
    report.note = "fold hypothesis vacuous here: det Phi_xy has no zeros on the probe segments";
    return report;
  }

  report.verdict = true;
  const int d = phase.x_dim();
  for (const auto& [x, y] : singular) {
    const Eigen::MatrixXd m = phase.mixed_hessian(as_span(x), as_span(y));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    const int rank = numeric_rank(s, options.rank_tol * s(0));
    const Eigen::VectorXd b = svd.matrixV().col(d - 1);
    const double transversal = std::abs(b.dot(grad_y_det_mixed_hessian(phase, as_span(x), as_span(y))));
    std::string note;
    const int curvature = (rank >= d - 1 && transversal > options.derivative_tol)
                              ? surface_curvature_rank(phase, x, y, options, note)
                              : -1;
    const bool ok = rank >= d - 1 && transversal > options.derivative_tol && curvature >= kappa;
    report.probes.emplace_back(x, y);
    report.values.push_back(transversal);
    report.secondary.push_back(curvature);
    report.passed.push_back(ok);
    report.verdict = report.verdict && ok;
    if (!note.empty()) report.note = note;
  }
  return report;
}

std::vector<Probe> default_fold_probes(const Phase& phase, double radius) {
  const int d = phase.x_dim();
  const int dy = phase.y_dim();
  std::vector<Probe> probes;
  const std::vector<double> offsets{-0.5, 0.0, 0.5};
  for (double xo : offsets) {
    for (double yo : offsets) {
      Eigen::VectorXd x = Eigen::VectorXd::Constant(d, xo * radius);
      Eigen::VectorXd ya = Eigen::VectorXd::Constant(dy, yo * radius);
      Eigen::VectorXd yb = ya;
      ya(dy - 1) = -radius * 0.9;
      yb(dy - 1) = radius * 1.1;
      probes.emplace_back(x, ya);
      probes.emplace_back(x, yb);
    }
  }
  return probes;
}

std::vector<Probe> default_probes(const Phase& phase, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Probe> probes;
  probes.emplace_back(Eigen::VectorXd::Zero(phase.x_dim()), Eigen::VectorXd::Zero(phase.y_dim()));
  for (int p = 1; p < count; ++p) {
    Eigen::VectorXd x(phase.x_dim()), y(phase.y_dim());
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    probes.emplace_back(x, y);
  }
  return probes;
}

double kernel_spacing(const PhaseSpec& spec, double lambda, double reach) {
  const Phase& phase = *spec.phase;
  const std::vector<double> x_half(phase.x_dim(), spec.support_radius);
  const std::vector<double> y_half(phase.y_dim(), spec.support_radius);
  const int n = sample_count(x_half.size() + y_half.size());
  double g = 0.0;
  for (const auto& x : box_samples(x_half, n)) {
    for (const auto& y : box_samples(y_half, n)) {
      g = std::max(g, Eigen::JacobiSVD<Eigen::MatrixXd>(phase.mixed_hessian(x, y)).singularValues()(0));
    }
  }
  const double amplitude_scale = spec.support_radius / 32.0;
  if (g == 0.0) return amplitude_scale;
  return std::min(amplitude_scale, kTwoPi / (10.0 * lambda * reach * g));
}

namespace {

Complex kernel_integral(const PhaseSpec& spec, double lambda, std::span<const double> w, std::span<const double> z,
                        double spacing) {
  const Phase& phase = *spec.phase;
  const double aw = spec.amplitude_x(w);
  const double az = spec.amplitude_x(z);
  if (aw == 0.0 || az == 0.0) return {};
  const TestFunction box{"box", std::vector<double>(phase.y_dim(), spec.support_radius),
                         [](std::span<const double>) { return Complex{1.0, 0.0}; }};
  const SampledField grid = sample_test_function(box, spacing);
  std::vector<double> y(grid.dimension());
  Complex acc{};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, y);
    const double ay = spec.amplitude_y(y);
    if (ay == 0.0) continue;
    acc += ay * ay * std::polar(1.0, lambda * (phase.value(w, y) - phase.value(z, y)));
  }
  return acc * aw * az * grid.cell_volume();
}

}  // namespace

Complex dyadic_kernel(const PhaseSpec& spec, double lambda, int j, std::span<const double> w,
                      std::span<const double> z, bool tilde, double spacing) {
  const std::size_t d = w.size();
  const double normal = lambda * std::abs(w[d - 1] - z[d - 1]);
  double tangential = 0.0;
  for (std::size_t a = 0; a + 1 < d; ++a) tangential += (w[a] - z[a]) * (w[a] - z[a]);
  tangential = std::sqrt(tangential);
  const double eta_j = dyadic_bump(j, normal);
  const double cut = chi0(lambda * std::ldexp(1.0, -j) * tangential / spec.epsilon);
  const double factor = eta_j * (tilde ? 1.0 - cut : cut);
  if (factor == 0.0) return {};
  return factor * kernel_integral(spec, lambda, w, z, spacing);
}

Complex tt_star_kernel(const PhaseSpec& spec, double lambda, std::span<const double> w, std::span<const double> z,
                       double spacing) {
  return kernel_integral(spec, lambda, w, z, spacing);
}

double dyadic_kernel_sup(const PhaseSpec& spec, double lambda, int j, int samples_per_axis) {
  if (j < 0) throw std::invalid_argument("dyadic_kernel_sup: j must be nonnegative");
  if (samples_per_axis < 3) throw std::invalid_argument("dyadic_kernel_sup: need at least 3 samples per axis");
  if (std::ldexp(1.0, j) > spec.epsilon * lambda) return 0.0;
  const int d = spec.phase->x_dim();
  const double reach = 2.0 * std::ldexp(1.0, j) / lambda;
  const double spacing = kernel_spacing(spec, lambda, reach);

  std::vector<Eigen::VectorXd> bases{Eigen::VectorXd::Zero(d)};
  for (int a = 0; a < d; ++a) {
    for (double s : {-1.0, 1.0}) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
      z(a) = s * spec.support_radius / 8.0;
      bases.push_back(z);
    }
  }
  // Normal offsets 2^{j-2} .. 2^j geometric; the middle sample is 2^{j-1}.
  std::vector<double> normals;
  for (int m = 0; m < samples_per_axis; ++m) {
    const double t = 2.0 * m / (samples_per_axis - 1);
    normals.push_back(std::ldexp(1.0, j - 2) * std::pow(2.0, t) / lambda);
  }
  std::vector<Eigen::VectorXd> tangentials{Eigen::VectorXd::Zero(d)};
  for (int a = 0; a + 1 < d; ++a) {
    for (double s : {-1.0, 1.0}) {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(d);
      t(a) = s * 0.25 * spec.epsilon * std::ldexp(1.0, j) / lambda;
      tangentials.push_back(t);
    }
  }
  double best = 0.0;
  for (const auto& z : bases) {
    for (double dn : normals) {
      for (const auto& dt : tangentials) {
        Eigen::VectorXd w = z + dt;
        w(d - 1) += dn;
        best = std::max(best, std::abs(dyadic_kernel(spec, lambda, j, as_span(w), as_span(z), false, spacing)));
      }
    }
  }
  return best;
}

std::vector<TestFunction> scaling_family(const PhaseSpec& spec, double lambda, const ScalingOptions& options) {
  const int dy = spec.phase->y_dim();
  std::vector<TestFunction> family;
  for (double c : options.knapp_widths) {
    const double w = c / std::sqrt(lambda);
    std::ostringstream name;
    name << "knapp-" << c;
    family.push_back({name.str(), std::vector<double>(dy, w), [w](std::span<const double> y) {
                        double v = 1.0;
                        for (double t : y) v *= chi0(t / w);
                        return Complex{v, 0.0};
                      }});
  }
  const double r = spec.support_radius;
  if (options.include_constant) {
    family.push_back({"constant", std::vector<double>(dy, r), [](std::span<const double>) { return Complex{1.0, 0.0}; }});
  }
  if (options.include_random) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> freq(-3, 3);
    struct Wave {
      Complex c;
      std::vector<int> k;
    };
    std::vector<Wave> waves;
    for (int m = 0; m < 6; ++m) {
      Wave wv;
      const double re = normal(rng);
      const double im = normal(rng);
      wv.c = {re, im};
      for (int a = 0; a < dy; ++a) wv.k.push_back(freq(rng));
      waves.push_back(std::move(wv));
    }
    family.push_back({"random", std::vector<double>(dy, r), [waves, r](std::span<const double> y) {
                        Complex v{};
                        for (const auto& wv : waves) {
                          double phase = 0.0;
                          for (std::size_t a = 0; a < y.size(); ++a) phase += wv.k[a] * y[a];
                          v += wv.c * std::polar(1.0, std::numbers::pi * phase / r);
                        }
                        return v;
                      }});
  }
  return family;
}

ScalingReport scaling_experiment(const PhaseSpec& spec, double q, std::span<const double> lambdas,
                                 const ScalingOptions& options) {
  if (lambdas.size() < 4) throw std::invalid_argument("scaling_experiment: need at least 4 values of lambda");
  if (!(q > 0.0)) throw std::invalid_argument("scaling_experiment: q must be positive");
  ScalingReport report;
  report.q = q;
  report.target_slope = -static_cast<double>(spec.phase->x_dim()) / q;
  for (double lambda : lambdas) {
    const SampledField x_grid = scaling_x_grid(spec, lambda);
    double best = 0.0;
    std::string best_name;
    for (const auto& tf : scaling_family(spec, lambda, options)) {
      const double need = required_y_spacing(spec, lambda, tf.half_width);
      const double h = std::min(need, *std::min_element(tf.half_width.begin(), tf.half_width.end()) / 16.0);
      double cells = 1.0;
      for (double hw : tf.half_width) cells *= 2.0 * std::ceil(hw / h) + 1.0;
      const double work = cells * static_cast<double>(x_grid.size());
      if (work > options.work_budget) {
        std::ostringstream s;
        s << "lambda = " << lambda << ": skipped member '" << tf.name << "' (work " << work << " exceeds budget "
          << options.work_budget << ")";
        report.notices.push_back(s.str());
        continue;
      }
      const SampledField f = sample_test_function(tf, h);
      const double norm_f = l2_norm(f);
      if (norm_f == 0.0) continue;
      const double ratio = lorentz_norm(apply_T_lambda(spec, lambda, f, x_grid), {q, 2.0}) / norm_f;
      if (ratio > best) {
        best = ratio;
        best_name = tf.name;
      }
    }
    if (best_name.empty()) {
      std::ostringstream s;
      s << "lambda = " << lambda << " dropped: no family member within budget";
      report.notices.push_back(s.str());
      continue;
    }
    report.lambdas.push_back(lambda);
    report.ratios.push_back(best);
    report.best_member.push_back(best_name);
  }
  if (report.lambdas.size() < 4) throw std::runtime_error("scaling_experiment: fewer than 4 lambda values survived");
  report.fit = loglog_fit(report.lambdas, report.ratios);
  return report;
}

}  // namespace tomaslab
