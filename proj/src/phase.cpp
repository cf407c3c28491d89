#include "tomaslab/phase.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tomaslab/bump.hpp"

namespace tomaslab {

namespace {

constexpr double kStep = 1e-4;
constexpr double kThirdStep = 1e-3;

std::vector<double> copy(std::span<const double> v) { return {v.begin(), v.end()}; }

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Eigen::VectorXd as_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_point(const Phase& phase, std::span<const double> x, std::span<const double> y) {
  if (x.size() != static_cast<std::size_t>(phase.x_dim()) || y.size() != static_cast<std::size_t>(phase.y_dim())) {
    throw std::invalid_argument("phase '" + phase.name() + "': point dimension mismatch");
  }
}

// d^k/dt^k t^n at t.
double power_derivative(double t, int n, int k) {
  if (k > n) return 0.0;
  double factor = 1.0;
  for (int i = 0; i < k; ++i) factor *= static_cast<double>(n - i);
  return factor * std::pow(t, n - k);
}

}  // namespace

Eigen::VectorXd Phase::fd_grad_x(std::span<const double> x, std::span<const double> y) const {
  check_point(*this, x, y);
  Eigen::VectorXd g(x_dim());
  auto xp = copy(x);
  for (int i = 0; i < x_dim(); ++i) {
    const double x0 = xp[i];
    xp[i] = x0 + kStep;
    const double up = value(xp, y);
    xp[i] = x0 - kStep;
    const double down = value(xp, y);
    xp[i] = x0;
    g(i) = (up - down) / (2.0 * kStep);
  }
  return g;
}

Eigen::VectorXd Phase::fd_grad_y(std::span<const double> x, std::span<const double> y) const {
  check_point(*this, x, y);
  Eigen::VectorXd g(y_dim());
  auto yp = copy(y);
  for (int j = 0; j < y_dim(); ++j) {
    const double y0 = yp[j];
    yp[j] = y0 + kStep;
    const double up = value(x, yp);
    yp[j] = y0 - kStep;
    const double down = value(x, yp);
    yp[j] = y0;
    g(j) = (up - down) / (2.0 * kStep);
  }
  return g;
}

Eigen::MatrixXd Phase::fd_mixed_hessian(std::span<const double> x, std::span<const double> y) const {
  check_point(*this, x, y);
  Eigen::MatrixXd m(x_dim(), y_dim());
  auto xp = copy(x);
  auto yp = copy(y);
  for (int i = 0; i < x_dim(); ++i) {
    for (int j = 0; j < y_dim(); ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          xp[i] = x[i] + si * kStep;
          yp[j] = y[j] + sj * kStep;
          acc += si * sj * value(xp, yp);
        }
      }
      xp[i] = x[i];
      yp[j] = y[j];
      m(i, j) = acc / (4.0 * kStep * kStep);
    }
  }
  return m;
}

ThirdTensor Phase::fd_third_xyy(std::span<const double> x, std::span<const double> y) const {
  check_point(*this, x, y);
  ThirdTensor t(x_dim(), Eigen::MatrixXd::Zero(y_dim(), y_dim()));
  auto yp = copy(y);
  for (int k = 0; k < y_dim(); ++k) {
    yp[k] = y[k] + kThirdStep;
    const Eigen::MatrixXd up = mixed_hessian(x, yp);
    yp[k] = y[k] - kThirdStep;
    const Eigen::MatrixXd down = mixed_hessian(x, yp);
    yp[k] = y[k];
    const Eigen::MatrixXd slope = (up - down) / (2.0 * kThirdStep);
    for (int i = 0; i < x_dim(); ++i) {
      for (int j = 0; j < y_dim(); ++j) t[i](j, k) = slope(i, j);
    }
  }
  // Symmetrize in (j, k); the exact tensor is symmetric.
  for (auto& m : t) m = 0.5 * (m + m.transpose()).eval();
  return t;
}

Eigen::VectorXd Phase::grad_x(std::span<const double> x, std::span<const double> y) const { return fd_grad_x(x, y); }
Eigen::VectorXd Phase::grad_y(std::span<const double> x, std::span<const double> y) const { return fd_grad_y(x, y); }
Eigen::MatrixXd Phase::mixed_hessian(std::span<const double> x, std::span<const double> y) const {
  return fd_mixed_hessian(x, y);
}
ThirdTensor Phase::third_xyy(std::span<const double> x, std::span<const double> y) const { return fd_third_xyy(x, y); }

PolynomialPhase::PolynomialPhase(int x_dim, int y_dim, std::vector<Term> terms, std::string name)
    : x_dim_(x_dim), y_dim_(y_dim), terms_(std::move(terms)), name_(std::move(name)) {
  if (x_dim < 1 || y_dim < 1) throw std::invalid_argument("polynomial phase: dimensions must be positive");
  for (auto& t : terms_) {
    if (t.x_powers.empty()) t.x_powers.assign(x_dim, 0);
    if (t.y_powers.empty()) t.y_powers.assign(y_dim, 0);
    if (t.x_powers.size() != static_cast<std::size_t>(x_dim) || t.y_powers.size() != static_cast<std::size_t>(y_dim)) {
      throw std::invalid_argument("polynomial phase '" + name_ + "': monomial has the wrong number of exponents");
    }
    for (int a : t.x_powers) {
      if (a < 0) throw std::invalid_argument("polynomial phase: negative exponent");
    }
    for (int b : t.y_powers) {
      if (b < 0) throw std::invalid_argument("polynomial phase: negative exponent");
    }
  }
}

double PolynomialPhase::derivative(std::span<const double> x, std::span<const double> y, std::span<const int> dx,
                                   std::span<const int> dy) const {
  check_point(*this, x, y);
  double total = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (int i = 0; i < x_dim_ && v != 0.0; ++i) v *= power_derivative(x[i], t.x_powers[i], dx[i]);
    for (int j = 0; j < y_dim_ && v != 0.0; ++j) v *= power_derivative(y[j], t.y_powers[j], dy[j]);
    total += v;
  }
  return total;
}

double PolynomialPhase::value(std::span<const double> x, std::span<const double> y) const {
  const std::vector<int> zx(x_dim_, 0), zy(y_dim_, 0);
  return derivative(x, y, zx, zy);
}

Eigen::VectorXd PolynomialPhase::grad_x(std::span<const double> x, std::span<const double> y) const {
  Eigen::VectorXd g(x_dim_);
  std::vector<int> dx(x_dim_, 0), dy(y_dim_, 0);
  for (int i = 0; i < x_dim_; ++i) {
    dx[i] = 1;
    g(i) = derivative(x, y, dx, dy);
    dx[i] = 0;
  }
  return g;
}

Eigen::VectorXd PolynomialPhase::grad_y(std::span<const double> x, std::span<const double> y) const {
  Eigen::VectorXd g(y_dim_);
  std::vector<int> dx(x_dim_, 0), dy(y_dim_, 0);
  for (int j = 0; j < y_dim_; ++j) {
    dy[j] = 1;
    g(j) = derivative(x, y, dx, dy);
    dy[j] = 0;
  }
  return g;
}

Eigen::MatrixXd PolynomialPhase::mixed_hessian(std::span<const double> x, std::span<const double> y) const {
  Eigen::MatrixXd m(x_dim_, y_dim_);
  std::vector<int> dx(x_dim_, 0), dy(y_dim_, 0);
  for (int i = 0; i < x_dim_; ++i) {
    for (int j = 0; j < y_dim_; ++j) {
      dx[i] = 1;
      dy[j] = 1;
      m(i, j) = derivative(x, y, dx, dy);
      dx[i] = 0;
      dy[j] = 0;
    }
  }
  return m;
}

ThirdTensor PolynomialPhase::third_xyy(std::span<const double> x, std::span<const double> y) const {
  ThirdTensor t(x_dim_, Eigen::MatrixXd::Zero(y_dim_, y_dim_));
  std::vector<int> dx(x_dim_, 0), dy(y_dim_, 0);
  for (int i = 0; i < x_dim_; ++i) {
    dx[i] = 1;
    for (int j = 0; j < y_dim_; ++j) {
      for (int k = 0; k < y_dim_; ++k) {
        ++dy[j];
        ++dy[k];
        t[i](j, k) = derivative(x, y, dx, dy);
        --dy[j];
        --dy[k];
      }
    }
    dx[i] = 0;
  }
  return t;
}

bool PolynomialPhase::linear_in_x() const {
  for (const auto& t : terms_) {
    int degree = 0;
    for (int a : t.x_powers) degree += a;
    if (degree > 1 && t.coefficient != 0.0) return false;
  }
  return true;
}

FunctionPhase::FunctionPhase(int x_dim, int y_dim, Fn fn, std::string name)
    : x_dim_(x_dim), y_dim_(y_dim), fn_(std::move(fn)), name_(std::move(name)) {
  if (x_dim < 1 || y_dim < 1) throw std::invalid_argument("function phase: dimensions must be positive");
  if (!fn_) throw std::invalid_argument("function phase: empty evaluator");
}

RotatedPhase::RotatedPhase(PhasePtr base, Eigen::MatrixXd Q, Eigen::MatrixXd R)
    : base_(std::move(base)), Q_(std::move(Q)), R_(std::move(R)) {
  if (!base_) throw std::invalid_argument("rotated phase: null base");
  if (Q_.rows() != base_->x_dim() || Q_.cols() != base_->x_dim() || R_.rows() != base_->y_dim() ||
      R_.cols() != base_->y_dim()) {
    throw std::invalid_argument("rotated phase: rotation sizes do not match the phase");
  }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> RotatedPhase::to_base(std::span<const double> x,
                                                                  std::span<const double> y) const {
  check_point(*this, x, y);
  return {Q_ * as_vector(x), R_ * as_vector(y)};
}

double RotatedPhase::value(std::span<const double> x, std::span<const double> y) const {
  const auto [bx, by] = to_base(x, y);
  return base_->value(as_span(bx), as_span(by));
}

Eigen::VectorXd RotatedPhase::grad_x(std::span<const double> x, std::span<const double> y) const {
  const auto [bx, by] = to_base(x, y);
  return Q_.transpose() * base_->grad_x(as_span(bx), as_span(by));
}

Eigen::VectorXd RotatedPhase::grad_y(std::span<const double> x, std::span<const double> y) const {
  const auto [bx, by] = to_base(x, y);
  return R_.transpose() * base_->grad_y(as_span(bx), as_span(by));
}

Eigen::MatrixXd RotatedPhase::mixed_hessian(std::span<const double> x, std::span<const double> y) const {
  const auto [bx, by] = to_base(x, y);
  return Q_.transpose() * base_->mixed_hessian(as_span(bx), as_span(by)) * R_;
}

ThirdTensor RotatedPhase::third_xyy(std::span<const double> x, std::span<const double> y) const {
  const auto [bx, by] = to_base(x, y);
  const ThirdTensor base = base_->third_xyy(as_span(bx), as_span(by));
  ThirdTensor out(x_dim(), Eigen::MatrixXd::Zero(y_dim(), y_dim()));
  for (int i = 0; i < x_dim(); ++i) {
    for (int a = 0; a < x_dim(); ++a) out[i] += Q_(a, i) * (R_.transpose() * base[a] * R_);
  }
  return out;
}

Eigen::MatrixXd random_rotation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix column signs so the distribution is Haar.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  }
  return q;
}

double PhaseSpec::amplitude_x(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return chi0(std::sqrt(r2) / support_radius);
}

double PhaseSpec::amplitude_y(std::span<const double> y) const {
  double a = 1.0;
  for (double v : y) a *= chi0(v / support_radius);
  return a;
}

PhaseSpec make_phase_spec(PhasePtr phase, double epsilon) {
  if (!phase) throw std::invalid_argument("phase spec: null phase");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("phase spec: epsilon must lie in (0, 1]");
  return PhaseSpec{std::move(phase), epsilon, epsilon * epsilon};
}

namespace {

PolynomialPhase::Term term(double c, std::vector<int> xp, std::vector<int> yp) {
  return PolynomialPhase::Term{c, std::move(xp), std::move(yp)};
}

std::vector<int> unit(int n, int i, int power = 1) {
  std::vector<int> v(n, 0);
  v[i] = power;
  return v;
}

}  // namespace

std::vector<std::string> catalog_names() { return {"parabola", "cone", "fold-flat", "fold-curved", "zero", "zero-fold"}; }

PhasePtr catalog_phase(const std::string& name, int d) {
  if (d < 2) throw std::invalid_argument("catalog phase: d must be at least 2");
  std::vector<PolynomialPhase::Term> terms;
  if (name == "parabola" || name == "cone") {
    const int dy = d - 1;
    for (int i = 0; i < dy; ++i) terms.push_back(term(1.0, unit(d, i), unit(dy, i)));
    const int curved = name == "parabola" ? dy : 1;
    for (int j = 0; j < curved; ++j) terms.push_back(term(0.5, unit(d, d - 1), unit(dy, j, 2)));
    return std::make_shared<PolynomialPhase>(d, dy, std::move(terms), name);
  }
  if (name == "fold-flat" || name == "fold-curved") {
    if (d != 2) throw std::invalid_argument("catalog phase '" + name + "' is defined for d = 2");
    terms.push_back(term(1.0, {1, 0}, {1, 0}));
    terms.push_back(term(0.5, {0, 1}, {0, 2}));
    if (name == "fold-curved") terms.push_back(term(0.5, {0, 1}, {2, 0}));
    return std::make_shared<PolynomialPhase>(2, 2, std::move(terms), name);
  }
  if (name == "zero") return std::make_shared<PolynomialPhase>(d, d - 1, std::move(terms), name);
  if (name == "zero-fold") return std::make_shared<PolynomialPhase>(d, d, std::move(terms), name);
  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown phase '" + name + "' (catalog: " + known + ")");
}

PhasePtr read_polynomial_phase(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("phase file: missing header");
  std::istringstream hs(header);
  int d = 0, dy = 0;
  std::string name = "polynomial";
  if (!(hs >> d >> dy)) throw std::runtime_error("phase file: header must be `d d_y [name]`");
  hs >> name;
  std::vector<PolynomialPhase::Term> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    PolynomialPhase::Term t;
    if (!(ls >> t.coefficient)) continue;
    t.x_powers.resize(d);
    t.y_powers.resize(dy);
    for (auto& a : t.x_powers) {
      if (!(ls >> a)) throw std::runtime_error("phase file: short monomial row");
    }
    for (auto& b : t.y_powers) {
      if (!(ls >> b)) throw std::runtime_error("phase file: short monomial row");
    }
    terms.push_back(std::move(t));
  }
  return std::make_shared<PolynomialPhase>(d, dy, std::move(terms), name);
}

PhasePtr load_polynomial_phase(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_polynomial_phase(in);
}

DerivativeCheck validate_derivatives(const Phase& phase, int n_probes, std::uint64_t seed, double radius, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  DerivativeCheck check;
  check.probes = n_probes;
  auto compare = [&](double exact, double approx) {
    check.max_discrepancy = std::max(check.max_discrepancy, std::abs(exact - approx) / std::max(1.0, std::abs(exact)));
  };
  std::vector<double> x(phase.x_dim()), y(phase.y_dim());
  for (int p = 0; p < n_probes; ++p) {
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const auto gx = phase.grad_x(x, y), fgx = phase.fd_grad_x(x, y);
    const auto gy = phase.grad_y(x, y), fgy = phase.fd_grad_y(x, y);
    const auto m = phase.mixed_hessian(x, y), fm = phase.fd_mixed_hessian(x, y);
    const auto t = phase.third_xyy(x, y), ft = phase.fd_third_xyy(x, y);
    for (int i = 0; i < gx.size(); ++i) compare(gx(i), fgx(i));
    for (int j = 0; j < gy.size(); ++j) compare(gy(j), fgy(j));
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) compare(m(i, j), fm(i, j));
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (int j = 0; j < t[i].rows(); ++j) {
        for (int k = 0; k < t[i].cols(); ++k) compare(t[i](j, k), ft[i](j, k));
      }
    }
  }
  check.passed = check.max_discrepancy <= tol;
  return check;
}

}  // namespace tomaslab
