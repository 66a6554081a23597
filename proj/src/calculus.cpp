// SPDX-License-Identifier: Apache-2.0
#include "hoc/calculus.hpp"

#include <cmath>
#include <numeric>

#include "hoc/errors.hpp"

namespace hoc {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  double b = x;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

int total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

PolyFunction::PolyFunction(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw DomainError("nvars must be >= 0");
}

PolyFunction::PolyFunction(int nvars, const std::vector<std::pair<Exponents, double>>& monomials)
    : PolyFunction(nvars) {
  for (const auto& [e, c] : monomials) add_term(e, c);
}

void PolyFunction::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != nvars_) throw ShapeError("exponent length != nvars");
  for (int x : e)
    if (x < 0) throw DomainError("negative exponent");
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

PolyFunction PolyFunction::constant(int nvars, double c) {
  return PolyFunction(nvars, {{Exponents(nvars, 0), c}});
}

PolyFunction PolyFunction::coordinate(int nvars, int i) {
  if (i < 0 || i >= nvars) throw ShapeError("coordinate index out of range");
  Exponents e(nvars, 0);
  e[i] = 1;
  return PolyFunction(nvars, {{e, 1.0}});
}

PolyFunction PolyFunction::linear(const Eigen::VectorXd& a) {
  const int n = static_cast<int>(a.size());
  PolyFunction f(n);
  for (int i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = 1;
    f.add_term(e, a[i]);
  }
  return f;
}

PolyFunction PolyFunction::quadratic_form(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ShapeError("quadratic form needs a square matrix");
  const int n = static_cast<int>(a.rows());
  PolyFunction f(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Exponents e(n, 0);
      e[i] += 1;
      e[j] += 1;
      f.add_term(e, a(i, j));
    }
  return f;
}

int PolyFunction::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total(e));
  return d;
}

double PolyFunction::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw ShapeError("point length != nvars");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) m *= ipow(x[i], e[i]);
    s += m;
  }
  return s;
}

double PolyFunction::eval(const Eigen::VectorXd& x) const {
  return eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

PolyFunction PolyFunction::partial(int i) const {
  if (i < 0 || i >= nvars_) throw ShapeError("partial index out of range");
  PolyFunction d(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents e2 = e;
    e2[i] -= 1;
    d.add_term(e2, c * e[i]);
  }
  return d;
}

Eigen::VectorXd PolyFunction::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) throw ShapeError("point length != nvars");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nvars_);
  for (int i = 0; i < nvars_; ++i) g[i] = partial(i).eval(x);
  return g;
}

Eigen::MatrixXd PolyFunction::hessian(const Eigen::VectorXd& x) const {
  return derivative_tensor(*this, 2, x).tensor().as_matrix();
}

PolyFunction PolyFunction::operator+(const PolyFunction& o) const {
  if (o.nvars_ != nvars_) throw ShapeError("nvars mismatch");
  PolyFunction r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

PolyFunction PolyFunction::operator-(const PolyFunction& o) const { return *this + o * -1.0; }

PolyFunction PolyFunction::operator*(const PolyFunction& o) const {
  if (o.nvars_ != nvars_) throw ShapeError("nvars mismatch");
  PolyFunction r(nvars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

PolyFunction PolyFunction::operator*(double a) const {
  PolyFunction r(nvars_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * a);
  return r;
}

SymTensor derivative_tensor(const PolyFunction& f, int j, const Eigen::VectorXd& x) {
  if (j < 1) throw DomainError("derivative order must be >= 1");
  const int n = f.nvars();
  if (x.size() != n) throw ShapeError("point length != nvars");
  Tensor t(j, n);
  std::map<std::vector<int>, double> cache;
  std::vector<int> idx(j);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    t.unflatten(flat, idx);
    std::vector<int> mult(n, 0);
    for (int i : idx) ++mult[i];
    auto it = cache.find(mult);
    if (it == cache.end()) {
      double s = 0.0;
      for (const auto& [e, c] : f.terms()) {
        double m = c;
        for (int i = 0; i < n && m != 0.0; ++i) {
          if (e[i] < mult[i]) {
            m = 0.0;
            break;
          }
          for (int k = 0; k < mult[i]; ++k) m *= e[i] - k;
          m *= ipow(x[i], e[i] - mult[i]);
        }
        s += m;
      }
      it = cache.emplace(mult, s).first;
    }
    t[flat] = it->second;
  }
  return SymTensor::checked(t, 0.0);
}

// ----- manifolds -----

ManifoldDescriptor ManifoldDescriptor::euclidean(int n) {
  if (n < 1) throw DomainError("Euclidean space needs n >= 1");
  return {ManifoldKind::Euclidean, n, 0, 2.0};
}

ManifoldDescriptor ManifoldDescriptor::sphere(int n) {
  if (n < 2) throw DomainError("sphere needs n >= 2");
  return {ManifoldKind::Sphere, n, 0, 2.0};
}

ManifoldDescriptor ManifoldDescriptor::lp_sphere(int n, double p) {
  if (n < 2 || !(p >= 2.0) || std::isinf(p)) throw DomainError("lp sphere needs n >= 2 and finite p >= 2");
  return {ManifoldKind::LpSphere, n, 0, p};
}

ManifoldDescriptor ManifoldDescriptor::stiefel(int n, int k) {
  if (n < 3 || k < 1 || k >= n) throw DomainError("Stiefel manifold needs n >= 3 and 1 <= k < n");
  return {ManifoldKind::Stiefel, n, k, 2.0};
}

ManifoldDescriptor ManifoldDescriptor::grassmann(int n, int k) {
  if (n < 3 || k < 1 || k >= n) throw DomainError("Grassmann manifold needs n >= 3 and 1 <= k < n");
  return {ManifoldKind::Grassmann, n, k, 2.0};
}

int ManifoldDescriptor::cols() const {
  switch (kind) {
    case ManifoldKind::Stiefel: return k;
    case ManifoldKind::Grassmann: return n;
    default: return 1;
  }
}

Eigen::VectorXd vec(const Eigen::MatrixXd& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
}

Eigen::MatrixXd mat(const Eigen::VectorXd& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw ShapeError("mat: size mismatch");
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

namespace {

Eigen::VectorXd signed_power(const Eigen::VectorXd& v, double e) {
  Eigen::VectorXd w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) w[i] = std::copysign(std::pow(std::abs(v[i]), e), v[i]);
  return w;
}

}  // namespace

void check_on_manifold(const ManifoldDescriptor& m, const Eigen::MatrixXd& x) {
  if (x.rows() != m.rows() || x.cols() != m.cols()) throw ShapeError("point has the wrong shape");
  const double tol = kOnManifoldTol;
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return;
    case ManifoldKind::Sphere:
      if (std::abs(x.col(0).norm() - 1.0) > tol) throw DomainError("point not on the unit sphere");
      return;
    case ManifoldKind::LpSphere:
      if (std::abs(lp_norm(x.col(0), m.p) - 1.0) > tol) throw DomainError("point not on the lp sphere");
      return;
    case ManifoldKind::Stiefel: {
      const Eigen::MatrixXd g = x.transpose() * x - Eigen::MatrixXd::Identity(m.k, m.k);
      if (g.cwiseAbs().maxCoeff() > tol) throw DomainError("point not on the Stiefel manifold");
      return;
    }
    case ManifoldKind::Grassmann: {
      const double asym = (x - x.transpose()).cwiseAbs().maxCoeff();
      const double idem = (x * x - x).cwiseAbs().maxCoeff();
      const double tr = std::abs(x.trace() - m.k);
      if (asym > tol || idem > tol || tr > tol) throw DomainError("point not on the Grassmann manifold");
      return;
    }
  }
}

Eigen::MatrixXd tangent_project(const ManifoldDescriptor& m, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& v) {
  check_on_manifold(m, x);
  if (v.rows() != x.rows() || v.cols() != x.cols()) throw ShapeError("ambient object has the wrong shape");
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return v;
    case ManifoldKind::Sphere: {
      const Eigen::VectorXd th = x.col(0);
      return v.col(0) - v.col(0).dot(th) * th;
    }
    case ManifoldKind::LpSphere: {
      const Eigen::VectorXd w = signed_power(x.col(0), m.p - 1.0);
      return v.col(0) - (v.col(0).dot(w) / w.squaredNorm()) * w;
    }
    case ManifoldKind::Stiefel: {
      const Eigen::MatrixXd s = 0.5 * (x.transpose() * v + v.transpose() * x);
      return v - x * s;
    }
    case ManifoldKind::Grassmann: {
      const Eigen::MatrixXd s = 0.5 * (v + v.transpose());
      return x * s + s * x - 2.0 * x * s * x;
    }
  }
  return v;
}

Eigen::MatrixXd ambient_gradient(const ManifoldDescriptor& m, const PolyFunction& f,
                                 const Eigen::MatrixXd& x) {
  if (f.nvars() != m.ambient_dim()) throw ShapeError("polynomial nvars != manifold ambient dim");
  if (x.rows() != m.rows() || x.cols() != m.cols()) throw ShapeError("point has the wrong shape");
  return mat(f.gradient(vec(x)), m.rows(), m.cols());
}

Eigen::MatrixXd intrinsic_gradient(const ManifoldDescriptor& m, const PolyFunction& f,
                                   const Eigen::MatrixXd& x) {
  return tangent_project(m, x, ambient_gradient(m, f, x));
}

SymTensor sphere_hessian(const PolyFunction& f, const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  check_on_manifold(ManifoldDescriptor::sphere(n), theta);
  if (f.nvars() != n) throw ShapeError("polynomial nvars != dimension");
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - theta * theta.transpose();
  const Eigen::MatrixXd b =
      f.hessian(theta) - theta.dot(f.gradient(theta)) * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd h = proj * b * proj;
  h = (0.5 * (h + h.transpose())).eval();
  return SymTensor::checked(Tensor::from_matrix(h), 0.0);
}

namespace {

// Sum of c * x^e * |x|^(-m), keyed by (e, m).
using RadialPoly = std::map<std::pair<Exponents, int>, double>;

void add(RadialPoly& r, const Exponents& e, int m, double c) {
  if (c == 0.0) return;
  auto key = std::make_pair(e, m);
  auto it = r.find(key);
  if (it == r.end()) {
    r.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second == 0.0) r.erase(it);
  }
}

// 0-homogeneous extension of the restriction to the sphere.
RadialPoly homogenize(const RadialPoly& g) {
  RadialPoly r;
  for (const auto& [key, c] : g) add(r, key.first, total(key.first), c);
  return r;
}

// d/dx_i (x^e |x|^-m) = e_i x^(e - 1_i) |x|^-m - m x^(e + 1_i) |x|^(-m-2).
RadialPoly differentiate(const RadialPoly& g, int i) {
  RadialPoly r;
  for (const auto& [key, c] : g) {
    const auto& [e, m] = key;
    if (e[i] > 0) {
      Exponents e1 = e;
      e1[i] -= 1;
      add(r, e1, m, c * e[i]);
    }
    if (m != 0) {
      Exponents e2 = e;
      e2[i] += 1;
      add(r, e2, m + 2, -c * m);
    }
  }
  return r;
}

double eval_on_sphere(const RadialPoly& g, const Eigen::VectorXd& theta) {
  double s = 0.0;
  for (const auto& [key, c] : g) {
    double v = c;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      if (key.first[i]) v *= ipow(theta[i], key.first[i]);
    s += v;
  }
  return s;
}

RadialPoly from_poly(const PolyFunction& f) {
  RadialPoly r;
  for (const auto& [e, c] : f.terms()) add(r, e, 0, c);
  return r;
}

}  // namespace

double spherical_partial(const PolyFunction& f, std::span<const int> indices,
                         const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  check_on_manifold(ManifoldDescriptor::sphere(n), theta);
  if (f.nvars() != n) throw ShapeError("polynomial nvars != dimension");
  if (indices.empty()) throw DomainError("need at least one index");
  RadialPoly g = from_poly(f);
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
    if (*it < 0 || *it >= n) throw ShapeError("index out of range");
    g = differentiate(homogenize(g), *it);
  }
  return eval_on_sphere(g, theta);
}

Tensor spherical_partial_tensor(const PolyFunction& f, int j, const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  check_on_manifold(ManifoldDescriptor::sphere(n), theta);
  if (f.nvars() != n) throw ShapeError("polynomial nvars != dimension");
  if (j < 1) throw DomainError("order must be >= 1");
  Tensor t(j, n);
  // Build level by level; level k holds D_{i_{j-k+1} .. i_j} f symbolically.
  std::vector<RadialPoly> level = {from_poly(f)};
  for (int k = 0; k < j; ++k) {
    std::vector<RadialPoly> next;
    next.reserve(level.size() * n);
    for (int i = 0; i < n; ++i)
      for (const auto& g : level) next.push_back(differentiate(homogenize(g), i));
    level = std::move(next);
  }
  // level[i_1 * n^(j-1) + ... ] ordering: outermost index varies slowest.
  for (std::size_t flat = 0; flat < t.size(); ++flat) t[flat] = eval_on_sphere(level[flat], theta);
  return t;
}

Eigen::MatrixXd manifold_curve(const ManifoldDescriptor& m, const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& u, double t) {
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return x + t * u;
    case ManifoldKind::Sphere: {
      const double nu = u.norm();
      if (nu == 0.0) return x;
      return std::cos(t * nu) * x + std::sin(t * nu) * (u / nu);
    }
    case ManifoldKind::LpSphere: {
      const Eigen::VectorXd y = x.col(0) + t * u.col(0);
      return y / lp_norm(y, m.p);
    }
    case ManifoldKind::Stiefel: {
      const Eigen::MatrixXd y = x + t * u;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y.transpose() * y);
      const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
      return y * es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    }
    case ManifoldKind::Grassmann: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x + t * u);
      const Eigen::MatrixXd v = es.eigenvectors().rightCols(m.k);
      return v * v.transpose();
    }
  }
  return x;
}

}  // namespace hoc
