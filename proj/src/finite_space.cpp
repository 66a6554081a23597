// SPDX-License-Identifier: Apache-2.0
#include "hoc/finite_space.hpp"

#include <cmath>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

FiniteProductSpace::FiniteProductSpace(std::vector<std::vector<double>> alphabets,
                                       std::vector<double> joint, bool is_product)
    : alphabets_(std::move(alphabets)), joint_(std::move(joint)), is_product_(is_product) {
  if (alphabets_.empty()) throw DomainError("space needs at least one coordinate");
  std::size_t total = 1;
  for (const auto& a : alphabets_) {
    if (a.empty()) throw DomainError("empty alphabet");
    if (total > kMaxConfigs / a.size()) throw CostGuardError("configuration space exceeds 2^22");
    total *= a.size();
  }
  if (joint_.size() != total) throw ShapeError("joint table size != product of alphabet sizes");
  for (double p : joint_)
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("probabilities must be finite and nonnegative");
  if (std::abs(pairwise_sum(joint_) - 1.0) > 1e-12) throw DomainError("joint table must sum to 1");
  strides_.assign(alphabets_.size(), 1);
  for (int i = n() - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * alphabets_[i + 1].size();
}

FiniteProductSpace FiniteProductSpace::product(std::vector<std::vector<double>> alphabets,
                                               const std::vector<std::vector<double>>& marginals) {
  if (marginals.size() != alphabets.size()) throw ShapeError("one marginal per coordinate");
  std::vector<double> joint = {1.0};
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    if (marginals[i].size() != alphabets[i].size()) throw ShapeError("marginal size != alphabet size");
    std::vector<double> next;
    next.reserve(joint.size() * marginals[i].size());
    for (double p : joint)
      for (double q : marginals[i]) next.push_back(p * q);
    joint = std::move(next);
    if (joint.size() > kMaxConfigs) throw CostGuardError("configuration space exceeds 2^22");
  }
  // Renormalize rounding drift from the products.
  const double s = pairwise_sum(joint);
  for (double& p : joint) p /= s;
  return FiniteProductSpace(std::move(alphabets), std::move(joint), true);
}

FiniteProductSpace FiniteProductSpace::uniform(std::vector<std::vector<double>> alphabets) {
  std::vector<std::vector<double>> marg;
  for (const auto& a : alphabets) marg.emplace_back(a.size(), 1.0 / static_cast<double>(a.size()));
  return product(std::move(alphabets), marg);
}

FiniteProductSpace FiniteProductSpace::rademacher(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  return uniform(std::vector<std::vector<double>>(n, {-1.0, 1.0}));
}

int FiniteProductSpace::symbol(std::size_t config, int i) const {
  return static_cast<int>((config / strides_[i]) % alphabets_[i].size());
}

std::vector<double> FiniteProductSpace::labels(std::size_t config) const {
  std::vector<double> x(n());
  for (int i = 0; i < n(); ++i) x[i] = label(config, i);
  return x;
}

std::vector<int> FiniteProductSpace::symbols(std::size_t config) const {
  std::vector<int> s(n());
  for (int i = 0; i < n(); ++i) s[i] = symbol(config, i);
  return s;
}

std::size_t FiniteProductSpace::encode(std::span<const int> symbols) const {
  if (static_cast<int>(symbols.size()) != n()) throw ShapeError("symbol vector length != n");
  std::size_t c = 0;
  for (int i = 0; i < n(); ++i) {
    if (symbols[i] < 0 || symbols[i] >= alphabet_size(i)) throw ShapeError("symbol out of range");
    c += static_cast<std::size_t>(symbols[i]) * strides_[i];
  }
  return c;
}

std::size_t FiniteProductSpace::replace(std::size_t config, int i, int a) const {
  const int cur = symbol(config, i);
  return config - static_cast<std::size_t>(cur) * strides_[i] + static_cast<std::size_t>(a) * strides_[i];
}

double FiniteProductSpace::section_mass(std::size_t config, int i) const {
  double s = 0.0;
  for (int a = 0; a < alphabet_size(i); ++a) s += joint_[replace(config, i, a)];
  return s;
}

std::vector<double> FiniteProductSpace::conditional(std::size_t config, int i) const {
  const double mass = section_mass(config, i);
  if (!(mass > 0.0)) throw DomainError("conditioning on a zero-probability section");
  std::vector<double> c(alphabet_size(i));
  for (int a = 0; a < alphabet_size(i); ++a) c[a] = joint_[replace(config, i, a)] / mass;
  return c;
}

ValueTable tabulate(const FiniteProductSpace& space,
                    const std::function<double(std::span<const double>)>& f) {
  ValueTable v(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) {
    const auto x = space.labels(c);
    v[c] = f(x);
  }
  return v;
}

}  // namespace hoc
