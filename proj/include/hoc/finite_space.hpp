// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hoc {

// Product of finite alphabets with a full joint probability table. The
// table is flattened row-major by coordinate order: the last coordinate
// varies fastest.
class FiniteProductSpace {
 public:
  // Largest table the exhaustive routines accept.
  static constexpr std::size_t kMaxConfigs = std::size_t{1} << 22;

  FiniteProductSpace() = default;
  FiniteProductSpace(std::vector<std::vector<double>> alphabets, std::vector<double> joint,
                     bool is_product = false);

  static FiniteProductSpace product(std::vector<std::vector<double>> alphabets,
                                    const std::vector<std::vector<double>>& marginals);
  static FiniteProductSpace uniform(std::vector<std::vector<double>> alphabets);
  // Uniform on {-1, +1}^n.
  static FiniteProductSpace rademacher(int n);

  int n() const { return static_cast<int>(alphabets_.size()); }
  std::size_t size() const { return joint_.size(); }
  bool is_product() const { return is_product_; }
  const std::vector<std::vector<double>>& alphabets() const { return alphabets_; }
  const std::vector<double>& joint() const { return joint_; }
  int alphabet_size(int i) const { return static_cast<int>(alphabets_[i].size()); }

  double probability(std::size_t config) const { return joint_[config]; }
  int symbol(std::size_t config, int i) const;
  double label(std::size_t config, int i) const { return alphabets_[i][symbol(config, i)]; }
  std::vector<double> labels(std::size_t config) const;
  std::vector<int> symbols(std::size_t config) const;
  std::size_t encode(std::span<const int> symbols) const;
  // Configuration with coordinate i set to symbol a.
  std::size_t replace(std::size_t config, int i, int a) const;

  // μ(x_i = . | x_{i^c}) as a vector over A_i. Throws DomainError when the
  // section has probability zero.
  std::vector<double> conditional(std::size_t config, int i) const;
  double section_mass(std::size_t config, int i) const;

 private:
  std::vector<std::vector<double>> alphabets_;
  std::vector<double> joint_;
  std::vector<std::size_t> strides_;
  bool is_product_ = false;
};

// Function on a finite space stored as one value per configuration.
using ValueTable = std::vector<double>;

// Tabulate f over all configurations (f receives coordinate labels).
ValueTable tabulate(const FiniteProductSpace& space,
                    const std::function<double(std::span<const double>)>& f);

}  // namespace hoc
