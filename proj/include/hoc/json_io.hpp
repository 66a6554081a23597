// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hoc/bounds.hpp"
#include "hoc/calculus.hpp"
#include "hoc/discrete.hpp"
#include "hoc/finite_space.hpp"
#include "hoc/samplers.hpp"
#include "hoc/tensor.hpp"
#include "hoc/verify.hpp"

namespace hoc {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// Throws ConfigError if `obj` is not an object or has keys outside `allowed`.
void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where);

Json to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);

Json to_json(const PolyFunction& f);
PolyFunction poly_from_json(const Json& j);

Json to_json(const FiniteProductSpace& s);
FiniteProductSpace space_from_json(const Json& j);
// {n?, edges: [[i, j, coupling], ...], fields?, beta?}
IsingSpec ising_from_json(const Json& j);

Json to_json(const Setting& s);
// Either {"tag": <catalog tag>, n?, k?, p?, sigma2?, sigma_q?, d?, gamma?,
// positive_part_only?} or explicit {p, r0, L, sigma, d, q?, gamma?, tag?,
// positive_part_only?}.
Setting setting_from_json(const Json& j);

Json to_json(const LevelCoefficients& k);
Json to_json(const DependenceProfile& p);
Json to_json(const VerificationReport& r);
Json to_json(const MomentReport& r);

// Columns t, empirical, ucb, bound, pass.
void write_csv(const VerificationReport& r, std::ostream& out);
// Columns r, moment, std_error, bound, pass.
void write_csv(const MomentReport& r, std::ostream& out);

MeasureDescriptor measure_from_json(const Json& j);

}  // namespace hoc
