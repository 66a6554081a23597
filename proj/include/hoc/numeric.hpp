// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace hoc {

// Fixed-order pairwise summation. Same input order gives the same bits.
double pairwise_sum(std::span<const double> xs);

// Shortest decimal representation that round-trips.
std::string format_double(double x);

// splitmix64 finalizer; used to derive per-chunk seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for chunk `chunk` of a stream started from `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t chunk);

// sqrt(e) / (2 (sqrt(e) - 1)), about 1.2707.
double kappa();

}  // namespace hoc
