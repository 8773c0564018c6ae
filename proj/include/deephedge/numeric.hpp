#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace dhedge {

// Missing observations are carried as quiet NaN throughout the panel.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double x) { return std::isnan(x); }

// 0 for NaN/inf, x otherwise.
inline double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

inline constexpr double kTradingDaysPerYear = 252.0;

using Rng = std::mt19937_64;

// Independent stream per (seed, task): same result whether tasks run serially or in parallel.
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

// Shortest round-trip representation; empty string for missing.
std::string format_double(double x);

// Empty cell -> kMissing. Throws ValidationError on garbage.
double parse_double(std::string_view cell);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ULL);
std::string hex64(std::uint64_t v);

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

// Linear-interpolated quantile of an ascending-sorted sample, q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace dhedge
