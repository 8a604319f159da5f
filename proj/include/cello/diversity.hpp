#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace cello {

using BigInt = boost::multiprecision::cpp_int;

/// Exact nonnegative rational, kept reduced.
struct Rational {
  BigInt num = 0;
  BigInt den = 1;

  void reduce() {
    if (den == 0) fail(ErrorKind::EmptyInput, "rational with zero denominator");
    BigInt g = boost::multiprecision::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return num.convert_to<double>() / den.convert_to<double>(); }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Moving-average type-token ratio: mean TTR over every contiguous window.
/// Sequences shorter than the window fall back to plain TTR.
inline double mattr(const std::vector<std::string>& tokens, size_t window) {
  if (tokens.empty()) fail(ErrorKind::EmptyInput, "mattr over empty token list");
  if (window < 1) fail(ErrorKind::ConfigError, "mattr window must be at least 1");
  const size_t n = tokens.size();
  if (n <= window) {
    std::set<std::string> types(tokens.begin(), tokens.end());
    return static_cast<double>(types.size()) / static_cast<double>(n);
  }
  std::map<std::string, size_t> counts;
  for (size_t i = 0; i < window; ++i) ++counts[tokens[i]];
  double sum = static_cast<double>(counts.size()) / static_cast<double>(window);
  for (size_t i = window; i < n; ++i) {
    auto out = counts.find(tokens[i - window]);
    if (--out->second == 0) counts.erase(out);
    ++counts[tokens[i]];
    sum += static_cast<double>(counts.size()) / static_cast<double>(window);
  }
  return sum / static_cast<double>(n - window + 1);
}

namespace detail {

/// One directional factor count: close a factor whenever the running TTR
/// falls below the threshold; the tail contributes a proportional partial
/// factor (1 - TTR) / (1 - threshold).
inline double mtld_factors(const std::vector<std::string>& tokens, double threshold) {
  double factors = 0.0;
  std::set<std::string> types;
  size_t len = 0;
  double ttr = 1.0;
  for (const auto& tok : tokens) {
    ++len;
    types.insert(tok);
    ttr = static_cast<double>(types.size()) / static_cast<double>(len);
    if (ttr < threshold) {
      factors += 1.0;
      types.clear();
      len = 0;
      ttr = 1.0;
    }
  }
  if (len > 0) factors += (1.0 - ttr) / (1.0 - threshold);
  return factors;
}

}  // namespace detail

/// Measure of textual lexical diversity: token count over the mean factor
/// count of a forward and a backward pass. A pass that closes no factor at
/// all counts as one whole factor (the text is a single diverse run), which
/// caps the statistic at the token count.
inline double mtld(const std::vector<std::string>& tokens, double threshold = 0.72) {
  if (tokens.empty()) fail(ErrorKind::EmptyInput, "mtld over empty token list");
  if (threshold <= 0.0 || threshold >= 1.0)
    fail(ErrorKind::ConfigError, "mtld threshold must lie strictly between 0 and 1");
  double forward = detail::mtld_factors(tokens, threshold);
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  double backward = detail::mtld_factors(reversed, threshold);
  if (forward == 0.0) forward = 1.0;
  if (backward == 0.0) backward = 1.0;
  double mean_factors = (forward + backward) / 2.0;
  return static_cast<double>(tokens.size()) / mean_factors;
}

namespace detail {

inline BigInt binomial(size_t n, size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (size_t i = 1; i <= k; ++i) {
    result *= static_cast<unsigned long long>(n - k + i);
    result /= static_cast<unsigned long long>(i);
  }
  return result;
}

}  // namespace detail

/// Hypergeometric distribution diversity as an exact rational: the expected
/// per-draw contribution of each type to a sample of the given size,
///   HDD = sum_t P(type t present in sample) / sample_size
/// with P(present) = 1 - C(N - n_t, s) / C(N, s). Order-independent.
inline Rational hdd_exact(const std::vector<std::string>& tokens, size_t sample_size) {
  if (tokens.empty()) fail(ErrorKind::EmptyInput, "hdd over empty token list");
  if (sample_size < 1) fail(ErrorKind::ConfigError, "hdd sample size must be at least 1");
  const size_t n = tokens.size();
  if (sample_size > n)
    fail(ErrorKind::SampleTooLarge, "hdd sample size " + std::to_string(sample_size) +
                                        " exceeds token count " + std::to_string(n));
  std::map<std::string, size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  BigInt total = detail::binomial(n, sample_size);
  BigInt numerator = 0;
  for (const auto& [type, c] : counts) {
    (void)type;
    numerator += total - detail::binomial(n - c, sample_size);
  }
  Rational r;
  r.num = numerator;
  r.den = total * static_cast<unsigned long long>(sample_size);
  r.reduce();
  return r;
}

inline double hdd(const std::vector<std::string>& tokens, size_t sample_size = 42) {
  return hdd_exact(tokens, sample_size).value();
}

}  // namespace cello
