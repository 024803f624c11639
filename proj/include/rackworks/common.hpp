#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rackworks {

/// Malformed input: wrong shape, out-of-range entry, unparsable file.
/// Distinct from an axiom failure, which is reported, not thrown.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A construction hypothesis does not hold (augmentation identity,
/// representation law, free action, ...). Carries the offending witness.
class HypothesisError : public std::runtime_error {
public:
  HypothesisError(std::string rule, std::vector<long> witness)
      : std::runtime_error(format(rule, witness)), rule_(std::move(rule)),
        witness_(std::move(witness)) {}

  const std::string &rule() const { return rule_; }
  const std::vector<long> &witness() const { return witness_; }

private:
  static std::string format(const std::string &rule,
                            const std::vector<long> &w) {
    std::string s = rule + " violated at (";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i)
        s += ",";
      s += std::to_string(w[i]);
    }
    return s + ")";
  }

  std::string rule_;
  std::vector<long> witness_;
};

/// Integrator or finite-difference failure in the numeric layer.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One failing axiom family with its lexicographically first witness.
struct Violation {
  std::string rule;
  std::vector<long> witness;

  friend bool operator==(const Violation &, const Violation &) = default;
};

struct CheckReport {
  bool valid = true;
  std::vector<Violation> violations;

  bool has(const std::string &rule) const {
    for (const auto &v : violations)
      if (v.rule == rule)
        return true;
    return false;
  }

  /// Records the first witness per rule; later witnesses are dropped.
  void fail(const std::string &rule, std::vector<long> witness) {
    valid = false;
    if (!has(rule))
      violations.push_back({rule, std::move(witness)});
  }
};

/// Seedable generator with a stated algorithm: std::mt19937_64 (fixed by the
/// standard) with doubles taken from the top 53 bits of each word, so runs
/// are bit-reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  std::uint64_t seed() const { return seed_; }
  static constexpr const char *algorithm() { return "mt19937_64/top53"; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace rackworks
