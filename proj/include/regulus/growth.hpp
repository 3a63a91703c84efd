#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace regulus {

/// An increasing F on the nonnegative reals with F(x) >= 1 + x.
///
/// Every evaluation is memoized and checked against both invariants; a
/// violation throws ConfigError. Copies share the memo table.
class GrowthFunction {
 public:
  using Evaluator = std::function<double(double)>;

  /// x + 1.
  GrowthFunction();
  /// Probes the invariants on a fixed grid before returning.
  GrowthFunction(std::string descriptor, Evaluator f);

  /// a*x + b (requires a >= 1, b >= 1).
  static GrowthFunction affine(double a, double b);
  /// base^x + x + 1.
  static GrowthFunction exponential(double base);
  /// A tower of `height` twos topped by x, plus x + 1.
  static GrowthFunction tower(int height);
  /// outer(inner(x)).
  static GrowthFunction compose(const GrowthFunction& outer, const GrowthFunction& inner);
  /// max(a(x), b(x)).
  static GrowthFunction max_of(const GrowthFunction& a, const GrowthFunction& b);
  /// max(base(x), floor_value + (x - from)) for x >= from, base(x) below `from`.
  static GrowthFunction bumped(const GrowthFunction& base, double from, double floor_value);

  /// Parses affine(a,b), exp(b), tower(h), compose(F,G), max(F,G).
  static GrowthFunction parse(const std::string& descriptor);

  double operator()(double x) const;
  const std::string& descriptor() const { return descriptor_; }

 private:
  struct Memo {
    std::mutex mutex;
    std::map<double, double> values;
  };

  std::string descriptor_;
  Evaluator f_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace regulus
