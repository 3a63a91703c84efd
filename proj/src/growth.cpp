#include "regulus/growth.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "regulus/error.hpp"

namespace regulus {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class DescriptorParser {
 public:
  explicit DescriptorParser(const std::string& s) : s_(s) {}

  GrowthFunction parse() {
    GrowthFunction g = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return g;
  }

 private:
  GrowthFunction expr() {
    std::string name = ident();
    expect('(');
    if (name == "compose" || name == "max") {
      GrowthFunction a = expr();
      expect(',');
      GrowthFunction b = expr();
      expect(')');
      return name == "compose" ? GrowthFunction::compose(a, b) : GrowthFunction::max_of(a, b);
    }
    std::vector<double> args{number()};
    while (peek() == ',') {
      ++pos_;
      args.push_back(number());
    }
    expect(')');
    if (name == "affine" && args.size() == 2) return GrowthFunction::affine(args[0], args[1]);
    if ((name == "exp" || name == "exponential") && args.size() == 1)
      return GrowthFunction::exponential(args[0]);
    if (name == "tower" && args.size() == 1) {
      if (args[0] < 0 || args[0] != std::floor(args[0])) fail("tower height must be a natural");
      return GrowthFunction::tower(static_cast<int>(args[0]));
    }
    fail("unknown growth function '" + name + "'");
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a name");
    return s_.substr(start, pos_ - start);
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw ConfigError("bad growth descriptor '" + s_ + "': " + why);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

GrowthFunction::GrowthFunction() : GrowthFunction("affine(1,1)", [](double x) { return x + 1; }) {}

GrowthFunction::GrowthFunction(std::string descriptor, Evaluator f)
    : descriptor_(std::move(descriptor)), f_(std::move(f)), memo_(std::make_shared<Memo>()) {
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 24.0,
                   32.0, 64.0})
    (*this)(x);
}

double GrowthFunction::operator()(double x) const {
  if (!(x >= 0)) throw ConfigError("growth function evaluated at a negative argument");
  std::lock_guard lock(memo_->mutex);
  auto& values = memo_->values;
  if (auto it = values.find(x); it != values.end()) return it->second;
  double y = f_(x);
  if (std::isnan(y) || y < 1 + x)
    throw ConfigError(descriptor_ + " violates F(x) >= 1 + x at x = " + num(x));
  auto next = values.upper_bound(x);
  if (next != values.end() && next->second < y)
    throw ConfigError(descriptor_ + " is not increasing near x = " + num(x));
  if (next != values.begin() && std::prev(next)->second > y)
    throw ConfigError(descriptor_ + " is not increasing near x = " + num(x));
  values.emplace(x, y);
  return y;
}

GrowthFunction GrowthFunction::affine(double a, double b) {
  if (a < 1 || b < 1) throw ConfigError("affine growth needs a >= 1 and b >= 1");
  return GrowthFunction("affine(" + num(a) + "," + num(b) + ")",
                        [a, b](double x) { return a * x + b; });
}

GrowthFunction GrowthFunction::exponential(double base) {
  if (base < 1) throw ConfigError("exponential growth needs base >= 1");
  return GrowthFunction("exp(" + num(base) + ")",
                        [base](double x) { return std::pow(base, x) + x + 1; });
}

GrowthFunction GrowthFunction::tower(int height) {
  if (height < 0) throw ConfigError("tower height must be nonnegative");
  return GrowthFunction("tower(" + std::to_string(height) + ")", [height](double x) {
    double t = x;
    for (int i = 0; i < height && std::isfinite(t); ++i) t = std::exp2(t);
    return t + x + 1;
  });
}

GrowthFunction GrowthFunction::compose(const GrowthFunction& outer, const GrowthFunction& inner) {
  return GrowthFunction("compose(" + outer.descriptor() + "," + inner.descriptor() + ")",
                        [outer, inner](double x) {
                          double y = inner(x);
                          return std::isfinite(y) ? outer(y) : y;
                        });
}

GrowthFunction GrowthFunction::max_of(const GrowthFunction& a, const GrowthFunction& b) {
  return GrowthFunction("max(" + a.descriptor() + "," + b.descriptor() + ")",
                        [a, b](double x) { return std::max(a(x), b(x)); });
}

GrowthFunction GrowthFunction::bumped(const GrowthFunction& base, double from,
                                      double floor_value) {
  return GrowthFunction(
      "bump(" + base.descriptor() + "," + num(from) + "," + num(floor_value) + ")",
      [base, from, floor_value](double x) {
        double y = base(x);
        return x >= from ? std::max(y, floor_value + (x - from)) : y;
      });
}

GrowthFunction GrowthFunction::parse(const std::string& descriptor) {
  return DescriptorParser(descriptor).parse();
}

}  // namespace regulus
