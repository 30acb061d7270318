#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ddpo {

/// Parse failure; `offset` is the byte position in the source string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Runtime evaluation failure (division by zero, non-finite result).
class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Immutable scalar function of time, stored as an expression tree.
///
/// Trees are built from the factory functions below, from arithmetic
/// operators, or by parsing a source string over `t`, literals,
/// + - * / ^, parentheses and sin/cos/exp/sqrt. Differentiation is
/// symbolic, so coefficient derivatives stay noise-free inside stiff
/// integrations. Instances are freely shareable across threads.
class TimeFunction {
 public:
  struct Node;  // expression node; defined in expr.cpp

  TimeFunction();  // constant 0

  static TimeFunction constant(double v);
  static TimeFunction time();                                        // t
  static TimeFunction exponential(double sigma);                     // e^{sigma t}
  static TimeFunction harmonic(double amp, double omega, double phase);  // amp*cos(omega t + phase)
  static TimeFunction modulated(double amp, double lambda, double nu);   // amp*(1 + lambda sin(nu t))

  /// Recursive-descent parse. Throws ParseError with a byte offset on
  /// syntax errors or unknown identifiers.
  static TimeFunction parse(std::string_view src);

  /// Left-closed pieces: piece i applies on [start_i, start_{i+1}).
  /// Evaluation at a breakpoint uses the segment starting there.
  static TimeFunction piecewise(std::vector<std::pair<double, TimeFunction>> pieces);

  static TimeFunction sin(TimeFunction f);
  static TimeFunction cos(TimeFunction f);
  static TimeFunction exp(TimeFunction f);
  static TimeFunction sqrt(TimeFunction f);
  static TimeFunction log(TimeFunction f);
  static TimeFunction pow(TimeFunction base, TimeFunction expo);

  double operator()(double t) const;

  TimeFunction derivative() const;

  bool is_constant() const;
  bool is_zero() const;  // structurally the constant 0

  std::string to_string() const;

  friend TimeFunction operator+(const TimeFunction& l, const TimeFunction& r);
  friend TimeFunction operator-(const TimeFunction& l, const TimeFunction& r);
  friend TimeFunction operator*(const TimeFunction& l, const TimeFunction& r);
  friend TimeFunction operator/(const TimeFunction& l, const TimeFunction& r);
  TimeFunction operator-() const;

 private:
  explicit TimeFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline TimeFunction operator+(const TimeFunction& l, double r) { return l + TimeFunction::constant(r); }
inline TimeFunction operator+(double l, const TimeFunction& r) { return TimeFunction::constant(l) + r; }
inline TimeFunction operator*(double l, const TimeFunction& r) { return TimeFunction::constant(l) * r; }
inline TimeFunction operator*(const TimeFunction& l, double r) { return l * TimeFunction::constant(r); }

}  // namespace ddpo
