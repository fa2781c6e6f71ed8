#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace notrade {

/// Uniform node vector on [-extent, extent]; `count` odd keeps 0 a node.
std::vector<double> uniform_grid(double extent, std::size_t count);

/// A real function tabulated on strictly increasing nodes.
///
/// Values between nodes come from a piecewise-cubic Hermite interpolant.
/// MonotoneDecreasing data gets Fritsch-Butland slopes so it stays monotone
/// and can be inverted; General data gets unlimited three-point slopes, which
/// keep interior extrema accurate. Outside the nodes the function continues
/// linearly with the end slope.
class GridFunction {
 public:
  enum class Shape { General, MonotoneDecreasing };

  GridFunction(std::vector<double> nodes, std::vector<double> values,
               Shape shape = Shape::General);

  template <class F>
  static GridFunction tabulate(std::span<const double> nodes, F&& fn,
                               Shape shape = Shape::General) {
    std::vector<double> values;
    values.reserve(nodes.size());
    for (double x : nodes) values.push_back(fn(x));
    return GridFunction({nodes.begin(), nodes.end()}, std::move(values), shape);
  }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> slopes() const noexcept { return slopes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double lo() const noexcept { return nodes_.front(); }
  double hi() const noexcept { return nodes_.back(); }
  Shape shape() const noexcept { return shape_; }
  bool monotone_decreasing() const noexcept {
    return shape_ == Shape::MonotoneDecreasing;
  }

  double operator()(double x) const noexcept;
  double derivative(double x) const noexcept;

  /// The x with g(x) = target. Requires the MonotoneDecreasing shape
  /// (throws NotMonotone otherwise); targets beyond the tabulated range are
  /// inverted along the linear continuation.
  double invert(double target) const;

  /// Index i of the cell [nodes[i], nodes[i+1]] containing x, clamped to the
  /// first/last cell.
  std::size_t cell(double x) const noexcept;

  /// Same nodes, values mapped through `fn`, shape reset to General.
  template <class F>
  GridFunction map(F&& fn) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(nodes_[i], values_[i]);
    return GridFunction(nodes_, std::move(v));
  }

 private:
  double eval_cell(std::size_t i, double x) const noexcept;

  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Shape shape_;
  bool uniform_ = false;
  double step_ = 0.0;
};

/// Two-column CSV: "node,value" header, 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& g);
GridFunction read_csv(std::istream& in,
                      GridFunction::Shape shape = GridFunction::Shape::General);

}  // namespace notrade
