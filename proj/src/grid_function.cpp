#include "notrade/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "notrade/csv.hpp"
#include "notrade/errors.hpp"

namespace notrade {

std::vector<double> uniform_grid(double extent, std::size_t count) {
  if (count < 2 || !(extent > 0.0))
    throw InvalidParams("uniform_grid needs extent > 0 and at least 2 nodes");
  std::vector<double> x(count);
  const double step = 2.0 * extent / static_cast<double>(count - 1);
  const auto mid = static_cast<double>(count - 1) / 2.0;
  // symmetric construction: x[i] == -x[n-1-i] bit for bit
  for (std::size_t i = 0; i < count; ++i) x[i] = (static_cast<double>(i) - mid) * step;
  return x;
}

namespace {

// Fritsch-Butland interior slopes with the three-point end rule; the same
// scheme as the common PCHIP implementations.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return m;
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double e = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(e) != std::signbit(d0) || d0 == 0.0) return 0.0;
    if (std::signbit(d0) != std::signbit(d1) && std::abs(e) > 3.0 * std::abs(d0))
      return 3.0 * d0;
    return e;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

// Three-point parabolic slopes, no limiting. Used for data with interior
// extrema, where the monotone limiter would flatten the turning point.
std::vector<double> parabolic_slopes(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n);
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return m;
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t k = 1; k + 1 < n; ++k)
    m[k] = (h[k] * d[k - 1] + h[k - 1] * d[k]) / (h[k - 1] + h[k]);
  m[0] = ((2.0 * h[0] + h[1]) * d[0] - h[0] * d[1]) / (h[0] + h[1]);
  m[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * d[n - 2] - h[n - 2] * d[n - 3]) /
             (h[n - 2] + h[n - 3]);
  return m;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values,
                           Shape shape)
    : nodes_(std::move(nodes)), values_(std::move(values)), shape_(shape) {
  if (nodes_.size() != values_.size())
    throw InvalidParams("GridFunction: nodes and values differ in length");
  if (nodes_.size() < 2) throw InvalidParams("GridFunction: need at least 2 nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
      throw NonFiniteInput("GridFunction: non-finite entry at index " +
                           std::to_string(i));
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw InvalidParams("GridFunction: nodes must be strictly increasing");
    if (shape_ == Shape::MonotoneDecreasing && i > 0 && !(values_[i] < values_[i - 1]))
      throw NotMonotone("GridFunction: values not strictly decreasing at node " +
                        std::to_string(i));
  }
  slopes_ = shape_ == Shape::MonotoneDecreasing ? pchip_slopes(nodes_, values_)
                                                : parabolic_slopes(nodes_, values_);

  step_ = (hi() - lo()) / static_cast<double>(size() - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < size() && uniform_; ++i)
    uniform_ = std::abs((nodes_[i] - nodes_[i - 1]) - step_) <= 1e-12 * (1.0 + step_);
}

std::size_t GridFunction::cell(double x) const noexcept {
  const std::size_t last = size() - 2;
  if (!(x > lo())) return 0;
  if (x >= hi()) return last;
  std::size_t i;
  if (uniform_) {
    i = std::min(static_cast<std::size_t>((x - lo()) / step_), last);
    // guard against rounding in the division
    if (x < nodes_[i] && i > 0) --i;
    else if (i < last && x >= nodes_[i + 1]) ++i;
  } else {
    i = static_cast<std::size_t>(std::upper_bound(nodes_.begin(), nodes_.end(), x) -
                                 nodes_.begin()) - 1;
    i = std::min(i, last);
  }
  return i;
}

double GridFunction::eval_cell(std::size_t i, double x) const noexcept {
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (x - nodes_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double GridFunction::operator()(double x) const noexcept {
  if (x <= lo()) return values_.front() + slopes_.front() * (x - lo());
  if (x >= hi()) return values_.back() + slopes_.back() * (x - hi());
  return eval_cell(cell(x), x);
}

double GridFunction::derivative(double x) const noexcept {
  if (x <= lo()) return slopes_.front();
  if (x >= hi()) return slopes_.back();
  const std::size_t i = cell(x);
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (x - nodes_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * values_[i] + (3 * t2 - 4 * t + 1) * h * slopes_[i] +
          (-6 * t2 + 6 * t) * values_[i + 1] + (3 * t2 - 2 * t) * h * slopes_[i + 1]) /
         h;
}

double GridFunction::invert(double target) const {
  if (shape_ != Shape::MonotoneDecreasing)
    throw NotMonotone("invert requires a monotone decreasing GridFunction");
  if (std::isnan(target)) throw NonFiniteInput("invert: NaN target");

  auto linear_end = [](double x0, double v0, double slope, double fallback, double t) {
    const double s = slope < 0.0 ? slope : fallback;
    return x0 + (t - v0) / s;
  };
  const std::size_t n = size();
  if (target >= values_.front()) {
    if (target == values_.front()) return lo();
    const double secant = (values_[1] - values_[0]) / (nodes_[1] - nodes_[0]);
    return linear_end(lo(), values_.front(), slopes_.front(), secant, target);
  }
  if (target <= values_.back()) {
    if (target == values_.back()) return hi();
    const double secant = (values_[n - 1] - values_[n - 2]) / (nodes_[n - 1] - nodes_[n - 2]);
    return linear_end(hi(), values_.back(), slopes_.back(), secant, target);
  }

  // first index whose value is <= target; values are decreasing
  auto it = std::lower_bound(values_.begin(), values_.end(), target,
                             [](double v, double t) { return v > t; });
  const auto j = static_cast<std::size_t>(it - values_.begin());
  if (values_[j] == target) return nodes_[j];
  const std::size_t i = j - 1;  // values_[i] > target > values_[i+1]

  // Safeguarded Newton on the cell cubic, which is monotone on [x_i, x_{i+1}].
  double a = nodes_[i], b = nodes_[i + 1];
  double x = a + (b - a) * (values_[i] - target) / (values_[i] - values_[i + 1]);
  for (int iter = 0; iter < 100; ++iter) {
    const double r = eval_cell(i, x) - target;
    if (r == 0.0) return x;
    if (r > 0.0) a = x; else b = x;
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = (x - nodes_[i]) / h;
    const double t2 = t * t;
    const double d = ((6 * t2 - 6 * t) * values_[i] + (3 * t2 - 4 * t + 1) * h * slopes_[i] +
                      (-6 * t2 + 6 * t) * values_[i + 1] +
                      (3 * t2 - 2 * t) * h * slopes_[i + 1]) / h;
    double next = d < 0.0 ? x - r / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x)) || b - a <= 1e-15 * (1.0 + std::abs(x)))
      return next;
    x = next;
  }
  return x;
}

void write_csv(std::ostream& out, const GridFunction& g) {
  out << "node,value\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << format_real(g.nodes()[i]) << ',' << format_real(g.values()[i]) << '\n';
}

GridFunction read_csv(std::istream& in, GridFunction::Shape shape) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParams("read_csv: missing header");
  std::vector<double> x, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InvalidParams("read_csv: line " + std::to_string(lineno) + ": expected two columns");
    try {
      x.push_back(parse_real(std::string_view(line).substr(0, comma)));
      v.push_back(parse_real(std::string_view(line).substr(comma + 1)));
    } catch (const std::invalid_argument& e) {
      throw InvalidParams("read_csv: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return GridFunction(std::move(x), std::move(v), shape);
}

}  // namespace notrade
