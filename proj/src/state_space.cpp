#include "swlyap/state_space.hpp"

#include <algorithm>
#include <string>

#include "swlyap/errors.hpp"

namespace swlyap {

NormSpec NormSpec::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ContractViolation("NormSpec: exponent p must lie in [1, inf), got " +
                            std::to_string(p));
  }
  return NormSpec{p, false};
}

PiecewiseConstantFn::PiecewiseConstantFn(double lo, double hi,
                                         std::vector<double> breaks,
                                         std::vector<double> values)
    : lo_(lo), hi_(hi), breaks_(std::move(breaks)), values_(std::move(values)) {
  if (!std::isfinite(lo_) || std::isnan(hi_) || !(lo_ < hi_)) {
    throw StructuralError("PiecewiseConstantFn: domain must satisfy lo < hi with finite lo");
  }
  if (values_.size() != breaks_.size() + 1) {
    throw StructuralError("PiecewiseConstantFn: need exactly one value per piece (" +
                          std::to_string(breaks_.size() + 1) + " expected, " +
                          std::to_string(values_.size()) + " given)");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] >= lo_ && breaks_[i] <= hi_) || !std::isfinite(breaks_[i])) {
      throw StructuralError("PiecewiseConstantFn: breakpoint " + std::to_string(i) +
                            " lies outside the domain");
    }
    if (i > 0 && breaks_[i] < breaks_[i - 1]) {
      throw StructuralError("PiecewiseConstantFn: breakpoints not sorted at index " +
                            std::to_string(i));
    }
  }
  if (unbounded() && values_.back() != 0.0) {
    throw InvalidStateError(
        "PiecewiseConstantFn: unbounded last piece must carry the value 0");
  }
}

PiecewiseConstantFn PiecewiseConstantFn::zero(double lo, double hi) {
  return PiecewiseConstantFn(lo, hi, {}, {0.0});
}

PiecewiseConstantFn PiecewiseConstantFn::constant(double lo, double hi, double value) {
  return PiecewiseConstantFn(lo, hi, {}, {value});
}

PiecewiseConstantFn PiecewiseConstantFn::indicator(double lo, double hi, double a,
                                                   double b, double value) {
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  if (b < a) std::swap(a, b);
  return canonicalize(PiecewiseConstantFn(lo, hi, {a, b}, {0.0, value, 0.0}));
}

double PiecewiseConstantFn::operator()(double s) const {
  if (!(s >= lo_ && s < hi_)) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

bool PiecewiseConstantFn::is_zero() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0 && piece_lo(i) < piece_hi(i)) return false;
  }
  return true;
}

bool PiecewiseConstantFn::is_canonical() const {
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > lo_ && breaks_[i] < hi_)) return false;
    if (i > 0 && !(breaks_[i] > breaks_[i - 1])) return false;
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == values_[i - 1]) return false;
  }
  return true;
}

namespace {

// Accumulates pieces left to right on [lo, hi], filling gaps with zero.
class PieceBuilder {
 public:
  PieceBuilder(double lo, double hi) : lo_(lo), hi_(hi), cursor_(lo) {}

  void add(double a, double b, double v) {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (!(a < b)) return;
    if (a > cursor_) push(cursor_, a, 0.0);
    push(std::max(a, cursor_), b, v);
  }

  PiecewiseConstantFn finish() {
    if (cursor_ < hi_) push(cursor_, hi_, 0.0);
    if (values_.empty()) values_.push_back(0.0);
    return PiecewiseConstantFn(lo_, hi_, std::move(breaks_), std::move(values_));
  }

 private:
  void push(double a, double b, double v) {
    if (!(a < b)) return;
    if (!values_.empty() && values_.back() == v) {
      cursor_ = b;
      return;
    }
    if (!values_.empty()) breaks_.push_back(a);
    values_.push_back(v);
    cursor_ = b;
  }

  double lo_;
  double hi_;
  double cursor_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace

PiecewiseConstantFn canonicalize(const PiecewiseConstantFn& f) {
  PieceBuilder out(f.lo(), f.hi());
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out.add(f.piece_lo(i), f.piece_hi(i), f.values()[i]);
  }
  return out.finish();
}

double lp_norm_pow(const PiecewiseConstantFn& f, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const double v = f.values()[i];
    if (!std::isfinite(v)) {
      throw InvalidStateError("lp_norm: non-finite value on piece " + std::to_string(i));
    }
    if (v == 0.0) continue;
    const double len = f.piece_hi(i) - f.piece_lo(i);
    const double a = std::abs(v);
    acc += (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p)) * len;
  }
  return acc;
}

double lp_norm(const PiecewiseConstantFn& f, const NormSpec& spec) {
  const double p = spec.euclidean ? 2.0 : spec.p;
  const double acc = lp_norm_pow(f, p);
  if (p == 1.0) return acc;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

PiecewiseConstantFn linear_combine(double a, const PiecewiseConstantFn& f, double b,
                                   const PiecewiseConstantFn& g) {
  if (!f.same_domain(g)) {
    throw StructuralError("linear_combine: operands live on different domains");
  }
  PieceBuilder out(f.lo(), f.hi());
  std::size_t i = 0;
  std::size_t j = 0;
  double start = f.lo();
  while (i < f.piece_count() && j < g.piece_count()) {
    const double end = std::min(f.piece_hi(i), g.piece_hi(j));
    out.add(start, end, a * f.values()[i] + b * g.values()[j]);
    start = end;
    if (f.piece_hi(i) == end) ++i;
    if (g.piece_hi(j) == end) ++j;
  }
  return out.finish();
}

PiecewiseConstantFn scale(double c, const PiecewiseConstantFn& f) {
  PieceBuilder out(f.lo(), f.hi());
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out.add(f.piece_lo(i), f.piece_hi(i), c * f.values()[i]);
  }
  return out.finish();
}

PiecewiseConstantFn translate(const PiecewiseConstantFn& f, double offset, double lo,
                              double hi) {
  PieceBuilder out(lo, hi);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out.add(f.piece_lo(i) - offset, f.piece_hi(i) - offset, f.values()[i]);
  }
  return out.finish();
}

PiecewiseConstantFn scale_window(const PiecewiseConstantFn& f, double a, double b,
                                 double factor) {
  PieceBuilder out(f.lo(), f.hi());
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const double p0 = f.piece_lo(i);
    const double p1 = f.piece_hi(i);
    const double v = f.values()[i];
    const double w0 = std::clamp(a, p0, p1);
    const double w1 = std::clamp(b, p0, p1);
    if (!(w0 < w1)) {
      out.add(p0, p1, v);
      continue;
    }
    out.add(p0, w0, v);
    out.add(w0, w1, factor * v);
    out.add(w1, p1, v);
  }
  return out.finish();
}

double euclidean_norm(std::span<const double> coords) {
  double acc = 0.0;
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvalidStateError("euclidean_norm: non-finite coordinate");
    acc += c * c;
  }
  return std::sqrt(acc);
}

}  // namespace swlyap
