#include "swlyap/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swlyap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string joined_message(const std::vector<FieldError>& errors) {
  std::string msg = "schema violation";
  for (const auto& e : errors) msg += "\n  " + e.str();
  return msg;
}

const Json* member(const Json& j, const char* key, const std::string& path, Issues& out,
                   bool required) {
  if (!j.is_object()) {
    out.add(path, "expected an object");
    return nullptr;
  }
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) out.add(join_path(path, key), "required");
    return nullptr;
  }
  return &*it;
}

std::optional<double> number(const Json& j, const std::string& path, Issues& out) {
  if (!j.is_number()) {
    out.add(path, "expected a number");
    return std::nullopt;
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    out.add(path, "must be finite");
    return std::nullopt;
  }
  return v;
}

std::optional<double> number_field(const Json& j, const char* key, const std::string& path,
                                   Issues& out, bool required = true) {
  const Json* m = member(j, key, path, out, required);
  if (!m) return std::nullopt;
  return number(*m, join_path(path, key), out);
}

std::optional<std::size_t> index_value(const Json& j, const std::string& path, Issues& out) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    out.add(path, "expected a non-negative integer");
    return std::nullopt;
  }
  return j.get<std::size_t>();
}

std::optional<std::string> string_field(const Json& j, const char* key, const std::string& path,
                                        Issues& out, bool required = true) {
  const Json* m = member(j, key, path, out, required);
  if (!m) return std::nullopt;
  if (!m->is_string()) {
    out.add(join_path(path, key), "expected a string");
    return std::nullopt;
  }
  return m->get<std::string>();
}

std::optional<bool> bool_field(const Json& j, const char* key, const std::string& path,
                               Issues& out) {
  const Json* m = member(j, key, path, out, true);
  if (!m) return std::nullopt;
  if (!m->is_boolean()) {
    out.add(join_path(path, key), "expected a boolean");
    return std::nullopt;
  }
  return m->get<bool>();
}

std::optional<std::vector<double>> number_array(const Json& j, const std::string& path,
                                                Issues& out) {
  if (!j.is_array()) {
    out.add(path, "expected an array of numbers");
    return std::nullopt;
  }
  std::vector<double> v;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto x = number(j[i], index_path(path, i), out);
    if (x) {
      v.push_back(*x);
    } else {
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return v;
}

/// Runs a library constructor, turning its exception into a schema issue.
template <class F>
auto guarded(const std::string& path, Issues& out, F&& make)
    -> std::optional<decltype(make())> {
  try {
    return make();
  } catch (const Error& e) {
    out.add(path, e.what());
    return std::nullopt;
  }
}

template <class T, class P>
T parse_or_throw(const Json& j, P parse) {
  Issues issues;
  auto v = parse(j, std::string(), issues);
  if (!issues.empty() || !v) throw SchemaError(issues.list());
  return std::move(*v);
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

SchemaError::SchemaError(std::vector<FieldError> errors)
    : Error(joined_message(errors)), errors_(std::move(errors)) {}

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::optional<PiecewiseConstantFn> parse_pcf(const Json& j, const std::string& path,
                                             Issues& out) {
  const auto before = out.list().size();
  const Json* dom = member(j, "domain", path, out, true);
  std::optional<double> lo, hi;
  if (dom) {
    const auto dpath = join_path(path, "domain");
    if (!dom->is_array() || dom->size() != 2) {
      out.add(dpath, "expected [lo, hi]");
    } else {
      lo = number((*dom)[0], index_path(dpath, 0), out);
      if ((*dom)[1].is_null()) {
        hi = std::numeric_limits<double>::infinity();
      } else {
        hi = number((*dom)[1], index_path(dpath, 1), out);
      }
    }
  }
  std::optional<std::vector<double>> breaks, values;
  if (const Json* b = member(j, "breaks", path, out, true)) {
    breaks = number_array(*b, join_path(path, "breaks"), out);
  }
  if (const Json* v = member(j, "values", path, out, true)) {
    values = number_array(*v, join_path(path, "values"), out);
  }
  if (out.list().size() != before || !lo || !hi || !breaks || !values) return std::nullopt;
  return guarded(path, out, [&] { return PiecewiseConstantFn(*lo, *hi, *breaks, *values); });
}

std::optional<Eigen::MatrixXd> parse_matrix(const Json& j, const std::string& path,
                                            Issues& out) {
  if (!j.is_array() || j.empty()) {
    out.add(path, "expected a non-empty array of rows");
    return std::nullopt;
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<std::vector<double>> data;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = number_array(j[r], index_path(path, r), out);
    if (!row) return std::nullopt;
    if (r == 0) cols = row->size();
    if (row->size() != cols || cols == 0) {
      out.add(index_path(path, r), "rows must be non-empty and of equal length");
      return std::nullopt;
    }
    data.push_back(std::move(*row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r][c];
    }
  }
  return m;
}

std::optional<ModeSpec> parse_mode(const Json& j, const std::string& path, Issues& out) {
  const auto kind = string_field(j, "kind", path, out);
  if (!kind) return std::nullopt;
  const auto before = out.list().size();
  if (*kind == "matrix") {
    const Json* a = member(j, "A", path, out, true);
    if (!a) return std::nullopt;
    auto m = parse_matrix(*a, join_path(path, "A"), out);
    if (!m) return std::nullopt;
    return guarded(path, out, [&] { return ModeSpec::matrix(*m); });
  }
  if (*kind == "shift_amplify") {
    std::optional<double> lo, hi;
    if (const Json* dom = member(j, "domain", path, out, true)) {
      const auto dpath = join_path(path, "domain");
      if (!dom->is_array() || dom->size() != 2) {
        out.add(dpath, "expected [lo, hi]");
      } else {
        lo = number((*dom)[0], index_path(dpath, 0), out);
        hi = number((*dom)[1], index_path(dpath, 1), out);
      }
    }
    const auto dir = string_field(j, "direction", path, out);
    if (dir && *dir != "left" && *dir != "right") {
      out.add(join_path(path, "direction"), "expected \"left\" or \"right\"");
    }
    const auto gate = number_field(j, "gate", path, out);
    const auto factor = number_field(j, "factor", path, out);
    if (out.list().size() != before) return std::nullopt;
    return guarded(path, out, [&] {
      return ModeSpec::shift_amplify(*lo, *hi, *dir == "left" ? Direction::left : Direction::right,
                                     *gate, *factor);
    });
  }
  if (*kind == "diagonal_group") {
    const auto mu = number_field(j, "mu", path, out);
    if (!mu) return std::nullopt;
    return guarded(path, out, [&] { return ModeSpec::diagonal_group(*mu); });
  }
  if (*kind == "half_line_shift") return ModeSpec::half_line_shift();
  out.add(join_path(path, "kind"), "unknown mode kind \"" + *kind + "\"");
  return std::nullopt;
}

std::optional<SwitchingSignal> parse_signal(const Json& j, const std::string& path,
                                            Issues& out) {
  const auto before = out.list().size();
  std::vector<Segment> segments;
  if (const Json* segs = member(j, "segments", path, out, false)) {
    const auto spath = join_path(path, "segments");
    if (!segs->is_array()) {
      out.add(spath, "expected an array of [mode, dwell] pairs");
    } else {
      for (std::size_t i = 0; i < segs->size(); ++i) {
        const auto ipath = index_path(spath, i);
        const Json& s = (*segs)[i];
        if (!s.is_array() || s.size() != 2) {
          out.add(ipath, "expected [mode, dwell]");
          continue;
        }
        const auto mode = index_value(s[0], ipath + ".mode", out);
        const auto dwell = number(s[1], ipath + ".dwell", out);
        if (dwell && !(*dwell > 0.0)) {
          out.add(ipath + ".dwell", "must be positive (segment " + std::to_string(i) + ")");
          continue;
        }
        if (mode && dwell) segments.push_back({*mode, *dwell});
      }
    }
  }
  std::optional<std::size_t> tail;
  if (const Json* t = member(j, "tail", path, out, true)) {
    tail = index_value(*t, join_path(path, "tail"), out);
  }
  if (out.list().size() != before || !tail) return std::nullopt;
  return guarded(path, out, [&] { return SwitchingSignal(segments, *tail); });
}

std::optional<SwitchedSystem> parse_system(const Json& j, const std::string& path,
                                           Issues& out) {
  const auto before = out.list().size();
  std::vector<ModeSpec> modes;
  if (const Json* ms = member(j, "modes", path, out, true)) {
    const auto mpath = join_path(path, "modes");
    if (!ms->is_array() || ms->empty()) {
      out.add(mpath, "expected a non-empty array of modes");
    } else {
      for (std::size_t i = 0; i < ms->size(); ++i) {
        if (auto m = parse_mode((*ms)[i], index_path(mpath, i), out)) modes.push_back(*m);
      }
    }
  }
  std::optional<NormSpec> norm;
  if (const Json* n = member(j, "norm", path, out, false)) {
    const auto npath = join_path(path, "norm");
    if (n->is_string() && n->get<std::string>() == "euclidean") {
      norm = NormSpec::euclid();
    } else if (n->is_object()) {
      if (auto p = number_field(*n, "p", npath, out)) {
        norm = guarded(npath, out, [&] { return NormSpec::lp(*p); });
      }
    } else {
      out.add(npath, "expected \"euclidean\" or {\"p\": p}");
    }
  }
  if (out.list().size() != before) return std::nullopt;
  if (!norm) {
    const bool matrix = std::any_of(modes.begin(), modes.end(),
                                    [](const ModeSpec& m) { return m.is_matrix(); });
    norm = matrix ? NormSpec::euclid() : NormSpec::lp(2.0);
  }
  return guarded(path, out, [&] { return SwitchedSystem(modes, *norm); });
}

std::optional<SemigroupState> parse_state(const Json& j, const std::string& path, Issues& out) {
  if (j.is_array()) {
    auto v = number_array(j, path, out);
    if (!v) return std::nullopt;
    if (v->empty()) {
      out.add(path, "expected a non-empty vector");
      return std::nullopt;
    }
    return SemigroupState(Eigen::Map<const Eigen::VectorXd>(v->data(),
                                                            static_cast<Eigen::Index>(v->size())));
  }
  if (j.is_object()) {
    auto f = parse_pcf(j, path, out);
    if (!f) return std::nullopt;
    return SemigroupState(std::move(*f));
  }
  out.add(path, "expected a vector or a piecewise-constant function");
  return std::nullopt;
}

std::optional<SignalFamily> parse_family(const Json& j, const std::string& path, Issues& out) {
  const auto before = out.list().size();
  SignalFamily fam;
  if (const Json* d = member(j, "dwells", path, out, true)) {
    const auto dpath = join_path(path, "dwells");
    if (auto v = number_array(*d, dpath, out)) {
      if (v->empty()) out.add(dpath, "must not be empty");
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!((*v)[i] > 0.0)) out.add(index_path(dpath, i), "must be positive");
      }
      fam.dwell_grid = *v;
    }
  }
  if (const Json* k = member(j, "max_switches", path, out, true)) {
    if (auto n = index_value(*k, join_path(path, "max_switches"), out)) fam.max_switches = *n;
  }
  if (const Json* m = member(j, "modes", path, out, true)) {
    const auto mpath = join_path(path, "modes");
    if (!m->is_array() || m->empty()) {
      out.add(mpath, "expected a non-empty array of mode indices");
    } else {
      for (std::size_t i = 0; i < m->size(); ++i) {
        if (auto id = index_value((*m)[i], index_path(mpath, i), out)) fam.mode_ids.push_back(*id);
      }
    }
  }
  if (out.list().size() != before) return std::nullopt;
  return fam;
}

std::optional<DecayBound> parse_decay_bound(const Json& j, const std::string& path,
                                            Issues& out) {
  const auto k = number_field(j, "K", path, out);
  const auto mu = number_field(j, "mu", path, out);
  if (!k || !mu) return std::nullopt;
  return guarded(path, out, [&] { return make_decay_bound(*k, *mu); });
}

PiecewiseConstantFn pcf_from_json(const Json& j) {
  return parse_or_throw<PiecewiseConstantFn>(j, parse_pcf);
}
ModeSpec mode_from_json(const Json& j) { return parse_or_throw<ModeSpec>(j, parse_mode); }
SwitchingSignal signal_from_json(const Json& j) {
  return parse_or_throw<SwitchingSignal>(j, parse_signal);
}
SwitchedSystem system_from_json(const Json& j) {
  return parse_or_throw<SwitchedSystem>(j, parse_system);
}
SemigroupState state_from_json(const Json& j) {
  return parse_or_throw<SemigroupState>(j, parse_state);
}
SignalFamily family_from_json(const Json& j) {
  return parse_or_throw<SignalFamily>(j, parse_family);
}

namespace {

std::optional<CandidateSet> parse_candidates(const Json& j, const std::string& path,
                                             Issues& out) {
  const auto before = out.list().size();
  CandidateSet set;
  const Json* items = member(j, "candidates", path, out, true);
  if (!items) return std::nullopt;
  const auto cpath = join_path(path, "candidates");
  if (!items->is_array() || items->empty()) {
    out.add(cpath, "expected a non-empty array");
    return std::nullopt;
  }
  for (std::size_t i = 0; i < items->size(); ++i) {
    const auto ipath = index_path(cpath, i);
    std::optional<Eigen::MatrixXd> b;
    std::optional<SwitchingSignal> sig;
    if (const Json* m = member((*items)[i], "matrix", ipath, out, true)) {
      b = parse_matrix(*m, join_path(ipath, "matrix"), out);
      if (b && b->rows() != b->cols()) out.add(join_path(ipath, "matrix"), "must be square");
    }
    if (const Json* s = member((*items)[i], "signal", ipath, out, true)) {
      sig = parse_signal(*s, join_path(ipath, "signal"), out);
    }
    if (b && sig) set.items.push_back({*b, *sig});
  }
  if (out.list().size() != before) return std::nullopt;
  for (std::size_t i = 1; i < set.items.size(); ++i) {
    if (set.items[i].b.rows() != set.items[0].b.rows()) {
      out.add(index_path(cpath, i), "dimension differs from the first candidate");
      return std::nullopt;
    }
  }
  return set;
}

std::optional<BoundDirection> parse_direction(const Json& j, const std::string& path,
                                              Issues& out) {
  const auto s = string_field(j, "bound_direction", path, out);
  if (!s) return std::nullopt;
  if (*s == "lower") return BoundDirection::lower;
  if (*s == "upper") return BoundDirection::upper;
  if (*s == "two-sided") return BoundDirection::two_sided;
  out.add(join_path(path, "bound_direction"), "expected lower, upper or two-sided");
  return std::nullopt;
}

std::optional<double> nullable_number(const Json& j, const char* key, const std::string& path,
                                      Issues& out, bool& present) {
  present = false;
  const Json* m = member(j, key, path, out, true);
  if (!m) return std::nullopt;
  present = true;
  if (m->is_null()) return std::nullopt;
  return number(*m, join_path(path, key), out);
}

std::optional<LyapunovEstimate> parse_estimate(const Json& j, const std::string& path,
                                               Issues& out) {
  const auto before = out.list().size();
  LyapunovEstimate e;
  if (auto v = number_field(j, "value", path, out)) e.value = *v;
  if (auto h = number_field(j, "horizon", path, out)) e.horizon = *h;
  if (const Json* w = member(j, "witness", path, out, true)) {
    if (auto s = parse_signal(*w, join_path(path, "witness"), out)) e.witness = *s;
  }
  bool present = false;
  e.tail_bound = nullable_number(j, "tail_bound", path, out, present);
  e.upper_bound = nullable_number(j, "upper_bound", path, out, present);
  if (const auto kind = string_field(j, "kind", path, out)) {
    if (*kind == "v_sup") {
      e.kind = FunctionalKind::v_sup;
    } else if (*kind == "v_tilde") {
      e.kind = FunctionalKind::v_tilde;
    } else {
      out.add(join_path(path, "kind"), "expected v_sup or v_tilde");
    }
  }
  if (const Json* n = member(j, "signals_evaluated", path, out, true)) {
    if (auto c = index_value(*n, join_path(path, "signals_evaluated"), out)) e.signals_evaluated = *c;
  }
  if (auto d = parse_direction(j, path, out)) e.direction = *d;
  if (out.list().size() != before) return std::nullopt;
  return e;
}

void require_keys(const Json& j, const std::string& path, Issues& out,
                  std::initializer_list<const char*> keys) {
  for (const char* k : keys) member(j, k, path, out, true);
}

void check_report(const Json& r, const std::string& path, Issues& out) {
  require_keys(r, path, out,
               {"samples", "c_observed", "c_upper_observed", "c_used", "c_upper_used",
                "upper_bound_holds", "lower_bound_holds", "derivative_holds", "supports",
                "notes"});
  if (!r.is_object()) return;
  for (const char* k : {"c_observed", "c_upper_observed", "c_used", "c_upper_used"}) {
    if (r.contains(k)) number(r[k], join_path(path, k), out);
  }
  for (const char* k : {"upper_bound_holds", "lower_bound_holds", "derivative_holds"}) {
    if (r.contains(k)) bool_field(r, k, path, out);
  }
  if (r.contains("supports")) {
    for (const char* k : {"a", "b", "c"}) bool_field(r["supports"], k, join_path(path, "supports"), out);
  }
  for (const char* k : {"decay", "gronwall"}) {
    if (r.contains(k) && !r[k].is_null()) parse_decay_bound(r[k], join_path(path, k), out);
  }
  if (r.contains("samples") && !r["samples"].is_array()) {
    out.add(join_path(path, "samples"), "expected an array");
  }
}

}  // namespace

CandidateSet candidates_from_json(const Json& j) {
  return parse_or_throw<CandidateSet>(j, parse_candidates);
}

LyapunovEstimate estimate_from_json(const Json& j) {
  return parse_or_throw<LyapunovEstimate>(j, parse_estimate);
}

Json encode(const PiecewiseConstantFn& f) {
  return Json{{"domain", {f.lo(), f.unbounded() ? Json(nullptr) : Json(f.hi())}},
              {"breaks", f.breaks()},
              {"values", f.values()}};
}

Json encode(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json encode(const ModeSpec& m) {
  return std::visit(
      Overloaded{[](const MatrixMode& mm) { return Json{{"kind", "matrix"}, {"A", encode(mm.a)}}; },
                 [](const ShiftAmplifyMode& s) {
                   return Json{{"kind", "shift_amplify"},
                               {"domain", {s.lo, s.hi}},
                               {"direction", s.direction == Direction::left ? "left" : "right"},
                               {"gate", s.gate},
                               {"factor", s.factor}};
                 },
                 [](const DiagonalGroupMode& d) {
                   return Json{{"kind", "diagonal_group"}, {"mu", d.mu}};
                 },
                 [](const HalfLineShiftMode&) { return Json{{"kind", "half_line_shift"}}; }},
      m.variant());
}

Json encode(const SwitchingSignal& s) {
  Json segs = Json::array();
  for (const auto& seg : s.segments()) segs.push_back(Json::array({seg.mode, seg.dwell}));
  return Json{{"segments", segs}, {"tail", s.tail()}};
}

Json encode(const SwitchedSystem& s) {
  Json modes = Json::array();
  for (const auto& m : s.modes()) modes.push_back(encode(m));
  Json norm = s.norm().euclidean ? Json("euclidean") : Json{{"p", s.norm().p}};
  return Json{{"modes", modes}, {"norm", norm}};
}

Json encode(const SemigroupState& x) {
  return std::visit(Overloaded{[](const PiecewiseConstantFn& f) { return encode(f); },
                               [](const Eigen::VectorXd& v) {
                                 Json a = Json::array();
                                 for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
                                 return a;
                               }},
                    x);
}

Json encode(const SignalFamily& f) {
  return Json{{"dwells", f.dwell_grid}, {"max_switches", f.max_switches}, {"modes", f.mode_ids}};
}

Json encode(const GrowthBound& b) { return Json{{"M", b.m}, {"omega", b.omega}}; }

Json encode(const DecayBound& b) { return Json{{"K", b.k}, {"mu", b.mu}}; }

std::string to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::lower:
      return "lower";
    case BoundDirection::upper:
      return "upper";
    case BoundDirection::two_sided:
      return "two-sided";
  }
  return "lower";
}

std::string to_string(FunctionalKind k) {
  return k == FunctionalKind::v_sup ? "v_sup" : "v_tilde";
}

Json encode(const LyapunovEstimate& e) {
  return Json{{"value", e.value},
              {"witness", encode(e.witness)},
              {"horizon", e.horizon},
              {"tail_bound", optional_number(e.tail_bound)},
              {"upper_bound", optional_number(e.upper_bound)},
              {"kind", to_string(e.kind)},
              {"signals_evaluated", e.signals_evaluated},
              {"bound_direction", to_string(e.direction)}};
}

Json encode(const DatkoCertificate& c) {
  return Json{{"growth", encode(c.growth)},
              {"p", c.p},
              {"c_int", c.c_int},
              {"k", c.k},
              {"rho", c.rho},
              {"beta", c.beta},
              {"t0", c.t0},
              {"t1", c.t1},
              {"K", c.big_k},
              {"mu", c.mu},
              {"variant", c.variant == DatkoKVariant::k_over_beta ? "k_over_beta"
                                                                   : "integral_over_beta"},
              {"conditional_on_k", true}};
}

Json encode(const ConditionReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    Json item{{"sample", s.sample},
              {"norm_sq", s.norm_sq},
              {"v", optional_number(s.v)},
              {"upper_ok", s.upper_ok},
              {"lower_ok", s.lower_ok},
              {"derivative", s.derivative},
              {"derivative_ok", s.derivative_ok}};
    if (!s.error.empty()) item["error"] = s.error;
    samples.push_back(std::move(item));
  }
  Json refusal = nullptr;
  if (r.decay_refusal) {
    refusal = Json{{"reason", r.decay_refusal->reason},
                   {"signal", encode(r.decay_refusal->signal)},
                   {"time", r.decay_refusal->time},
                   {"ratio", r.decay_refusal->ratio}};
  }
  return Json{{"samples", samples},
              {"c_observed", r.c_observed},
              {"c_upper_observed", r.c_upper_observed},
              {"c_used", r.c_used},
              {"c_upper_used", r.c_upper_used},
              {"growth", r.growth ? encode(*r.growth) : Json(nullptr)},
              {"decay", r.decay ? encode(*r.decay) : Json(nullptr)},
              {"decay_refusal", refusal},
              {"gronwall", r.gronwall ? encode(*r.gronwall) : Json(nullptr)},
              {"upper_bound_holds", r.upper_bound_holds},
              {"lower_bound_holds", r.lower_bound_holds},
              {"derivative_holds", r.derivative_holds},
              {"supports", {{"a", r.supports_a}, {"b", r.supports_b}, {"c", r.supports_c}}},
              {"notes", r.notes}};
}

Json encode(const CandidateSet& c) {
  Json items = Json::array();
  for (const auto& g : c.items) {
    items.push_back(Json{{"matrix", encode(g.b)}, {"signal", encode(g.source)}});
  }
  return Json{{"dimension", c.items.empty() ? 0 : c.items.front().b.rows()},
              {"candidates", items}};
}

Json make_artifact(const std::string& kind, Json body) {
  body["schema"] = "swlyap/" + kind + "/1";
  return body;
}

std::vector<FieldError> validate_artifact(const Json& j) {
  Issues out;
  const auto schema = string_field(j, "schema", "", out);
  if (!schema) return out.list();
  if (*schema == "swlyap/estimate/1") {
    if (const Json* e = member(j, "estimate", "", out, true)) parse_estimate(*e, "estimate", out);
    if (const Json* x = member(j, "x0", "", out, true)) parse_state(*x, "x0", out);
  } else if (*schema == "swlyap/candidates/1") {
    parse_candidates(j, "", out);
    if (j.contains("x0")) parse_state(j["x0"], "x0", out);
    if (j.contains("v_max")) number(j["v_max"], "v_max", out);
    if (j.contains("directional_derivative")) {
      number(j["directional_derivative"], "directional_derivative", out);
    }
    if (j.contains("v_max")) parse_direction(j, "", out);
  } else if (*schema == "swlyap/certificate/1") {
    if (const Json* r = member(j, "report", "", out, true)) check_report(*r, "report", out);
    parse_direction(j, "", out);
    if (j.contains("datko") && !j["datko"].is_null()) {
      const auto& d = j["datko"];
      for (const char* k : {"p", "c_int", "k", "rho", "beta", "t0", "t1", "K", "mu"}) {
        number_field(d, k, "datko", out);
      }
    }
  } else if (*schema == "swlyap/simulation/1") {
    if (const Json* s = member(j, "system", "", out, true)) parse_system(*s, "system", out);
    if (const Json* s = member(j, "signal", "", out, true)) parse_signal(*s, "signal", out);
    if (const Json* x = member(j, "x0", "", out, true)) parse_state(*x, "x0", out);
    number_field(j, "horizon", "", out);
    number_field(j, "final_norm", "", out);
    number_field(j, "energy", "", out);
  } else if (*schema == "swlyap/reproduction/1") {
    string_field(j, "example", "", out);
    parse_direction(j, "", out);
    if (const Json* checks = member(j, "checks", "", out, true)) {
      if (!checks->is_array()) {
        out.add("checks", "expected an array");
      } else {
        for (std::size_t i = 0; i < checks->size(); ++i) {
          const auto p = index_path("checks", i);
          string_field((*checks)[i], "name", p, out);
          number_field((*checks)[i], "value", p, out);
          number_field((*checks)[i], "expected", p, out);
          bool_field((*checks)[i], "pass", p, out);
        }
      }
    }
  } else {
    out.add("schema", "unknown schema \"" + *schema + "\"");
  }
  return out.list();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace swlyap
