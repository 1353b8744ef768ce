#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swlyap/certificates.hpp"
#include "swlyap/errors.hpp"

using namespace swlyap;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SearchOptions horizon_opts(double h) {
  SearchOptions o;
  o.horizon = h;
  return o;
}

SearchOptions unrefined_opts(double h) {
  SearchOptions o = horizon_opts(h);
  o.refine = false;
  return o;
}

SwitchedSystem scalar_system(double a) {
  return SwitchedSystem({ModeSpec::matrix(MatrixXd::Constant(1, 1, a))}, NormSpec::euclid());
}

SwitchedSystem commuting_pair() {
  return SwitchedSystem({ModeSpec::matrix(Eigen::Vector2d(-1, -2).asDiagonal().toDenseMatrix()),
                         ModeSpec::matrix(Eigen::Vector2d(-2, -1).asDiagonal().toDenseMatrix())},
                        NormSpec::euclid());
}

std::vector<SemigroupState> unit_circle(int count) {
  std::vector<SemigroupState> out;
  for (int i = 0; i < count; ++i) {
    const double a = M_PI * i / count;
    out.emplace_back(VectorXd(Eigen::Vector2d(std::cos(a), std::sin(a))));
  }
  return out;
}

std::vector<SemigroupState> blowup_witnesses() {
  std::vector<SemigroupState> out;
  for (int m = 1; m <= 8; ++m) {
    const double eta = std::ldexp(1.0, -2 * m);
    out.emplace_back(PiecewiseConstantFn::indicator(-1, 1, -eta, eta));
    out.emplace_back(PiecewiseConstantFn::indicator(-1, 1, 0, eta));
  }
  return out;
}

}  // namespace

TEST_SUITE("certificates") {
  TEST_CASE("bound constructors check their ranges") {
    CHECK_THROWS_AS(make_growth_bound(0.5, 1.0), ContractViolation);
    CHECK_THROWS_AS(make_growth_bound(1.0, 0.0), ContractViolation);
    CHECK_THROWS_AS(make_decay_bound(0.9, 1.0), ContractViolation);
    CHECK_THROWS_AS(make_decay_bound(1.0, -1.0), ContractViolation);
    CHECK_THROWS_AS(make_norm_equivalence(0.0, 1.0), ContractViolation);
    CHECK_THROWS_AS(make_norm_equivalence(2.0, 1.0), ContractViolation);
    CHECK_NOTHROW(make_norm_equivalence(1.0, 1.0));
  }

  TEST_CASE("fit_growth on a single decaying mode") {
    const SwitchedSystem g({ModeSpec::diagonal_group(1.0)}, NormSpec::euclid());
    const auto times = uniform_grid(5.0, 0.25);
    const std::vector<SemigroupState> w = {VectorXd(VectorXd::Ones(1))};
    const auto fit = fit_growth(g, SignalFamily{{1.0}, 1, {0}}, times, w);
    CHECK(fit.bound.m == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.bound.omega > 0.0);
    CHECK(fit.empirical);
    for (double r : fit.samples.ratio) CHECK(r <= 1.0);
  }

  TEST_CASE("fit_growth majorizes the blow-up staircase") {
    const SwitchedSystem sys(bimodal_blowup_modes(), NormSpec::lp(1));
    const double delta = 0.5;
    // On the switching grid the sampled sup is 2^(t/delta); in between, the
    // alternating signal has not yet recrossed the gate.
    const auto times = uniform_grid(2.0, delta);
    const auto ws = blowup_witnesses();
    const auto fit = fit_growth(sys, SignalFamily{{delta}, 4, {0, 1}}, times, ws);
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(fit.samples.ratio[k] >= std::ldexp(1.0, static_cast<int>(k)));
      CHECK(fit.bound.m * std::exp(fit.bound.omega * times[k]) >= fit.samples.ratio[k]);
    }
    CHECK(fit.bound.omega >= std::log(2.0) / delta - 1e-9);

    const auto fine = fit_growth(sys, SignalFamily{{delta}, 4, {0, 1}}, uniform_grid(2.0, 1.0 / 16), ws);
    for (std::size_t k = 0; k < fine.samples.times.size(); ++k) {
      CHECK(fine.bound.m * std::exp(fine.bound.omega * fine.samples.times[k]) >= fine.samples.ratio[k]);
    }
  }

  TEST_CASE("fit_growth majorizes the dyadic cascade") {
    const int n = 4;
    std::vector<ModeSpec> modes;
    for (int j = 1; j <= n; ++j) modes.push_back(dyadic_gate_mode(j, 2.0));
    const SwitchedSystem sys(modes, NormSpec::lp(2));
    const double eps = std::ldexp(1.0, -2 * (n + 1));
    auto times = uniform_grid(1.0 - eps, 1.0 / 64);
    const std::vector<SemigroupState> ws = {PiecewiseConstantFn::indicator(0, 1, 1 - eps, 1)};
    // A family containing the cascade itself: dwells 3/4, 3/16, 3/64.
    const SignalFamily fam{{0.75, 0.1875, 0.046875}, 3, {0, 1, 2, 3}};
    const auto fit = fit_growth(sys, fam, times, ws, Exec::parallel);
    CHECK(fit.samples.ratio.back() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(fit.bound.m * std::exp(fit.bound.omega * times.back()) >= 4.0);
  }

  TEST_CASE("fit_growth refuses all-zero samples") {
    const SwitchedSystem sys(bimodal_blowup_modes(), NormSpec::lp(1));
    const std::vector<double> late = {2.0, 3.0};
    const std::vector<SemigroupState> ws = {PiecewiseConstantFn::indicator(-1, 1, 0, 0.5)};
    // Constant signals empty the domain by t = 2.
    CHECK_THROWS_AS(fit_growth(sys, SignalFamily{{1.0}, 0, {0, 1}}, late, ws), EstimationError);
    const std::vector<SemigroupState> zero = {PiecewiseConstantFn::zero(-1, 1)};
    CHECK_THROWS_AS(fit_growth(sys, SignalFamily{{1.0}, 1, {0, 1}}, late, zero), ContractViolation);
  }

  TEST_CASE("fit_decay on the scalar mode") {
    const auto times = uniform_grid(10.0, 0.125);
    const std::vector<SemigroupState> w = {VectorXd(VectorXd::Ones(1))};
    const auto out = fit_decay(scalar_system(-1.0), SignalFamily{{0.5}, 1, {0}}, times, w);
    REQUIRE(std::holds_alternative<DecayFit>(out));
    const auto& fit = std::get<DecayFit>(out);
    CHECK(fit.bound.k == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.bound.mu == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("fit_decay refuses the blow-up system") {
    const SwitchedSystem sys(bimodal_blowup_modes(), NormSpec::lp(1));
    const auto times = uniform_grid(2.0, 1.0 / 16);
    const auto out = fit_decay(sys, SignalFamily{{0.5}, 4, {0, 1}}, times, blowup_witnesses());
    REQUIRE(std::holds_alternative<DecayRefusal>(out));
    const auto& no = std::get<DecayRefusal>(out);
    CHECK(no.ratio >= 16.0);
    CHECK(no.time > 1.5);
    CHECK(no.signal.switch_count() >= 3);
  }

  TEST_CASE("fit_decay on the commuting pair") {
    const auto times = uniform_grid(10.0, 0.125);
    const auto out = fit_decay(commuting_pair(), SignalFamily{{0.5, 1.0}, 2, {0, 1}}, times, unit_circle(8));
    REQUIRE(std::holds_alternative<DecayFit>(out));
    CHECK(std::get<DecayFit>(out).bound.mu >= 0.95);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto& fit = std::get<DecayFit>(out);
      CHECK(fit.bound.k * std::exp(-fit.bound.mu * times[k]) >= fit.samples.ratio[k]);
    }
  }

  TEST_CASE("fit_decay never beats the slowest constant signal") {
    oracle::Rng r(51);
    const auto times = uniform_grid(10.0, 0.125);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = r.integer(2, 3);
      std::vector<ModeSpec> ms;
      double slowest = INFINITY;
      for (int j = 0; j < 2; ++j) {
        const MatrixXd a = oracle::random_hurwitz(r, n, r.uniform(0.2, 1.0));
        slowest = std::min(slowest, -oracle::spectral_abscissa(a));
        ms.push_back(ModeSpec::matrix(a));
      }
      const SwitchedSystem sys(ms, NormSpec::euclid());
      std::vector<SemigroupState> ws;
      for (int i = 0; i < 6; ++i) ws.emplace_back(oracle::random_vector(r, n));
      const auto out = fit_decay(sys, SignalFamily{{0.5, 1.0}, 2, {0, 1}}, times, ws);
      if (const auto* fit = std::get_if<DecayFit>(&out)) CHECK(fit->bound.mu <= slowest * 1.05 + 1e-3);
    }
  }

  TEST_CASE("Datko constant chain") {
    const auto c = datko_certificate(make_growth_bound(1.0, 1.0), 0.5, 2.0, 1.0, 0.5, 1.01);
    CHECK(c.rho == 0.5);
    CHECK(c.t0 == 2.0);
    CHECK(c.t1 == doctest::Approx(2.02).epsilon(1e-15));
    CHECK(c.mu == doctest::Approx(std::log(2.0) / 2.02).epsilon(1e-15));
    CHECK(c.mu == doctest::Approx(0.3431).epsilon(1e-4));
    CHECK(c.big_k == 2.0);
    CHECK(c.t1 > c.t0);
    const auto literal = datko_certificate(make_growth_bound(1.0, 1.0), 0.5, 2.0, 1.0, 0.5, 1.01,
                                         DatkoKVariant::integral_over_beta);
    CHECK(literal.big_k == 1.0);
    CHECK(decay_bound_of(literal).k == 1.0);

    // beta -> 1: the certificate degrades continuously to K = 1, mu = 0.
    double prev_mu = INFINITY;
    for (double beta : {0.9, 0.99, 0.999, 0.9999}) {
      const auto d = datko_certificate(make_growth_bound(1.0, 1.0), 0.5, 2.0, 1.0, beta);
      CHECK(d.mu < prev_mu);
      prev_mu = d.mu;
      CHECK(d.big_k == doctest::Approx(1.0).epsilon(2 * (1 - beta)));
    }
    CHECK(prev_mu < 1e-3);

    const auto g = make_growth_bound(1.0, 1.0);
    CHECK_THROWS_AS(datko_certificate(g, 0.5, 2, 1, 1.0), ContractViolation);
    CHECK_THROWS_AS(datko_certificate(g, 0.5, 2, 1, 0.0), ContractViolation);
    CHECK_THROWS_AS(datko_certificate(g, 0.5, 2, 0.5, 0.5), ContractViolation);
    CHECK_THROWS_AS(datko_certificate(g, 0.5, 2, 1, 0.5, 1.0), ContractViolation);
    CHECK_THROWS_AS(datko_certificate(g, 0.0, 2, 1, 0.5), ContractViolation);
    CHECK_THROWS_AS(datko_certificate(g, 0.5, 0.5, 1, 0.5), ContractViolation);
  }

  TEST_CASE("Datko: smaller k gives a smaller K and a faster rate") {
    oracle::Rng r(52);
    for (int trial = 0; trial < 200; ++trial) {
      const double c_int = r.uniform(0.1, 5), p = r.uniform(1, 3), beta = r.uniform(0.05, 0.95);
      const double k_hi = r.uniform(1, 10), k_lo = r.uniform(1, k_hi);
      const auto hi = datko_certificate(make_growth_bound(1.0, 1.0), c_int, p, k_hi, beta);
      const auto lo = datko_certificate(make_growth_bound(1.0, 1.0), c_int, p, k_lo, beta);
      CHECK(lo.big_k <= hi.big_k);
      CHECK(lo.mu >= hi.mu);
    }
  }

  TEST_CASE("Datko envelope majorizes sampled trajectories") {
    // Scalar -1: int_0^inf e^{-2t} = 1/2, k = 1.
    const auto cert = datko_certificate(make_growth_bound(1.0, 1e-6), 0.5, 2.0, 1.0);
    const auto env = decay_bound_of(cert);
    for (double t : uniform_grid(40.0, 1.0 / 64)) CHECK(env.k * std::exp(-env.mu * t) >= std::exp(-t));

    // Commuting pair: C_int and k from samples.
    const auto sys = commuting_pair();
    const SignalFamily fam{{0.5, 1.0}, 2, {0, 1}};
    const auto times = uniform_grid(10.0, 1.0 / 16);
    const auto ws = unit_circle(12);
    const auto sup = sample_sup_norms(sys, fam, times, ws);
    double k = 1.0;
    for (double v : sup.ratio) k = std::max(k, v);
    double c_int = 0.0;
    for (const auto& w : ws) {
      c_int = std::max(c_int, v_sup(sys, w, fam, horizon_opts(30)).value);
    }
    const auto pair_env = decay_bound_of(datko_certificate(fit_growth(sys, fam, times, ws).bound, c_int, 2.0, k));
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(sup.ratio[i] <= pair_env.k * std::exp(-pair_env.mu * times[i]));
    }
  }

  TEST_CASE("Gronwall constants") {
    const auto a = gronwall_certificate(make_norm_equivalence(0.5, 0.5));
    CHECK(a.k == 1.0);
    CHECK(a.mu == 1.0);
    const auto b = gronwall_certificate(make_norm_equivalence(0.25, 1.0));
    CHECK(b.k == 2.0);
    CHECK(b.mu == 2.0);
    const auto b2 = gronwall_certificate(make_norm_equivalence(0.25, 1.0), GronwallRate::from_upper_constant);
    CHECK(b2.k == 2.0);
    CHECK(b2.mu == 0.5);
    for (double c : {0.01, 0.3, 7.0}) CHECK(gronwall_certificate(make_norm_equivalence(c, c)).k == 1.0);
  }

  TEST_CASE("Gronwall envelope holds when c equals C") {
    // e^{-mu t} I: V(x) = ||x||^2 / (2 mu) exactly, so c = C and the rate 1/(2c) = mu is exact.
    for (double mu : {0.5, 1.0, 2.0}) {
      const auto env = gronwall_certificate(make_norm_equivalence(0.5 / mu, 0.5 / mu));
      for (double t : uniform_grid(10.0, 1.0 / 8)) {
        CHECK(std::exp(-mu * t) <= env.k * std::exp(-env.mu * t) * (1 + 1e-6));
      }
    }
  }

  TEST_CASE("Gronwall envelope from the upper constant holds on the commuting pair") {
    const auto sys = commuting_pair();
    const SignalFamily fam{{0.5, 1.0}, 2, {0, 1}};
    const auto ws = unit_circle(16);
    double c = INFINITY, big_c = 0.0;
    for (const auto& w : ws) {
      const double v = v_sup(sys, w, fam, horizon_opts(30)).value;
      c = std::min(c, v);
      big_c = std::max(big_c, v);
    }
    const auto times = uniform_grid(10.0, 1.0 / 16);
    const auto sup = sample_sup_norms(sys, fam, times, ws);
    const auto safe = gronwall_certificate(make_norm_equivalence(c, big_c), GronwallRate::from_upper_constant);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(sup.ratio[i] <= safe.k * std::exp(-safe.mu * times[i]) * (1 + 1e-6));
    }
    // The rate 1/(2c) overshoots here: e_1 under mode 0 decays only like e^{-t}.
    const auto fast = gronwall_certificate(make_norm_equivalence(c, big_c));
    CHECK(fast.mu > 1.0);
    CHECK(std::exp(-10.0) > fast.k * std::exp(-fast.mu * 10.0));
  }

  TEST_CASE("group lower bound") {
    CHECK(group_lower_bound(1.0) == 0.5);
    CHECK(group_lower_bound(0.5) == 1.0);
    CHECK(group_lower_bound(2.0) == 0.25);
    CHECK_THROWS_AS(group_lower_bound(0.0), ContractViolation);
    CHECK_THROWS_AS(group_lower_bound(-1.0), ContractViolation);
  }

  TEST_CASE("condition report on the scalar mode with the exact V") {
    const auto sys = scalar_system(-1.0);
    const Evaluator v = [](const SemigroupState& x) { return 0.5 * std::get<VectorXd>(x).squaredNorm(); };
    std::vector<SemigroupState> samples;
    for (double s : {-2.0, -0.5, 0.25, 1.0, 3.0}) samples.emplace_back(VectorXd::Constant(1, s));
    ConditionOptions opts;
    opts.growth_times = uniform_grid(5.0, 0.125);
    opts.growth_witnesses = {VectorXd(VectorXd::Ones(1))};
    const auto rep = condition_report(sys, v, samples, SignalFamily{{1.0}, 1, {0}}, opts);
    CHECK(rep.c_observed == 0.5);
    CHECK(rep.c_upper_observed == 0.5);
    CHECK(rep.upper_bound_holds);
    CHECK(rep.lower_bound_holds);
    CHECK(rep.derivative_holds);
    CHECK(rep.supports_b);
    CHECK(rep.supports_c);
    CHECK(rep.supports_a);
    for (const auto& s : rep.samples) {
      CHECK(s.derivative[0] == doctest::Approx(-s.norm_sq).epsilon(1e-5));
    }
    REQUIRE(rep.gronwall.has_value());
    CHECK(rep.gronwall->k == 1.0);
    CHECK(rep.gronwall->mu == 1.0);
  }

  TEST_CASE("condition report: V-bound alone does not give decay on the dyadic cascade") {
    const int n = 4;
    std::vector<ModeSpec> modes;
    for (int j = 1; j <= n; ++j) modes.push_back(dyadic_gate_mode(j, 2.0));
    const SwitchedSystem sys(modes, NormSpec::lp(2));
    const SignalFamily fam{{0.25}, 2, {0, 1, 2, 3}};
    const Evaluator v = v_sup_evaluator(sys, fam, unrefined_opts(2));
    oracle::Rng r(53);
    std::vector<SemigroupState> samples;
    for (int i = 0; i < 4; ++i) samples.emplace_back(oracle::random_pcf(r, 0, 1, 4));
    const double eps = std::ldexp(1.0, -2 * (n + 1));
    ConditionOptions opts;
    opts.c_upper = 1.5;
    opts.t_grid = {0.0625, 0.015625};
    opts.growth_times = uniform_grid(1.0 - eps, 1.0 / 64);
    opts.growth_witnesses = {PiecewiseConstantFn::indicator(0, 1, 1 - eps, 1)};
    const SignalFamily cascade_fam{{0.75, 0.1875, 0.046875}, 3, {0, 1, 2, 3}};
    const auto rep = condition_report(sys, v, samples, cascade_fam, opts);
    CHECK(rep.upper_bound_holds);
    CHECK(rep.c_upper_used == 1.5);
    CHECK(rep.decay_refusal.has_value());
    CHECK_FALSE(rep.supports_a);
    CHECK_FALSE(rep.supports_b);
    bool flagged = false;
    for (const auto& note : rep.notes) flagged = flagged || note.find("V-bound without growth bound is insufficient") == 0;
    CHECK(flagged);
  }

  TEST_CASE("condition report: zero samples pass vacuously and failures are per sample") {
    const auto sys = scalar_system(-1.0);
    const Evaluator v = [](const SemigroupState& x) { return 0.5 * std::get<VectorXd>(x).squaredNorm(); };
    const std::vector<SemigroupState> zero = {VectorXd(VectorXd::Zero(1))};
    const auto rep = condition_report(sys, v, zero, SignalFamily{{1.0}, 0, {0}});
    CHECK(rep.upper_bound_holds);
    CHECK(rep.derivative_holds);
    CHECK(rep.samples[0].upper_ok);
    CHECK(rep.samples[0].lower_ok);

    const Evaluator broken = [](const SemigroupState& x) -> double {
      if (std::get<VectorXd>(x)(0) > 1.0) throw EstimationError("too big");
      return 0.5 * std::get<VectorXd>(x).squaredNorm();
    };
    const std::vector<SemigroupState> two = {VectorXd(VectorXd::Constant(1, 0.5)), VectorXd(VectorXd::Constant(1, 2.0))};
    const auto rep2 = condition_report(sys, broken, two, SignalFamily{{1.0}, 0, {0}});
    CHECK(rep2.samples[0].error.empty());
    CHECK(rep2.samples[1].error == "too big");
    CHECK_FALSE(rep2.upper_bound_holds);
    CHECK_FALSE(rep2.notes.empty());
    CHECK_THROWS_AS(condition_report(sys, v, std::vector<SemigroupState>{}, SignalFamily{{1.0}, 0, {0}}),
                    ContractViolation);
  }
}
