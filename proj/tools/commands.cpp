// Copyright 2026 The glhs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "glhs/concentration.hpp"
#include "glhs/core.hpp"
#include "glhs/halfspace.hpp"
#include "glhs/harness.hpp"
#include "glhs/invariance.hpp"
#include "glhs/labelcover.hpp"
#include "glhs/moments.hpp"
#include "glhs/reduction.hpp"
#include "glhs/stream.hpp"

namespace glhs::cli {

namespace {

using nlohmann::json;

double parse_real(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw DomainError("invalid value for " + flag + ": '" + text + "' (expected a number or 'paper')");
  }
  return v;
}

// Test parameters shared by sample, reduce, dict-test and verify moments.
struct SpecArgs {
  std::size_t k = 12;
  std::string eps = "0.8";
  std::string p = "0.25";
  std::size_t R = 16;
  std::string gamma = "default";

  void add(CLI::App* sub, bool with_R = true) {
    sub->add_option("--k", k, "gadget arity k")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    sub->add_option("--eps", eps, "ExactlyOne weight in D1, or 'paper' for 1/sqrt(k)");
    sub->add_option("--p", p, "ProductBernoulli base rate, or 'paper' for k^(-1/3)");
    if (with_R) sub->add_option("--R", R, "columns per block")->check(CLI::PositiveNumber);
    sub->add_option("--gamma", gamma, "noise rate, or 'default' for 1/k^2");
  }
  double eps_value() const { return eps == "paper" ? paper_eps(k) : parse_real("--eps", eps); }
  double p_value() const { return p == "paper" ? paper_p(k) : parse_real("--p", p); }
  double gamma_value() const { return gamma == "default" ? default_gamma(k) : parse_real("--gamma", gamma); }
  TestSpec spec(std::size_t cols) const { return make_test_spec(k, eps_value(), p_value(), cols, gamma_value()); }
  json echo() const { return {{"k", k}, {"eps", eps_value()}, {"p", p_value()}, {"R", R}, {"gamma", gamma_value()}}; }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_examples(const std::string& path, const std::vector<LabeledExample>& ex, std::size_t rows,
                    std::size_t cols, const json& meta) {
  StreamHeader h;
  h.rows = static_cast<std::uint32_t>(rows);
  h.cols = static_cast<std::uint32_t>(cols);
  h.metadata = meta.dump();
  write_stream(path, h, ex);
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) w.push_back(parse_real("--weights", item));
  if (w.empty()) throw DomainError("--weights must list at least one number");
  return w;
}

void add_gen_lc(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("gen-lc", "generate a planted Label Cover instance");
  struct Args {
    std::string kind = "unique";
    std::size_t vertices = 30, edges = 60, k = 3, M = 16, N = 16, d = 1, R = 16;
    std::size_t num_w = 8, num_v = 8, degree = 4;
    bool affine = false;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  sub->add_option("--kind", a->kind, "unique | projection | smooth-from-bipartite")
      ->check(CLI::IsMember({"unique", "projection", "smooth-from-bipartite"}));
  sub->add_option("--vertices", a->vertices, "number of vertices");
  sub->add_option("--edges", a->edges, "number of hyperedges");
  sub->add_option("--k", a->k, "hyperedge arity");
  sub->add_option("--R", a->R, "label count for unique instances");
  sub->add_option("--M", a->M, "label count");
  sub->add_option("--N", a->N, "projected label count");
  sub->add_option("--d", a->d, "maximum preimage size");
  sub->add_option("--num-w", a->num_w, "bipartite W side size");
  sub->add_option("--num-v", a->num_v, "bipartite V side size");
  sub->add_option("--degree", a->degree, "bipartite W-side degree");
  sub->add_flag("--affine", a->affine, "affine-map bipartite fixture over a prime M with known smoothness");
  sub->add_option("--seed", a->seed, "master seed")->required();
  sub->add_option("--out", a->out, "instance JSON path")->required();
  sub->callback([a, &st] {
    LabelCoverInstance inst;
    if (a->kind == "unique") {
      inst = gen_planted_unique(a->vertices, a->edges, a->k, a->R, a->seed).instance;
    } else if (a->kind == "projection") {
      inst = gen_planted_projection(a->vertices, a->edges, a->k, a->M, a->N, a->d, a->seed).instance;
    } else if (a->affine) {
      inst = smooth_from_bipartite(gen_affine_bipartite(a->num_v, a->degree, a->M, a->d), a->k);
    } else {
      const auto pb = gen_planted_bipartite(a->num_w, a->num_v, a->degree, a->M, a->N, a->d, a->seed);
      inst = smooth_from_bipartite(pb.instance, a->k);
      inst.planted = pb.v_labels;
    }
    write_instance(a->out, inst);
    const json params = {{"kind", a->kind}, {"seed", a->seed}, {"out", a->out}};
    st.records.push_back(exploratory_record("gen-lc.edges", params, static_cast<double>(inst.edges.size()), 0.0));
  });
}

void add_sample(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("sample", "write a dictatorship-test example stream");
  auto spec = std::make_shared<SpecArgs>();
  auto count = std::make_shared<std::uint64_t>(1000);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  spec->add(sub);
  sub->add_option("--count", *count, "number of examples");
  sub->add_option("--seed", *seed, "master seed")->required();
  sub->add_option("--out", *out, "output stream path")->required();
  sub->callback([=, &st] {
    const TestSpec ts = spec->spec(spec->R);
    const auto ex = sample_stream(SamplerKind::kDictTest, ts, nullptr, *seed, *count, st.workers);
    json meta = spec->echo();
    meta["command"] = "sample";
    meta["seed"] = *seed;
    meta["count"] = *count;
    write_examples(*out, ex, ts.k(), ts.R, meta);
    st.records.push_back(exploratory_record("sample.count", meta, static_cast<double>(ex.size()), 0.0));
  });
}

void add_reduce(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("reduce", "sample the reduction of a Label Cover instance");
  auto spec = std::make_shared<SpecArgs>();
  auto instance = std::make_shared<std::string>();
  auto figure = std::make_shared<int>(2);
  auto count = std::make_shared<std::uint64_t>(1000);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  spec->add(sub, false);
  sub->add_option("--instance", *instance, "instance JSON path")->required()->check(CLI::ExistingFile);
  sub->add_option("--figure", *figure, "1: unique reduction (noise before pullback), 2: general")
      ->check(CLI::IsMember({1, 2}));
  sub->add_option("--count", *count, "number of examples");
  sub->add_option("--seed", *seed, "master seed")->required();
  sub->add_option("--out", *out, "output stream path")->required();
  sub->callback([=, &st] {
    const LabelCoverInstance inst = read_instance(*instance);
    spec->k = inst.k;
    const TestSpec ts = spec->spec(inst.N);
    const SamplerKind kind = *figure == 1 ? SamplerKind::kUniqueReduction : SamplerKind::kLabelCoverReduction;
    const auto ex = sample_stream(kind, ts, &inst, *seed, *count, st.workers);
    json meta = spec->echo();
    meta["R"] = inst.N;
    meta["command"] = "reduce";
    meta["instance"] = *instance;
    meta["figure"] = *figure;
    meta["seed"] = *seed;
    meta["count"] = *count;
    write_examples(*out, ex, inst.num_vertices(), inst.M, meta);
    st.records.push_back(exploratory_record("reduce.count", meta, static_cast<double>(ex.size()), 0.0));
  });
}

void add_dict_test(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("dict-test", "run the dictatorship test against a hypothesis");
  auto spec = std::make_shared<SpecArgs>();
  auto hyp = std::make_shared<std::string>("dictator-or");
  auto halfspace = std::make_shared<std::string>();
  auto column = std::make_shared<std::size_t>(0);
  auto samples = std::make_shared<std::uint64_t>(100000);
  auto seed = std::make_shared<std::uint64_t>(0);
  spec->add(sub);
  sub->add_option("--hypothesis", *hyp, "dictator-or | majority | const0 | const1")
      ->check(CLI::IsMember({"dictator-or", "majority", "const0", "const1"}));
  sub->add_option("--halfspace", *halfspace, "evaluate this halfspace JSON instead")->check(CLI::ExistingFile);
  sub->add_option("--column", *column, "dictator column j");
  sub->add_option("--samples", *samples, "number of test queries");
  sub->add_option("--seed", *seed, "master seed")->required();
  sub->callback([=, &st] {
    const TestSpec ts = spec->spec(spec->R);
    if (*column >= ts.R) throw DomainError("--column must be < R");
    const auto ex = sample_stream(SamplerKind::kDictTest, ts, nullptr, *seed, *samples, st.workers);
    json params = spec->echo();
    params["seed"] = *seed;
    params["samples"] = *samples;
    params["hypothesis"] = halfspace->empty() ? *hyp : *halfspace;

    Hypothesis h = Hypothesis::constant(0, "const0");
    if (!halfspace->empty()) {
      h = Hypothesis::from_halfspace(read_halfspace(*halfspace), *halfspace);
    } else if (*hyp == "dictator-or") {
      std::vector<std::size_t> lits;
      for (std::size_t i = 0; i < ts.k(); ++i) lits.push_back(i * ts.R + *column);
      h = Hypothesis::from_disjunction(Disjunction(ts.k() * ts.R, lits), "dictator-or");
    } else if (*hyp == "majority") {
      h = Hypothesis::from_halfspace(centered_majority(ts), "majority");
    } else if (*hyp == "const1") {
      h = Hypothesis::constant(1, "const1");
    }
    const AgreementReport r = agreement(h, ex, "dict-test seed=" + std::to_string(*seed), st.workers);
    std::cerr << std::setprecision(6) << "acceptance " << r.rate.rate << " [" << r.rate.lo << ", " << r.rate.hi
              << "] E[h|1]=" << r.mean_given(1) << " E[h|0]=" << r.mean_given(0) << "\n";
    if (halfspace->empty() && *hyp == "dictator-or") {
      const double closed = dictator_or_acceptance(ts);
      const double dev = std::fabs(r.rate.rate - closed);
      params["closed_form"] = closed;
      st.records.push_back(make_record("dict-test.dictator_or", params, r.rate.rate, closed,
                                       dev <= 4.0 * r.rate.sigma));
    } else {
      st.records.push_back(exploratory_record("dict-test.acceptance", params, r.rate.rate, 0.5));
    }
    const double resid = std::fabs(r.weighted_identity() - r.rate.rate);
    st.records.push_back(make_record("dict-test.identity", params, resid, 1e-12, resid <= 1e-12));
  });
}

void add_verify(CLI::App& app, CliState& st) {
  auto* verify = app.add_subcommand("verify", "run a lemma or module check");
  verify->require_subcommand(1);

  {
    auto* sub = verify->add_subcommand("moments", "moment matching and feasibility of (D0, D1)");
    auto spec = std::make_shared<SpecArgs>();
    spec->add(sub, false);
    sub->callback([=, &st] {
      const std::size_t k = spec->k;
      const double eps = spec->eps_value(), p = spec->p_value(), gamma = spec->gamma_value();
      json params = {{"k", k}, {"eps", eps}, {"p", p}, {"gamma", gamma}};
      // Throws FeasibilityError naming the failing weight.
      const GadgetPair pair = build_pair(k, eps, p);
      const auto res = system_residuals(k, eps, p, pair.d0_weights);
      std::cout << std::setprecision(17) << "weights";
      for (double w : pair.d0_weights) std::cout << " " << w;
      std::cout << "\nresiduals";
      for (double r : res) std::cout << " " << r;
      std::cout << "\n";
      double worst = 0.0;
      for (double r : res) worst = std::max(worst, std::fabs(r));
      st.records.push_back(make_record("moments.residual", params, worst, 1e-12, worst <= 1e-12));
      const double g = moment_gap(pair.d0, pair.d1, 4);
      st.records.push_back(make_record("moments.gap", params, g, 1e-9, g <= 1e-9));
      const NoisySource n0(pair.d0, gamma), n1(pair.d1, gamma);
      const double ng = moment_gap(n0, n1, 4);
      st.records.push_back(make_record("moments.noisy_gap", params, ng, 1e-9, ng <= 1e-9));
      const auto closed = closed_form_d0_weights(k, eps, p);
      double dw = 0.0;
      for (int i = 0; i < 4; ++i) dw = std::max(dw, std::fabs(closed[i] - pair.d0_weights[i]));
      st.records.push_back(make_record("moments.closed_form", params, dw, 1e-12, dw <= 1e-12));
      if (k <= 12) {
        double od = 0.0;
        for (std::size_t s = 1; s <= 4 && s <= k; ++s) {
          std::vector<std::size_t> S(s);
          for (std::size_t i = 0; i < s; ++i) S[i] = i;
          od = std::max(od, std::fabs(enum_oracle_moment(pair.d0, S) - exact_moment(pair.d0, S)));
          od = std::max(od, std::fabs(enum_oracle_moment(pair.d1, S) - exact_moment(pair.d1, S)));
        }
        st.records.push_back(make_record("moments.enum_oracle", params, od, 1e-12, od <= 1e-12));
      }
    });
  }

  {
    auto* sub = verify->add_subcommand("critical-index", "tau-critical index and geometric decay");
    auto weights = std::make_shared<std::string>();
    auto random_n = std::make_shared<std::size_t>(0);
    auto tau = std::make_shared<double>(0.3);
    auto l = std::make_shared<std::size_t>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--weights", *weights, "comma-separated weight vector");
    sub->add_option("--random", *random_n, "draw a random vector of this length instead");
    sub->add_option("--tau", *tau, "regularity parameter")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--l", *l, "also check the geometric-decay chain up to l");
    sub->add_option("--seed", *seed, "seed for --random");
    sub->callback([=, &st] {
      std::vector<double> w;
      if (!weights->empty()) {
        w = parse_weights(*weights);
      } else if (*random_n > 0) {
        RngCursor rng(*seed, 0x4349);
        for (std::size_t i = 0; i < *random_n; ++i) w.push_back(rng.normal() * std::pow(0.5, rng.below(8)));
      } else {
        throw DomainError("verify critical-index needs --weights or --random");
      }
      const auto rep = critical_index(w, *tau);
      const double c = rep.c_tau == kInfiniteIndex ? INFINITY : static_cast<double>(rep.c_tau);
      json params = {{"n", w.size()}, {"tau", *tau}, {"l", *l}};
      std::cout << "c_tau " << (rep.c_tau == kInfiniteIndex ? std::string("inf") : std::to_string(rep.c_tau))
                << "\n";
      st.records.push_back(exploratory_record("critical-index.c_tau", params, c, 0.0));
      if (*l > 0) {
        const DecayCheck dc = check_geometric_decay(w, *tau, *l);
        if (!dc.ok) std::cerr << "decay chain failed: " << dc.failure << "\n";
        st.records.push_back(make_record("critical-index.decay", params, dc.ok ? 0.0 : 1.0, 0.0, dc.ok));
      }
    });
  }

  {
    auto* sub = verify->add_subcommand("small-ball", "unique point and noisy small-ball checks");
    auto T = std::make_shared<std::size_t>(12);
    auto gamma = std::make_shared<double>(0.1);
    auto trials = std::make_shared<std::size_t>(20000);
    auto vectors = std::make_shared<std::size_t>(10);
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--T", *T, "vector length")->check(CLI::Range(std::size_t{1}, std::size_t{16}));
    sub->add_option("--gamma", *gamma, "noise rate")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--trials", *trials, "Monte Carlo trials");
    sub->add_option("--vectors", *vectors, "random geometric vectors");
    sub->add_option("--seed", *seed, "master seed");
    sub->callback([=, &st] {
      RngCursor rng(*seed, 0x5342);
      std::size_t worst = 0;
      bool noisy_ok = true;
      double noisy_worst = 0.0;
      const std::vector<BaseDistribution> catalog = {point_mass_distribution(BitVector(*T), "zero"),
                                                     product_distribution(*T, 0.5), product_distribution(*T, 0.05)};
      for (std::size_t v = 0; v < *vectors; ++v) {
        std::vector<double> w(*T);
        w[0] = 1.0 + rng.uniform();
        for (std::size_t i = 1; i < *T; ++i) w[i] = w[i - 1] * (0.1 + 0.9 * rng.uniform()) / 3.0;
        const double len = w.back() / 3.0;
        for (int q = 0; q < 10; ++q) {
          const double a = rng.uniform() * 3.0 - 0.5;
          worst = std::max(worst, unique_point_in_interval(w, IntervalQuery(a, a + len)));
        }
        for (const auto& D : catalog) {
          const auto est = noisy_small_ball(w, D, *gamma, rng.uniform() * 2.0, *trials, rng.next());
          noisy_ok = noisy_ok && est.pass;
          noisy_worst = std::max(noisy_worst, est.estimate.rate - est.bound);
        }
      }
      json params = {{"T", *T}, {"gamma", *gamma}, {"trials", *trials}, {"vectors", *vectors}, {"seed", *seed}};
      st.records.push_back(make_record("small-ball.unique_point", params, static_cast<double>(worst), 1.0, worst <= 1));
      st.records.push_back(make_record("small-ball.noisy", params, noisy_worst, 0.0, noisy_ok));
    });
  }

  {
    auto* sub = verify->add_subcommand("spread", "spread lemma and variance claim");
    auto n = std::make_shared<std::size_t>(200);
    auto gamma = std::make_shared<double>(0.5);
    auto trials = std::make_shared<std::size_t>(20000);
    auto cases = std::make_shared<std::size_t>(10);
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--n", *n, "dimension");
    sub->add_option("--gamma", *gamma, "noise rate")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--trials", *trials, "Monte Carlo trials");
    sub->add_option("--cases", *cases, "random (w, D, interval) cases");
    sub->add_option("--seed", *seed, "master seed");
    sub->callback([=, &st] {
      RngCursor rng(*seed, 0x5350);
      bool ok = true, var_ok = true;
      double worst = -INFINITY;
      for (std::size_t c = 0; c < *cases; ++c) {
        std::vector<double> w(*n);
        for (auto& x : w) x = rng.normal();
        const double norm = l2_norm(w);
        double tau = 0.0;
        for (auto& x : w) {
          x /= norm;
          tau = std::max(tau, std::fabs(x));
        }
        const auto D = product_distribution(*n, rng.uniform());
        const double a = rng.normal() * 0.5, width = rng.uniform() * 0.2;
        const auto est = spread_estimate(w, tau, D, *gamma, IntervalQuery(a, a + width), *trials, rng.next());
        ok = ok && est.pass;
        worst = std::max(worst, est.estimate.rate - est.bound);
        var_ok = var_ok && variance_claim_estimate(w, tau, *gamma, *trials, rng.next()).pass;
      }
      json params = {{"n", *n}, {"gamma", *gamma}, {"trials", *trials}, {"cases", *cases}, {"seed", *seed}};
      st.records.push_back(make_record("spread.lemma", params, worst, 0.0, ok));
      st.records.push_back(make_record("spread.variance_claim", params, var_ok ? 0.0 : 1.0, 0.0, var_ok));
    });
  }

  {
    auto* sub = verify->add_subcommand("invariance", "exact invariance checks on micro families");
    auto spec = std::make_shared<SpecArgs>();
    auto m = std::make_shared<std::size_t>(3);
    auto families = std::make_shared<std::size_t>(10);
    auto alpha = std::make_shared<double>(0.25);
    auto seed = std::make_shared<std::uint64_t>(0);
    spec->R = 3;
    spec->add(sub);
    sub->add_option("--m", *m, "coordinates per block")->check(CLI::Range(std::size_t{1}, std::size_t{8}));
    sub->add_option("--families", *families, "random linear forms");
    sub->add_option("--alpha", *alpha, "smoothing width for the sgn bound");
    sub->add_option("--seed", *seed, "master seed");
    sub->callback([=, &st] {
      const TestSpec ts = spec->spec(spec->R);
      if (*m > ts.k()) throw DomainError("--m must be <= k");
      const EnsembleFamily A(ts.R, marginal_ensemble(ts.noisy0, *m));
      const EnsembleFamily B(ts.R, marginal_ensemble(ts.noisy1, *m));
      RngCursor rng(*seed, 0x4956);
      bool quartic_ok = true, cubic_ok = true, sgn_ok = true, hybrid_ok = true;
      for (std::size_t f = 0; f < *families; ++f) {
        BlockWeights l(ts.R, std::vector<double>(*m));
        for (auto& blk : l) {
          for (auto& x : blk) x = rng.normal() * 0.3;
        }
        const double theta = rng.normal() * 0.2;
        const auto quartic = invariance_gap(A, B, l, theta, [](double t) { return t * t * t * t; }, 24.0);
        quartic_ok = quartic_ok && quartic.gap <= quartic.bound + 1e-9;
        const auto cubic = invariance_gap(A, B, l, theta, [](double t) { return t * t * t - 2.0 * t; }, 0.0);
        cubic_ok = cubic_ok && cubic.gap <= 1e-12;
        const auto hyb = hybrid_steps(A, B, l, theta, [](double t) { return t * t * t * t; }, 24.0);
        double sum = 0.0;
        for (std::size_t i = 0; i < hyb.steps.size(); ++i) {
          sum += hyb.steps[i];
          hybrid_ok = hybrid_ok && std::fabs(hyb.steps[i]) <= hyb.step_bounds[i] + 1e-9;
        }
        hybrid_ok = hybrid_ok && std::fabs(sum - hyb.total) <= 1e-9;
        const auto sg = sgn_gap_bound(A, B, l, theta, *alpha);
        sgn_ok = sgn_ok && sg.pass;
      }
      json params = spec->echo();
      params["m"] = *m;
      params["families"] = *families;
      params["seed"] = *seed;
      st.records.push_back(make_record("invariance.quartic", params, quartic_ok ? 0.0 : 1.0, 0.0, quartic_ok));
      st.records.push_back(make_record("invariance.cubic_zero", params, cubic_ok ? 0.0 : 1.0, 0.0, cubic_ok));
      st.records.push_back(make_record("invariance.hybrid", params, hybrid_ok ? 0.0 : 1.0, 0.0, hybrid_ok));
      st.records.push_back(make_record("invariance.sgn", params, sgn_ok ? 0.0 : 1.0, 0.0, sgn_ok));
    });
  }

  {
    auto* sub = verify->add_subcommand("smoothness", "smoothness and preimage audits of an instance");
    auto instance = std::make_shared<std::string>();
    auto J = std::make_shared<double>(0.0);
    auto d = std::make_shared<std::size_t>(0);
    sub->add_option("--instance", *instance, "instance JSON path")->required()->check(CLI::ExistingFile);
    sub->add_option("--J", *J, "assert smoothness <= 1/J");
    sub->add_option("--d", *d, "assert preimage size <= d");
    sub->callback([=, &st] {
      const LabelCoverInstance inst = read_instance(*instance);
      const auto audit = audit_smoothness_all(inst);
      const std::size_t pre = audit_preimage(inst);
      json params = {{"instance", *instance}, {"J", *J}, {"d", *d}, {"exact", audit.exact}};
      std::cout << std::setprecision(17) << "smoothness " << audit.value << "\npreimage " << pre
                << "\nconnected " << (inst.is_connected() ? "yes" : "no") << "\n";
      if (*J > 0.0) {
        const double bound = 1.0 / *J;
        st.records.push_back(make_record("smoothness.value", params, audit.value, bound, audit.value <= bound));
      } else {
        st.records.push_back(exploratory_record("smoothness.value", params, audit.value, 0.0));
      }
      if (*d > 0) {
        st.records.push_back(make_record("smoothness.preimage", params, static_cast<double>(pre),
                                         static_cast<double>(*d), pre <= *d));
      }
    });
  }

  {
    auto* sub = verify->add_subcommand("niceness", "fraction of beta-nice hyperedges");
    auto instance = std::make_shared<std::string>();
    auto halfspace = std::make_shared<std::string>();
    auto tau = std::make_shared<double>(0.25);
    auto beta = std::make_shared<double>(-1.0);
    auto reading = std::make_shared<std::string>("prefix");
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--instance", *instance, "instance JSON path")->required()->check(CLI::ExistingFile);
    sub->add_option("--halfspace", *halfspace, "halfspace JSON (default: Gaussian weights)")
        ->check(CLI::ExistingFile);
    sub->add_option("--tau", *tau, "regularity parameter");
    sub->add_option("--beta", *beta, "niceness threshold (default 2 tau)");
    sub->add_option("--reading", *reading, "regularizing set: prefix | critical-set")
        ->check(CLI::IsMember({"prefix", "critical-set"}));
    sub->add_option("--seed", *seed, "seed for the Gaussian halfspace");
    sub->callback([=, &st] {
      const LabelCoverInstance inst = read_instance(*instance);
      const Halfspace h =
          halfspace->empty() ? gaussian_halfspace(inst.num_vertices(), inst.M, *seed) : read_halfspace(*halfspace);
      const double b = *beta < 0.0 ? 2.0 * *tau : *beta;
      const auto rd = *reading == "prefix" ? RegularizingReading::kPrefix : RegularizingReading::kCriticalSet;
      const double nice = edge_niceness_audit(inst, h, *tau, b, rd);
      const double smooth = audit_smoothness_all(inst).value;
      const double d = static_cast<double>(audit_preimage(inst));
      const double bound = std::min(1.0, static_cast<double>(inst.k) * std::pow(d, 16.0) * smooth);
      json params = {{"instance", *instance}, {"tau", *tau}, {"beta", b}, {"reading", *reading},
                     {"d", d},               {"smoothness", smooth}};
      st.records.push_back(make_record("niceness.non_nice_fraction", params, 1.0 - nice, bound,
                                       1.0 - nice <= bound));
    });
  }
}

void add_learn(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("learn", "train an averaged perceptron on an example stream");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto cfg = std::make_shared<LearnerConfig>();
  auto plain = std::make_shared<bool>(false);
  sub->add_option("--input", *input, "example stream")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", *out, "halfspace JSON path")->required();
  sub->add_option("--epochs", cfg->epochs, "passes over the data")->check(CLI::PositiveNumber);
  sub->add_option("--lr", cfg->learning_rate, "initial learning rate");
  sub->add_option("--decay", cfg->decay, "learning-rate decay");
  sub->add_option("--seed", cfg->shuffle_seed, "shuffling seed");
  sub->add_flag("--no-average", *plain, "return the last iterate");
  sub->callback([=, &st] {
    LearnerConfig c = *cfg;
    c.averaged = !*plain;
    const auto ex = read_stream(*input);
    const Halfspace h = perceptron_train(ex, c);
    write_halfspace(*out, h);
    const auto r = agreement(Hypothesis::from_halfspace(h, "perceptron"), ex, *input, st.workers);
    json params = {{"input", *input}, {"epochs", c.epochs}, {"seed", c.shuffle_seed}, {"averaged", c.averaged}};
    st.records.push_back(exploratory_record("learn.training_agreement", params, r.rate.rate, 0.5));
  });
}

void add_decode(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("decode", "decode a halfspace into labelings and measure weak satisfaction");
  auto halfspace = std::make_shared<std::string>();
  auto instance = std::make_shared<std::string>();
  auto t = std::make_shared<std::size_t>(1);
  auto trials = std::make_shared<std::size_t>(100);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto min_rate = std::make_shared<double>(-1.0);
  sub->add_option("--halfspace", *halfspace, "halfspace JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--instance", *instance, "instance JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--t", *t, "list size")->check(CLI::PositiveNumber);
  sub->add_option("--trials", *trials, "labeling draws")->check(CLI::PositiveNumber);
  sub->add_option("--seed", *seed, "master seed");
  sub->add_option("--min-rate", *min_rate, "assert the weak rate is at least this");
  sub->callback([=, &st] {
    const LabelCoverInstance inst = read_instance(*instance);
    const Halfspace h = read_halfspace(*halfspace);
    const auto r = weak_sat_rate_of_decoder(h, DecoderSpec{*t, 0.0, *trials}, inst, *trials, *seed);
    json params = {{"halfspace", *halfspace}, {"instance", *instance}, {"t", *t}, {"trials", *trials},
                   {"seed", *seed},           {"lo", r.rate.lo},      {"hi", r.rate.hi}};
    std::cerr << std::setprecision(6) << "weak " << r.rate.rate << " [" << r.rate.lo << ", " << r.rate.hi << "]\n";
    if (*min_rate >= 0.0) {
      st.records.push_back(make_record("decode.weak_rate", params, r.rate.rate, *min_rate, r.rate.rate >= *min_rate));
    } else {
      st.records.push_back(exploratory_record("decode.weak_rate", params, r.rate.rate, 0.0));
    }
  });
}

void add_report(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("report", "fold record files into a summary");
  auto files = std::make_shared<std::vector<std::string>>();
  sub->add_option("files", *files, "record files")->required()->check(CLI::ExistingFile);
  sub->callback([=, &st] {
    ReportSummary s;
    for (const auto& f : *files) s = fold_records(read_records(f), s);
    std::cout << summary_to_json(s).dump(2) << "\n";
    if (!s.ok()) st.checks_failed = true;
  });
}

void add_experiment(CLI::App& app, CliState& st) {
  auto* sub = app.add_subcommand("experiment", "completeness, soundness and lemma runs from a plan");
  auto plan_path = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  sub->add_option("--plan", *plan_path, "plan JSON (defaults for missing fields)")->check(CLI::ExistingFile);
  sub->add_option("--seed", *seed, "master seed")->required();
  sub->callback([=, &st] {
    ExperimentPlan plan;
    if (!plan_path->empty()) {
      json j;
      try {
        j = json::parse(read_text(*plan_path));
      } catch (const json::parse_error& e) {
        throw FormatError(*plan_path + ": " + e.what());
      }
      plan = plan_from_json(j);
    }
    plan.seed = *seed;
    plan.workers = st.workers;
    auto recs = run_experiment(plan);
    st.records.insert(st.records.end(), recs.begin(), recs.end());
  });
}

}  // namespace

void register_commands(CLI::App& app, CliState& st) {
  add_gen_lc(app, st);
  add_sample(app, st);
  add_reduce(app, st);
  add_dict_test(app, st);
  add_verify(app, st);
  add_learn(app, st);
  add_decode(app, st);
  add_report(app, st);
  add_experiment(app, st);
}

int flush_records(CliState& st) {
  bool failed = st.checks_failed;
  for (const auto& r : st.records) {
    std::cout << record_to_line(r) << "\n";
    failed = failed || r.failed();
  }
  if (!st.report_path.empty()) append_records(st.report_path, st.records);
  return failed ? 1 : 0;
}

}  // namespace glhs::cli
