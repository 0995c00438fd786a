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

#include "glhs/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "glhs/labelcover.hpp"
#include "glhs/moments.hpp"
#include "glhs/stream.hpp"

namespace glhs {

Hypothesis Hypothesis::from_halfspace(Halfspace h, std::string id) {
  Hypothesis out;
  out.body_ = std::move(h);
  out.id_ = std::move(id);
  return out;
}

Hypothesis Hypothesis::from_disjunction(Disjunction d, std::string id) {
  Hypothesis out;
  out.body_ = std::move(d);
  out.id_ = std::move(id);
  return out;
}

Hypothesis Hypothesis::constant(std::uint8_t value, std::string id) {
  Hypothesis out;
  out.body_ = ConstantHypothesis{static_cast<std::uint8_t>(value ? 1 : 0)};
  out.id_ = std::move(id);
  return out;
}

Hypothesis Hypothesis::negated() const {
  Hypothesis out = *this;
  out.negate_ = !negate_;
  out.id_ = id_ + "!";
  return out;
}

std::size_t Hypothesis::dim() const {
  if (const auto* h = std::get_if<Halfspace>(&body_)) return h->dim();
  if (const auto* d = std::get_if<Disjunction>(&body_)) return d->dim;
  return 0;
}

std::uint8_t Hypothesis::eval(const BitMatrix& x) const {
  std::uint8_t v = 0;
  if (const auto* h = std::get_if<Halfspace>(&body_)) {
    v = h->eval(x);
  } else if (const auto* d = std::get_if<Disjunction>(&body_)) {
    v = d->eval(x);
  } else {
    v = std::get<ConstantHypothesis>(body_).value;
  }
  return negate_ ? static_cast<std::uint8_t>(1 - v) : v;
}

double AgreementReport::mean_given(int b) const {
  const auto n = label_counts[b ? 1 : 0];
  return n == 0 ? 0.0 : static_cast<double>(fires[b ? 1 : 0]) / static_cast<double>(n);
}

double AgreementReport::weighted_identity() const {
  const double n = static_cast<double>(label_counts[0] + label_counts[1]);
  if (n == 0.0) return 0.0;
  const double p1 = static_cast<double>(label_counts[1]) / n;
  return p1 * mean_given(1) + (1.0 - p1) * (1.0 - mean_given(0));
}

namespace {

struct Counts {
  std::array<std::uint64_t, 2> labels{};
  std::array<std::uint64_t, 2> fires{};
  std::uint64_t hits = 0;

  void add(std::uint8_t label, std::uint8_t out) {
    const int b = label ? 1 : 0;
    ++labels[b];
    fires[b] += out;
    hits += (out == label) ? 1 : 0;
  }
};

void check_shape(const Hypothesis& h, const BitMatrix& x) {
  const std::size_t d = h.dim();
  if (d != 0 && d != x.rows() * x.cols()) {
    throw DimensionError("hypothesis " + h.id() + " has dimension " + std::to_string(d) + ", examples have " +
                         std::to_string(x.rows() * x.cols()));
  }
}

AgreementReport finish(const Hypothesis& h, const Counts& c, std::string provenance) {
  AgreementReport r;
  r.hypothesis = h.id();
  r.provenance = std::move(provenance);
  r.rate = proportion(c.hits, c.labels[0] + c.labels[1]);
  r.label_counts = c.labels;
  r.fires = c.fires;
  return r;
}

}  // namespace

AgreementReport agreement(const Hypothesis& h, const std::vector<LabeledExample>& examples, std::string provenance,
                          unsigned workers) {
  if (!examples.empty()) check_shape(h, examples.front().features);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(examples.size(), 64));
  std::vector<Counts> partial(chunks);
  parallel_chunks(examples.size(), chunks, workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) partial[c].add(examples[i].label, h.eval(examples[i].features));
  });
  Counts total;
  for (const auto& p : partial) {
    for (int b = 0; b < 2; ++b) {
      total.labels[b] += p.labels[b];
      total.fires[b] += p.fires[b];
    }
    total.hits += p.hits;
  }
  return finish(h, total, std::move(provenance));
}

AgreementReport agreement_file(const Hypothesis& h, const std::string& path) {
  StreamReader reader(path);
  Counts c;
  LabeledExample ex;
  bool first = true;
  while (reader.next(ex)) {
    if (first) check_shape(h, ex.features);
    first = false;
    c.add(ex.label, h.eval(ex.features));
  }
  return finish(h, c, path + " " + reader.header().metadata);
}

Halfspace perceptron_train(const std::vector<LabeledExample>& examples, const LearnerConfig& cfg) {
  if (examples.empty()) throw PreconditionError("perceptron_train needs at least one example");
  if (cfg.epochs == 0) throw DomainError("epochs must be >= 1");
  const std::size_t rows = examples.front().features.rows();
  const std::size_t cols = examples.front().features.cols();
  const std::size_t n = rows * cols;
  for (const auto& ex : examples) {
    if (ex.features.rows() != rows || ex.features.cols() != cols) throw DimensionError("examples differ in shape");
  }

  // Averaging via w - u / c, u accumulating step-weighted updates.
  std::vector<double> w(n, 0.0), u(n, 0.0);
  double bias = 0.0, ubias = 0.0;
  double c = 1.0;
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    RngCursor rng(cfg.shuffle_seed, substream(0x5045, epoch));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      const auto& words = ex.features.flat().words();
      double s = bias;
      for (std::size_t wi = 0; wi < words.size(); ++wi) {
        for (std::uint64_t m = words[wi]; m; m &= m - 1) s += w[wi * 64 + std::countr_zero(m)];
      }
      const double y = ex.label ? 1.0 : -1.0;
      if (y * s <= 0.0) {
        const double eta = cfg.learning_rate / (1.0 + cfg.decay * static_cast<double>(step));
        for (std::size_t wi = 0; wi < words.size(); ++wi) {
          for (std::uint64_t m = words[wi]; m; m &= m - 1) {
            const std::size_t j = wi * 64 + std::countr_zero(m);
            w[j] += eta * y;
            u[j] += c * eta * y;
          }
        }
        bias += eta * y;
        ubias += c * eta * y;
      }
      c += 1.0;
      ++step;
    }
  }

  if (cfg.averaged) {
    for (std::size_t j = 0; j < n; ++j) w[j] -= u[j] / c;
    bias -= ubias / c;
  }
  return Halfspace(rows, cols, std::move(w), -bias);
}

Halfspace perceptron_train_file(const std::string& path, const LearnerConfig& cfg) {
  return perceptron_train(read_stream(path), cfg);
}

Halfspace centered_majority(const TestSpec& spec) {
  const std::size_t n = spec.k() * spec.R;
  const double theta = static_cast<double>(n) * block_coordinate_mean(spec, 0);
  return Halfspace(spec.k(), spec.R, std::vector<double>(n, 1.0), theta);
}

Halfspace gaussian_halfspace(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RngCursor rng(seed, 0x4748);
  std::vector<double> w(rows * cols);
  for (auto& x : w) x = rng.normal();
  return Halfspace(rows, cols, std::move(w), 0.0);
}

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Sum of `n` independent Bernoulli(q) coordinates.
std::vector<double> binomial(std::size_t n, double q) {
  std::vector<double> out{1.0};
  for (std::size_t i = 0; i < n; ++i) out = convolve(out, {1.0 - q, q});
  return out;
}

}  // namespace

std::vector<double> column_sum_distribution(const NoisySource& src) {
  const std::size_t k = src.k();
  const double g = src.gamma;
  std::vector<double> out(k + 1, 0.0);
  for (const Component& comp : src.base.components()) {
    std::vector<double> part;
    switch (comp.kind) {
      case ComponentKind::kExactlyOne:
        part = convolve(binomial(k - 1, g / 2.0), {g / 2.0, 1.0 - g / 2.0});
        break;
      case ComponentKind::kProductBernoulli:
        part = binomial(k, (1.0 - g) * comp.q + g / 2.0);
        break;
      case ComponentKind::kAllZero:
        part = binomial(k, g / 2.0);
        break;
    }
    for (std::size_t s = 0; s <= k; ++s) out[s] += comp.weight * part[s];
  }
  return out;
}

double majority_fire_probability(const TestSpec& spec, int b, double theta) {
  const auto col = column_sum_distribution(spec.noisy(b));
  std::vector<double> total{1.0};
  for (std::size_t j = 0; j < spec.R; ++j) total = convolve(total, col);
  double p = 0.0;
  for (std::size_t s = 0; s < total.size(); ++s) {
    if (static_cast<double>(s) - theta >= 0.0) p += total[s];
  }
  return p;
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("experiment plan must be a JSON object");
  ExperimentPlan p;
  try {
    p.k = j.value("k", p.k);
    p.eps = j.value("eps", p.eps);
    p.p = j.value("p", p.p);
    p.R = j.value("R", p.R);
    p.gamma = j.value("gamma", p.gamma);
    p.samples = j.value("samples", p.samples);
    p.seed = j.value("seed", p.seed);
    p.num_vertices = j.value("num_vertices", p.num_vertices);
    p.num_edges = j.value("num_edges", p.num_edges);
    p.t = j.value("t", p.t);
    p.decode_trials = j.value("decode_trials", p.decode_trials);
    p.workers = j.value("workers", p.workers);
    p.completeness = j.value("completeness", p.completeness);
    p.soundness = j.value("soundness", p.soundness);
    p.lemmas = j.value("lemmas", p.lemmas);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("experiment plan: ") + e.what());
  }
  return p;
}

nlohmann::json plan_to_json(const ExperimentPlan& p) {
  return {{"k", p.k},
          {"eps", p.eps},
          {"p", p.p},
          {"R", p.R},
          {"gamma", p.gamma},
          {"samples", p.samples},
          {"seed", p.seed},
          {"num_vertices", p.num_vertices},
          {"num_edges", p.num_edges},
          {"t", p.t},
          {"decode_trials", p.decode_trials},
          {"workers", p.workers},
          {"completeness", p.completeness},
          {"soundness", p.soundness},
          {"lemmas", p.lemmas}};
}

namespace {

void push_identity(std::vector<Record>& out, const AgreementReport& r) {
  const double resid = std::fabs(r.weighted_identity() - r.rate.rate);
  out.push_back(make_record("harness.identity", {{"hypothesis", r.hypothesis}}, resid, 1e-12, resid <= 1e-12));
}

}  // namespace

std::vector<Record> run_experiment(const ExperimentPlan& plan) {
  const double gamma = plan.gamma < 0.0 ? default_gamma(plan.k) : plan.gamma;
  const TestSpec spec = make_test_spec(plan.k, plan.eps, plan.p, plan.R, gamma);
  nlohmann::json base = plan_to_json(plan);
  base["gamma"] = gamma;
  std::vector<Record> out;

  const auto dict = sample_stream(SamplerKind::kDictTest, spec, nullptr, plan.seed, plan.samples, plan.workers);
  const PlantedInstance planted = gen_planted_unique(plan.num_vertices, plan.num_edges, plan.k, plan.R, plan.seed);
  const auto& inst = planted.instance;
  const auto ug =
      sample_stream(SamplerKind::kUniqueReduction, spec, &inst, plan.seed, plan.samples, plan.workers);
  const Disjunction disj = planted_disjunction(planted.labeling, inst.M);

  if (plan.completeness) {
    const double closed = dictator_or_acceptance(spec);
    std::vector<std::size_t> col0;
    for (std::size_t i = 0; i < plan.k; ++i) col0.push_back(i * plan.R);
    const auto dor = agreement(Hypothesis::from_disjunction(Disjunction(plan.k * plan.R, col0), "dictator-or"), dict,
                               "dict-test", plan.workers);
    out.push_back(make_record("completeness.dictator_or", base, dor.rate.rate, closed - 4.0 * dor.rate.sigma,
                              dor.rate.rate >= closed - 4.0 * dor.rate.sigma));
    push_identity(out, dor);

    const auto pd = agreement(Hypothesis::from_disjunction(disj, "planted-disjunction"), ug, "unique-reduction",
                              plan.workers);
    out.push_back(make_record("completeness.planted_disjunction", base, pd.rate.rate, closed - 4.0 * pd.rate.sigma,
                              pd.rate.rate >= closed - 4.0 * pd.rate.sigma));
    push_identity(out, pd);

    RngCursor rng(plan.seed, 0x4445);
    const Halfspace ph = disjunction_halfspace(disj, inst.num_vertices(), inst.M);
    const Labeling L = decode_labeling(ph, DecoderSpec{1, 0.0, 1}, rng);
    const auto frac = satisfaction_fractions(inst, L);
    out.push_back(make_record("completeness.decode_planted", base, frac.weak, 1.0, frac.weak == 1.0));
  }

  if (plan.soundness) {
    const auto maj = agreement(Hypothesis::from_halfspace(centered_majority(spec), "centered-majority"), dict,
                               "dict-test", plan.workers);
    out.push_back(exploratory_record("soundness.majority_gap", base, std::fabs(maj.gap()), 0.05));
    push_identity(out, maj);

    const Halfspace g = gaussian_halfspace(inst.num_vertices(), inst.M, plan.seed);
    const auto ga = agreement(Hypothesis::from_halfspace(g, "gaussian"), ug, "unique-reduction", plan.workers);
    out.push_back(exploratory_record("soundness.gaussian_gap", base, std::fabs(ga.gap()), 0.05));
    push_identity(out, ga);
    const DecoderSpec dspec{plan.t, 0.0, plan.decode_trials};
    const auto gw = weak_sat_rate_of_decoder(g, dspec, inst, plan.decode_trials, plan.seed);
    out.push_back(exploratory_record("soundness.gaussian_decode", base, gw.rate.rate, gw.rate.hi));

    const std::size_t half = ug.size() / 2;
    if (half > 0) {
      const std::vector<LabeledExample> train(ug.begin(), ug.begin() + static_cast<std::ptrdiff_t>(half));
      const std::vector<LabeledExample> test(ug.begin() + static_cast<std::ptrdiff_t>(half), ug.end());
      LearnerConfig cfg;
      cfg.epochs = 3;
      cfg.shuffle_seed = plan.seed;
      const Halfspace learned = perceptron_train(train, cfg);
      const auto la = agreement(Hypothesis::from_halfspace(learned, "perceptron"), test, "unique-reduction",
                                plan.workers);
      const auto c0 = agreement(Hypothesis::constant(0, "const0"), test, "unique-reduction", plan.workers);
      out.push_back(exploratory_record("soundness.perceptron_agreement", base, la.rate.rate,
                                       std::max(c0.rate.rate, 1.0 - c0.rate.rate)));
      push_identity(out, la);
      const auto lw = weak_sat_rate_of_decoder(learned, dspec, inst, plan.decode_trials, plan.seed);
      out.push_back(exploratory_record("soundness.perceptron_decode", base, lw.rate.rate, lw.rate.hi));
    }
  }

  if (plan.lemmas) {
    const double mg = moment_gap(spec.pair.d0, spec.pair.d1, 4);
    out.push_back(make_record("lemma.moment_gap", base, mg, 1e-9, mg <= 1e-9));
    const double ng = moment_gap(spec.noisy0, spec.noisy1, 4);
    out.push_back(make_record("lemma.noisy_moment_gap", base, ng, 1e-9, ng <= 1e-9));
    const double lin = std::fabs(block_coordinate_mean(spec, 1) - block_coordinate_mean(spec, 0));
    out.push_back(make_record("lemma.linear_gap", base, lin, 1e-12, lin <= 1e-12));
    const auto smooth = audit_smoothness_all(inst);
    out.push_back(make_record("lemma.unique_smoothness", base, smooth.value, 0.0, smooth.value == 0.0));
  }
  return out;
}

}  // namespace glhs
