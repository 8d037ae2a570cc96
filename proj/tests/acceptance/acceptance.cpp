// Acceptance suite. Prints one PASS/FAIL line per criterion; the exit code is
// nonzero when any selected criterion fails. `--criterion N` runs one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dialtree/action_tree.hpp"
#include "dialtree/aux_labels.hpp"
#include "dialtree/codec.hpp"
#include "dialtree/evaluator.hpp"
#include "dialtree/scheduler.hpp"
#include "dialtree/similarity_matrix.hpp"
#include "dialtree/synth.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/ted_oracle.hpp"

using namespace dialtree;

namespace {

// Tolerances and sizes.
constexpr double kCombinedTol = 1e-9;
constexpr std::size_t kTedMaxNodes = 5;
constexpr int kTedLabels = 3;
constexpr double kTedBudgetSeconds = 60.0;
constexpr double kSimilarityTarget = 0.6667;
constexpr double kSimilarityTol = 1e-4;
constexpr double kScheduleP30 = 0.332448;
constexpr double kScheduleTol = 1e-6;
constexpr std::size_t kScheduleGrid = 1000;
constexpr std::size_t kKeepDraws = 100000;
constexpr double kKeepSigmas = 3.0;
constexpr double kTvTol = 0.02;
constexpr std::size_t kReplacementDraws = 1000000;
constexpr double kSamplerBudgetSeconds = 30.0;
constexpr double kLn2Tol = 1e-9;
constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-5;
constexpr std::size_t kFdInstances = 100;
constexpr std::size_t kCodecTrials = 10000;
constexpr std::size_t kPerfActions = 1000;
constexpr double kPerfBudgetSeconds = 60.0;
constexpr unsigned kPerfThreads = 8;
constexpr double kPerfSpeedup = 3.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Outcome combined_formula() {
  const double a = combined_score(93.60, 83.60, 20.67);
  const double b = combined_score(92.50, 84.00, 19.78);
  const bool ok = std::abs(a - 109.27) <= kCombinedTol && std::abs(b - 108.03) <= kCombinedTol;
  return {ok, fmt("row1=%.12f row2=%.12f", a, b)};
}

Outcome ted_oracle_sweep() {
  const auto start = std::chrono::steady_clock::now();
  const oracle::EditGraph graph(kTedLabels, kTedMaxNodes);
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  std::vector<ActionTree> trees;
  for (auto i : graph.trees()) trees.push_back(oracle::to_action_tree(graph.state(i).front(), alphabet));
  std::size_t pairs = 0, mismatches = 0;
  std::string first_bad;
  for (std::size_t x = 0; x < trees.size(); ++x) {
    const auto dist = graph.distances_from(graph.trees()[x]);
    for (std::size_t y = 0; y < trees.size(); ++y) {
      ++pairs;
      const int expected = dist[graph.trees()[y]];
      if (expected < 0 || tree_edit_distance(trees[x], trees[y]) != static_cast<double>(expected)) {
        if (!mismatches++)
          first_bad = oracle::encode(graph.state(graph.trees()[x])) + " vs " +
                      oracle::encode(graph.state(graph.trees()[y]));
      }
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < kTedBudgetSeconds,
          fmt("trees=%zu pairs=%zu mismatches=%zu %s time=%.1fs", trees.size(), pairs, mismatches,
              first_bad.c_str(), secs)};
}

Outcome similarity_properties() {
  const auto o = fixtures::ontology();
  SynthConfig cfg;
  cfg.seed = 31;
  cfg.dialogs = 120;
  const auto c = generate_corpus(cfg);
  auto vocab = collect_vocab(c.dialogs);
  const auto m = build_matrix(vocab, c.ontology);
  std::size_t bad_diag = 0, bad_sym = 0, bad_range = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      const float v = m.at(i, j);
      if (i == j && v != 1.0f) ++bad_diag;
      if (v != m.at(j, i)) ++bad_sym;
      if (!(v >= 0.0f && v <= 1.0f)) ++bad_range;
    }
  const ActionVocab pair({"[restaurant] [inform] address name [offerbook]", "[restaurant] [inform] address"});
  const float s = build_matrix(pair, o).at(0, 1);
  const bool ok = !bad_diag && !bad_sym && !bad_range && std::abs(s - kSimilarityTarget) <= kSimilarityTol;
  return {ok, fmt("N=%zu diag_err=%zu sym_err=%zu range_err=%zu s(example)=%.6f", m.size(), bad_diag, bad_sym,
                  bad_range, static_cast<double>(s))};
}

Outcome schedule_shape() {
  bool p0 = true;
  for (double mu : {10.0, 15.0, 20.0})
    p0 = p0 && keep_probability(Schedule(mu), 0.0) == mu / (mu + 1.0);
  bool monotone = true;
  for (double mu : {10.0, 15.0, 20.0}) {
    double prev = keep_probability(Schedule(mu), 0.0);
    for (std::size_t k = 1; k < kScheduleGrid; ++k) {
      const double p = keep_probability(Schedule(mu), 100.0 * k / (kScheduleGrid - 1));
      monotone = monotone && p < prev;
      prev = p;
    }
  }
  const double p30 = keep_probability(Schedule(10.0), 30.0);
  const bool ok = p0 && monotone && std::abs(p30 - kScheduleP30) <= kScheduleTol;
  return {ok, fmt("p(0) exact=%s monotone=%s p(30;mu=10)=%.9f target=%.6f", p0 ? "yes" : "no",
                  monotone ? "yes" : "no", p30, kScheduleP30)};
}

SimilarityMatrix ten_action_matrix() {
  SynthConfig cfg;
  cfg.seed = 2;
  cfg.dialogs = 60;
  const auto c = generate_corpus(cfg);
  const auto vocab = collect_vocab(c.dialogs);
  std::vector<std::string> first(vocab.actions().begin(), vocab.actions().begin() + 10);
  return build_matrix(ActionVocab(first), c.ontology);
}

Outcome sampler_statistics() {
  const auto start = std::chrono::steady_clock::now();
  const auto m = ten_action_matrix();
  const double p = 0.4;
  const auto keep = validate_sampler_at(m, p, kKeepDraws, 3, 17);
  const bool keep_ok = std::abs(keep.keep_rate - p) <= kKeepSigmas * keep.keep_stderr;
  const bool tv_ok = keep.tv_distance <= kTvTol;
  const auto heavy = validate_sampler_at(m, 0.0, kReplacementDraws, 3, 19);
  const bool never_gt = heavy.replacements == kReplacementDraws && heavy.gt_emitted_on_replace == 0;
  const double secs = seconds_since(start);
  return {keep_ok && tv_ok && never_gt && secs < kSamplerBudgetSeconds,
          fmt("keep=%.5f (p=%.2f, 3se=%.5f) tv=%.5f gt_on_replace=%zu/%zu time=%.1fs", keep.keep_rate, p,
              kKeepSigmas * keep.keep_stderr, keep.tv_distance, heavy.gt_emitted_on_replace, heavy.replacements,
              secs)};
}

Outcome loss_gate_contract() {
  bool ok = true;
  for (bool replaced : {false, true}) {
    SampleDecision d;
    d.replaced = replaced;
    d.optimize_action_loss = !replaced;
    const auto g = gate_losses(d);
    ok = ok && g.action_loss_enabled == !replaced && g.response_loss_enabled;
  }
  // Same contract through the sampler itself on both branches.
  const auto m = ten_action_matrix();
  SamplerRng rng(5);
  for (double p : {0.0, 1.0})
    for (std::size_t gt = 0; gt < m.size(); ++gt) {
      const auto d = decide_with_probability(m, p, gt, rng);
      const auto g = gate_losses(d);
      ok = ok && d.replaced == (p == 0.0) && d.optimize_action_loss == !d.replaced &&
           g.action_loss_enabled == !d.replaced && g.response_loss_enabled;
    }
  return {ok, "replaced=>(action off, response on); kept=>(both on)"};
}

std::string names(const MultiHot& v, const std::vector<std::string>& classes) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) out += (out.empty() ? "" : ",") + classes[i];
  return out;
}

Outcome aux_label_examples() {
  const LabelSpace space(fixtures::ontology());
  const auto labels = turn_labels(space, fixtures::figure_dialog(), 1);
  const auto slots = names(labels.slot_type, space.slot_classes());
  std::string changes;
  for (std::size_t i = 0; i < labels.slot_change.mask.size(); ++i)
    if (labels.slot_change.mask[i])
      changes += (changes.empty() ? "" : ",") + space.slot_classes()[i] + ":" +
                 std::string(to_string(labels.slot_change.categories[i]));
  const auto acts = names(labels.action_type, space.act_classes());
  const auto keywords = names(labels.keywords.labels, space.keywords());
  const bool ok = slots == "restaurant-pricerange,restaurant-area,restaurant-food" &&
                  changes == "restaurant-pricerange:keep,restaurant-area:keep,restaurant-food:new" &&
                  acts == "restaurant-inform,restaurant-offerbook" &&
                  keywords == "[value_name],[value_address]" && labels.keywords.unknown.empty();
  return {ok, "slots={" + slots + "} change={" + changes + "} acts={" + acts + "} keywords={" + keywords + "}"};
}

Outcome loss_numerics() {
  bool ln2_ok = true;
  for (std::size_t n : {1u, 7u, 64u}) {
    const std::vector<double> zeros(n, 0.0);
    for (int pattern = 0; pattern < 3; ++pattern) {
      std::vector<std::uint8_t> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = pattern == 2 ? (i % 2) : pattern;
      ln2_ok = ln2_ok && std::abs(bernoulli_multilabel_loss(zeros, y) - n * std::log(2.0)) <= kLn2Tol;
    }
  }
  gen::Source src(2024);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < kFdInstances; ++trial) {
    const std::size_t n = 1 + src.below(6);
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = src.uniform(-4.0, 4.0);
      y[i] = src.coin();
    }
    const auto g = bernoulli_multilabel_grad(s, y);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = s, down = s;
      up[i] += kFdStep;
      down[i] -= kFdStep;
      const double fd = (bernoulli_multilabel_loss(up, y) - bernoulli_multilabel_loss(down, y)) / (2 * kFdStep);
      worst = std::max(worst, relative_error(g[i], fd));
    }
    std::vector<ChangeScores> cs(n);
    std::vector<SlotChange> cats(n);
    MultiHot mask(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : cs[i]) v = src.uniform(-3.0, 3.0);
      cats[i] = static_cast<SlotChange>(src.below(4));
      mask[i] = 1 + src.below(3) != 1;  // mostly active
    }
    const auto cg = categorical_change_grad(cs, cats, mask);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < 4; ++k) {
        auto up = cs, down = cs;
        up[i][k] += kFdStep;
        down[i][k] -= kFdStep;
        const double fd =
            (categorical_change_loss(up, cats, mask) - categorical_change_loss(down, cats, mask)) / (2 * kFdStep);
        worst = std::max(worst, relative_error(cg[i][k], fd));
      }
  }
  return {ln2_ok && worst <= kFdRelTol, fmt("N*ln2 %s, worst FD relative error=%.3e over %zu instances",
                                            ln2_ok ? "ok" : "off", worst, kFdInstances)};
}

Outcome evaluator_identity() {
  bool identity = true;
  std::size_t dialogs = 0, violations = 0;
  std::string last;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.dialogs = 50;
    cfg.domains = 2 + seed % 3;
    const auto c = generate_corpus(cfg);
    std::vector<PredictedDialog> gold;
    for (const auto& d : c.dialogs) gold.push_back(gold_prediction(d));
    const auto r = evaluate(c.dialogs, gold, c.db);
    identity = identity && r.inform == 100.0 && r.success == 100.0 && r.bleu == 100.0 && r.combined == 200.0;
    last = fmt("%.2f/%.2f/%.2f/%.2f", r.inform, r.success, r.bleu, r.combined);

    // Fuzz: corrupt beliefs and responses, check success implies inform.
    gen::Source src(seed * 977);
    const std::vector<std::string> noise = {"[value_name]", "[value_address]", "[value_phone]", "sorry", "."};
    auto fuzzed = gold;
    for (auto& p : fuzzed)
      for (auto& t : p.turns) {
        if (src.below(3) == 0) {
          std::string resp;
          for (std::size_t k = 0, n = 1 + src.below(5); k < n; ++k) resp += (k ? " " : "") + src.pick(noise);
          t.response = resp;
        }
        if (src.below(4) == 0) t.belief = BeliefState{};
        if (src.below(6) == 0 && !t.belief.empty()) {
          auto entries = t.belief.entries();
          const auto& dom = entries.front();
          t.belief.set(dom.domain, dom.slots.front().first, "nothing like this");
        }
      }
    const auto fr = evaluate(c.dialogs, fuzzed, c.db);
    for (const auto& s : fr.dialogs) {
      ++dialogs;
      if (s.success && !s.inform) ++violations;
    }
  }
  return {identity && violations == 0,
          fmt("gold=%s fuzzed dialogs=%zu success-without-inform=%zu", last.c_str(), dialogs, violations)};
}

Outcome codec_round_trips() {
  const auto o = fixtures::ontology();
  gen::Source src(99);
  std::size_t belief_bad = 0, action_bad = 0;
  for (std::size_t k = 0; k < kCodecTrials; ++k) {
    const auto b = gen::belief(src, o);
    if (!(parse_belief(serialize_belief(b), o) == b)) ++belief_bad;
    const auto a = gen::action(src, o);
    if (!(parse_action(serialize_action(a), o) == a)) ++action_bad;
  }
  SynthConfig cfg;
  cfg.seed = 8;
  cfg.dialogs = 80;
  const auto c = generate_corpus(cfg);
  const auto m = build_matrix(collect_vocab(c.dialogs), c.ontology);
  const auto dir = std::filesystem::temp_directory_path() / "dialtree_acceptance_codec";
  std::filesystem::create_directories(dir);
  save_matrix(m, dir / "m.bin", dir / "m.vocab");
  const auto back = load_matrix(dir / "m.bin", dir / "m.vocab");
  const bool bits = back.size() == m.size() && back.vocab().actions() == m.vocab().actions() &&
                    std::memcmp(back.values().data(), m.values().data(), m.values().size() * sizeof(float)) == 0;
  std::filesystem::remove_all(dir);
  return {!belief_bad && !action_bad && bits,
          fmt("beliefs %zu/%zu, actions %zu/%zu, matrix N=%zu bit-identical=%s", kCodecTrials - belief_bad,
              kCodecTrials, kCodecTrials - action_bad, kCodecTrials, m.size(), bits ? "yes" : "no")};
}

// Distinct random actions over a schema wide enough to supply them.
std::pair<ActionVocab, Ontology> perf_vocab() {
  std::vector<DomainSchema> domains;
  for (const char* d : {"restaurant", "hotel", "train", "taxi", "attraction"})
    domains.push_back({d, {"name", "area", "price", "type", "day", "people"}, {"address", "phone", "postcode"}});
  const Ontology o(domains, {"inform", "request", "offerbook", "recommend", "select", "nooffer"}, {});
  gen::Source src(1000);
  std::set<std::string> seen;
  std::vector<std::string> actions;
  while (actions.size() < kPerfActions) {
    ActionSeq a;
    const auto n_domains = src.below(4) == 0 ? 2 : 1;
    for (std::size_t i = 0; i < n_domains; ++i) {
      const auto& d = src.pick(o.domains());
      DomainActs da{d.name, {}};
      for (std::size_t k = 0, n = 1 + src.below(2); k < n; ++k) {
        ActEntry act{src.pick(o.acts()), {}};
        for (std::size_t s = 0, m = src.below(3); s < m; ++s)
          act.slots.push_back(src.coin() ? src.pick(d.slots) : src.pick(d.requestables));
        da.acts.push_back(std::move(act));
      }
      a.domains.push_back(std::move(da));
    }
    auto text = serialize_action(a);
    if (seen.insert(text).second) actions.push_back(std::move(text));
  }
  return {ActionVocab(actions), o};
}

Outcome performance() {
  const auto [vocab, o] = perf_vocab();
  double nodes = 0;
  for (const auto& a : vocab.actions()) nodes += static_cast<double>(to_tree(parse_action(a, o)).size());
  nodes /= static_cast<double>(vocab.size());

  auto start = std::chrono::steady_clock::now();
  const auto seq = build_matrix(vocab, o, 1);
  const double t1 = seconds_since(start);
  start = std::chrono::steady_clock::now();
  const auto par = build_matrix(vocab, o, kPerfThreads);
  const double t8 = seconds_since(start);
  const bool equal = seq == par;
  const double speedup = t1 / t8;
  return {t1 < kPerfBudgetSeconds && speedup >= kPerfSpeedup && equal,
          fmt("N=%zu mean_nodes=%.2f t1=%.2fs t%u=%.2fs speedup=%.2fx (need %.1fx, hardware threads=%u) "
              "parallel==sequential=%s",
              vocab.size(), nodes, t1, kPerfThreads, t8, speedup, kPerfSpeedup,
              std::thread::hardware_concurrency(), equal ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "combined score formula", combined_formula},
      {2, "tree edit distance vs edit-script oracle", ted_oracle_sweep},
      {3, "similarity properties", similarity_properties},
      {4, "keep-probability schedule", schedule_shape},
      {5, "sampler statistics", sampler_statistics},
      {6, "loss gate contract", loss_gate_contract},
      {7, "auxiliary label examples", aux_label_examples},
      {8, "loss numerics", loss_numerics},
      {9, "evaluator identity", evaluator_identity},
      {10, "codec round trips", codec_round_trips},
      {11, "matrix build performance", performance},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures ? 1 : 0;
}
