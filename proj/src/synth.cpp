#include "dialtree/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>

#include "dialtree/codec.hpp"
#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

namespace {

constexpr std::array<const char*, 8> kDomainPool = {"restaurant", "hotel",  "attraction", "train",
                                                    "taxi",       "hospital", "police",   "bus"};
constexpr std::array<const char*, 8> kSlotPool = {"area", "food",   "pricerange", "stars",
                                                  "type", "parking", "internet",  "day"};
const std::vector<std::string> kRequestables = {"address", "phone", "postcode"};
const std::vector<std::string> kActs = {"inform", "request", "offerbook", "recommend", "select",
                                        "nooffer", "reqmore", "bye", "welcome"};
constexpr const char* kGeneral = "general";

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::string slot_value(const std::string& slot, std::size_t k) {
  // Odd indices get a two-token value so multi-token parsing is exercised.
  auto v = slot + "-" + std::to_string(k);
  return k % 2 ? v + " plus" : v;
}

Ontology make_ontology(const SynthConfig& cfg) {
  std::vector<DomainSchema> domains;
  std::vector<std::string> keywords = {placeholder_for("name")};
  for (std::size_t d = 0; d < cfg.domains; ++d) {
    DomainSchema schema{kDomainPool[d], {"name"}, kRequestables};
    for (std::size_t s = 0; s < cfg.slots_per_domain; ++s) {
      // Rotate so domains differ in slot inventory.
      std::string slot = kSlotPool[(s + d) % kSlotPool.size()];
      schema.slots.push_back(slot);
      if (std::find(keywords.begin(), keywords.end(), placeholder_for(slot)) == keywords.end())
        keywords.push_back(placeholder_for(slot));
    }
    domains.push_back(std::move(schema));
  }
  for (const auto& r : kRequestables) keywords.push_back(placeholder_for(r));
  domains.push_back({kGeneral, {}, {}});
  return Ontology(std::move(domains), kActs, std::move(keywords));
}

EntityDb make_db(const SynthConfig& cfg, const Ontology& ontology, Draw& draw) {
  std::vector<DomainEntities> out;
  for (const auto& schema : ontology.domains()) {
    if (schema.name == kGeneral) continue;
    DomainEntities entry{schema.name, {}};
    for (std::size_t k = 0; k < cfg.entities_per_domain; ++k) {
      Entity e{schema.name + " place " + std::to_string(k), {}};
      e.slots.emplace_back("name", e.name);
      for (const auto& slot : schema.slots)
        if (slot != "name") e.slots.emplace_back(slot, slot_value(slot, draw.below(cfg.values_per_slot)));
      e.slots.emplace_back("address", std::to_string(k + 1) + " " + schema.name + " street");
      e.slots.emplace_back("phone", "01223" + std::to_string(100000 + k));
      e.slots.emplace_back("postcode", "cb" + std::to_string(k % 9 + 1) + "z");
      entry.entities.push_back(std::move(e));
    }
    out.push_back(std::move(entry));
  }
  return EntityDb(ontology, std::move(out));
}

struct DialogPlan {
  std::size_t goal_domains;
  double change_rate;
  double delete_rate;
  bool split_requests;
};

class DialogBuilder {
 public:
  DialogBuilder(const SynthConfig& cfg, const Ontology& ontology, const EntityDb& db, Draw& draw)
      : cfg_(cfg), ontology_(ontology), db_(db), draw_(draw) {}

  Dialog build(const std::string& id, const DialogPlan& plan) {
    dialog_ = Dialog{id, {}, {}};
    active_.clear();
    belief_ = BeliefState{};

    std::vector<std::string> domains;
    for (const auto& s : ontology_.domains())
      if (s.name != kGeneral) domains.push_back(s.name);
    draw_.shuffle(domains);
    domains.resize(std::min(plan.goal_domains, domains.size()));

    for (const auto& domain : domains) run_domain(domain, plan);

    while (dialog_.turns.size() + 1 < cfg_.min_turns)
      add_turn("ok , thanks", action_of(kGeneral, "reqmore", {}),
               "is there anything else i can help with today ?", {});
    add_turn("no , that is all . goodbye", action_of(kGeneral, "bye", {}),
             "thank you for using our service , goodbye .", {});
    return dialog_;
  }

 private:
  static ActionSeq action_of(const std::string& domain, const std::string& act,
                             std::vector<std::string> slots) {
    ActionSeq a;
    a.domains.push_back({domain, {{act, std::move(slots)}}});
    return a;
  }

  void add_turn(std::string user, ActionSeq action, std::string response, const Entity* entity) {
    Turn t;
    t.index = dialog_.turns.size();
    t.user = std::move(user);
    t.belief = belief_;
    t.db_bucket = bucketize(active_.empty() ? 0 : query(db_, belief_, active_).size());
    t.action = std::move(action);
    t.response_delex = std::move(response);
    if (entity) {
      // Realize placeholders from the entity; the delexicalized form is primary.
      std::string lex;
      for (const auto& tok : split_whitespace(t.response_delex)) {
        std::string word = tok;
        if (is_placeholder(tok)) {
          const auto slot = tok.substr(7, tok.size() - 8);
          if (const auto* v = entity->find(slot)) word = *v;
        }
        lex += (lex.empty() ? "" : " ") + word;
      }
      t.response_lex = std::move(lex);
    }
    dialog_.turns.push_back(std::move(t));
  }

  void run_domain(const std::string& domain, const DialogPlan& plan) {
    active_ = domain;
    const auto* schema = ontology_.find_domain(domain);
    const auto& entities = db_.entities(domain);
    const Entity& target = entities[draw_.below(entities.size())];

    std::vector<std::string> candidates;
    for (const auto& s : schema->slots)
      if (s != "name") candidates.push_back(s);
    draw_.shuffle(candidates);
    const std::size_t n_inform = 1 + draw_.below(std::min<std::size_t>(3, candidates.size()));
    std::vector<std::string> informable(candidates.begin(), candidates.begin() + n_inform);
    std::vector<std::string> spare(candidates.begin() + n_inform, candidates.end());

    DomainGoal goal{domain, {}, {}};
    for (const auto& s : informable) goal.informable.emplace_back(s, *target.find(s));
    for (const auto& r : kRequestables)
      if (draw_.chance(0.5)) goal.requested.push_back(r);
    dialog_.goal.domains.push_back(goal);

    std::vector<std::string> pending = informable;
    std::vector<std::string> wrong;  // slots currently holding a wrong value
    std::string extra;               // non-goal slot to delete next turn

    while (true) {
      std::string user;
      if (!wrong.empty() || !extra.empty()) {
        for (const auto& s : wrong) {
          belief_.set(domain, s, *target.find(s));
          user += "sorry , i meant " + s + " " + *target.find(s) + " . ";
        }
        wrong.clear();
        if (!extra.empty()) {
          belief_.erase(domain, extra);
          user += "actually i do not care about the " + extra + " . ";
          extra.clear();
        }
      } else {
        const std::size_t take = std::min<std::size_t>(pending.size(), 1 + draw_.below(2));
        user = "i am looking for a " + domain;
        for (std::size_t k = 0; k < take; ++k) {
          const auto slot = pending.front();
          pending.erase(pending.begin());
          std::string value = *target.find(slot);
          if (draw_.chance(plan.change_rate)) {
            const auto alt = slot_value(slot, cfg_.values_per_slot);  // never used by entities
            value = alt;
            wrong.push_back(slot);
          }
          belief_.set(domain, slot, value);
          user += " with " + slot + " " + value;
        }
        if (!spare.empty() && draw_.chance(plan.delete_rate)) {
          extra = spare[draw_.below(spare.size())];
          const auto value = slot_value(extra, draw_.below(cfg_.values_per_slot));
          belief_.set(domain, extra, value);
          user += " and " + extra + " " + value;
        }
        user += " .";
      }

      if (!pending.empty()) {
        add_turn(user, action_of(domain, "request", {pending.front()}),
                 "what " + placeholder_for(pending.front()) + " would you like ?", nullptr);
      } else if (!wrong.empty() || !extra.empty()) {
        const auto slot = !wrong.empty() ? wrong.front() : extra;
        add_turn(user, action_of(domain, "select", {slot}),
                 "just to confirm , you want " + placeholder_for(slot) + " ?", nullptr);
      } else {
        offer(domain, user, goal, plan, target);
        return;
      }
    }
  }

  void offer(const std::string& domain, const std::string& user, const DomainGoal& goal,
             const DialogPlan& plan, const Entity& target) {
    const auto& offer_act = cfg_.offer_templates[draw_.below(cfg_.offer_templates.size())];
    const auto matches = query(db_, belief_, domain);
    const Entity& offered = matches.empty() ? target : *matches.front();

    std::vector<std::string> inform_slots = {"name"};
    std::string response = "i found " + placeholder_for("name") + " for you";
    if (!plan.split_requests) {
      for (const auto& r : goal.requested) {
        inform_slots.push_back(r);
        response += " , " + r + " " + placeholder_for(r);
      }
    }
    response += " .";
    ActionSeq action;
    action.domains.push_back({domain, {{"inform", inform_slots}}});
    if (!offer_act.empty()) {
      action.domains.back().acts.push_back({offer_act, {}});
      response += " shall i go ahead ?";
    }
    add_turn(user, std::move(action), response, &offered);

    if (plan.split_requests && !goal.requested.empty()) {
      std::string ask = "can you give me the";
      std::string answer = "sure , the";
      for (const auto& r : goal.requested) {
        ask += " " + r;
        answer += " " + r + " is " + placeholder_for(r);
      }
      add_turn(ask + " ?", action_of(domain, "inform", goal.requested), answer + " .", &offered);
    }
  }

  const SynthConfig& cfg_;
  const Ontology& ontology_;
  const EntityDb& db_;
  Draw& draw_;
  Dialog dialog_;
  BeliefState belief_;
  std::string active_;
};

}  // namespace

void SynthConfig::validate() const {
  if (domains < 1 || domains > kDomainPool.size()) throw ValidationError("synth: domains must be in [1, 8]");
  if (slots_per_domain < 1 || slots_per_domain > kSlotPool.size())
    throw ValidationError("synth: slots_per_domain must be in [1, 8]");
  if (entities_per_domain < 1) throw ValidationError("synth: entities_per_domain must be positive");
  if (values_per_slot < 1) throw ValidationError("synth: values_per_slot must be positive");
  if (dialogs < 1) throw ValidationError("synth: dialogs must be positive");
  if (min_turns < 1 || max_turns < 3 || min_turns > max_turns)
    throw ValidationError("synth: need 1 <= min_turns <= max_turns and max_turns >= 3");
  if (offer_templates.empty()) throw ValidationError("synth: offer_templates must not be empty");
  for (double r : {change_rate, delete_rate})
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("synth: rates must lie in [0, 1]");
}

SynthCorpus generate_corpus(const SynthConfig& cfg) {
  cfg.validate();
  Draw draw(cfg.seed);
  auto ontology = make_ontology(cfg);
  for (const auto& t : cfg.offer_templates)
    if (!t.empty() && !ontology.has_act(t)) throw ValidationError("synth: unknown offer act '" + t + "'");
  auto db = make_db(cfg, ontology, draw);

  std::vector<Dialog> dialogs;
  DialogBuilder builder(cfg, ontology, db, draw);
  for (std::size_t i = 0; i < cfg.dialogs; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "synth-%05zu", i);
    DialogPlan plan{1 + draw.below(std::min<std::size_t>(2, cfg.domains)), cfg.change_rate,
                    cfg.delete_rate, draw.chance(0.5)};
    auto dialog = builder.build(id, plan);
    // Fall back to the shortest dialog shape if the plan overflows max_turns.
    if (dialog.turns.size() > cfg.max_turns) dialog = builder.build(id, {1, 0.0, 0.0, false});
    dialogs.push_back(std::move(dialog));
  }
  for (const auto& d : dialogs) validate(ontology, d);
  return {std::move(ontology), std::move(db), std::move(dialogs)};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ShardCounts {
  std::size_t kept = 0;
  std::size_t gt_on_replace = 0;
  std::vector<std::size_t> hits;
};

}  // namespace

SamplerReport validate_sampler_at(const SimilarityMatrix& m, double p, std::size_t draws,
                                  std::size_t gt_index, std::uint64_t seed, unsigned threads) {
  const std::size_t n = m.size();
  if (gt_index >= n) throw RangeError("ground-truth index out of range");
  if (draws == 0) throw RangeError("validate_sampler needs at least one draw");
  const unsigned shards = std::max(1u, threads);
  std::vector<ShardCounts> counts(shards, ShardCounts{0, 0, std::vector<std::size_t>(n, 0)});

  auto run_shard = [&](unsigned s) {
    SamplerRng rng(splitmix64(seed ^ splitmix64(s)));
    const std::size_t k = draws / shards + (s < draws % shards ? 1 : 0);
    auto& c = counts[s];
    for (std::size_t i = 0; i < k; ++i) {
      const auto d = decide_with_probability(m, p, gt_index, rng);
      if (!d.replaced) {
        ++c.kept;
        continue;
      }
      if (d.out_index == gt_index) ++c.gt_on_replace;
      ++c.hits[d.out_index];
    }
  };
  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(run_shard, s);
  }

  SamplerReport r;
  r.draws = draws;
  r.gt_index = gt_index;
  r.expected_keep_rate = n < 2 ? 1.0 : p;
  r.replacement_frequencies.assign(n, 0.0);
  std::size_t kept = 0;
  std::vector<std::size_t> hits(n, 0);
  for (const auto& c : counts) {
    kept += c.kept;
    r.gt_emitted_on_replace += c.gt_on_replace;
    for (std::size_t j = 0; j < n; ++j) hits[j] += c.hits[j];
  }
  r.replacements = draws - kept;
  r.keep_rate = static_cast<double>(kept) / static_cast<double>(draws);
  r.keep_stderr = std::sqrt(r.expected_keep_rate * (1.0 - r.expected_keep_rate) / static_cast<double>(draws));
  if (n < 2) return r;

  r.expected_frequencies = sampling_row(m, gt_index);
  double sampled_sim = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (r.replacements)
      r.replacement_frequencies[j] = static_cast<double>(hits[j]) / static_cast<double>(r.replacements);
    r.tv_distance += std::abs(r.replacement_frequencies[j] - r.expected_frequencies[j]);
    const double s = m.at(gt_index, j);
    sampled_sim += static_cast<double>(hits[j]) * s;
    r.mean_similarity_expected += r.expected_frequencies[j] * s;
    if (j != gt_index) r.mean_similarity_uniform += s / static_cast<double>(n - 1);
  }
  r.tv_distance *= 0.5;
  if (r.replacements) r.mean_similarity_sampled = sampled_sim / static_cast<double>(r.replacements);
  return r;
}

SamplerReport validate_sampler(const SimilarityMatrix& m, const Schedule& schedule, std::size_t draws,
                               double t, std::size_t gt_index, std::uint64_t seed, unsigned threads) {
  return validate_sampler_at(m, keep_probability(schedule, t), draws, gt_index, seed, threads);
}

}  // namespace dialtree
