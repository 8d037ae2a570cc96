#include "dialtree/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dialtree/aux_labels.hpp"
#include "dialtree/codec.hpp"
#include "dialtree/corpus_io.hpp"
#include "dialtree/db.hpp"
#include "dialtree/error.hpp"
#include "dialtree/evaluator.hpp"
#include "dialtree/scheduler.hpp"
#include "dialtree/similarity_matrix.hpp"
#include "dialtree/synth.hpp"

namespace dialtree {

namespace {

namespace fs = std::filesystem;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

fs::path vocab_path_for(const std::string& vocab, const std::string& matrix) {
  return vocab.empty() ? fs::path(matrix + ".vocab") : fs::path(vocab);
}

// Writes to --out when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Json labels_record(const LabelSpace& space, const Dialog& d, std::size_t t, std::ostream& err) {
  const auto labels = turn_labels(space, d, t);
  auto active = [](const MultiHot& v, const std::vector<std::string>& names) {
    Json a = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) a.push_back(names[i]);
    return a;
  };
  Json rec;
  rec["id"] = d.id;
  rec["turn"] = t;
  rec["slot_type"] = {{"vector", labels.slot_type}, {"active", active(labels.slot_type, space.slot_classes())}};
  Json categories = Json::array();
  Json changes = Json::object();
  for (std::size_t i = 0; i < labels.slot_change.mask.size(); ++i) {
    const bool on = labels.slot_change.mask[i];
    categories.push_back(on ? static_cast<int>(labels.slot_change.categories[i]) : -1);
    if (on) changes[space.slot_classes()[i]] = std::string(to_string(labels.slot_change.categories[i]));
  }
  rec["slot_change"] = {{"vector", categories}, {"active", changes}};
  rec["action_type"] = {{"vector", labels.action_type},
                        {"active", active(labels.action_type, space.act_classes())}};
  rec["keywords"] = {{"vector", labels.keywords.labels},
                     {"active", active(labels.keywords.labels, space.keywords())}};
  for (const auto& u : labels.keywords.unknown)
    err << "warning: " << d.id << " turn " << t << ": placeholder " << u << " not in keyword_vocab\n";
  return rec;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dialog action-tree toolkit: parsing, similarity, scheduled sampling, labels, evaluation"};
  app.require_subcommand(1);

  std::string ontology_path, db_path, matrix_path, vocab_path, out_path, predictions_path;
  std::vector<std::string> corpus_paths;
  double mu = 10.0;
  double t = 0.0;
  std::string time_unit = "epoch";
  std::uint64_t seed = 1;
  unsigned threads = 1;

  auto add_unit = [&](CLI::App* sub) {
    sub->add_option("--time-unit", time_unit, "Unit of t")->check(CLI::IsMember({"epoch", "step", "fraction"}));
  };

  auto* parse = app.add_subcommand("parse", "Validate a corpus and write it in canonical form");
  parse->add_option("--ontology", ontology_path)->required();
  parse->add_option("--corpus", corpus_paths)->required();
  parse->add_option("--out", out_path);

  auto* matrix = app.add_subcommand("matrix", "Build or query the action similarity matrix");
  matrix->require_subcommand(1);
  auto* mbuild = matrix->add_subcommand("build", "Build the matrix from corpus actions");
  mbuild->add_option("--ontology", ontology_path)->required();
  mbuild->add_option("--corpus", corpus_paths, "One or more corpus files (vocabulary source)")->required();
  mbuild->add_option("--matrix", matrix_path)->required();
  mbuild->add_option("--vocab", vocab_path, "Defaults to <matrix>.vocab");
  mbuild->add_option("--threads", threads)->check(CLI::PositiveNumber);
  std::size_t qi = 0, qj = 0;
  auto* mquery = matrix->add_subcommand("query", "Print one matrix entry");
  mquery->add_option("i", qi)->required();
  mquery->add_option("j", qj)->required();
  mquery->add_option("--matrix", matrix_path)->required();
  mquery->add_option("--vocab", vocab_path);

  auto* schedule = app.add_subcommand("schedule", "Inspect the keep-probability schedule");
  schedule->require_subcommand(1);
  auto* seval = schedule->add_subcommand("eval", "Print p(t)");
  seval->add_option("--mu", mu)->required();
  seval->add_option("--t", t)->required();
  add_unit(seval);

  auto* sample = app.add_subcommand("sample", "Scheduled-sampling stream over stdin/stdout");
  sample->add_option("--matrix", matrix_path)->required();
  sample->add_option("--vocab", vocab_path);
  sample->add_option("--mu", mu)->required();
  sample->add_option("--seed", seed);
  add_unit(sample);

  auto* labels = app.add_subcommand("labels", "Emit auxiliary label records per turn");
  labels->add_option("--ontology", ontology_path)->required();
  labels->add_option("--corpus", corpus_paths)->required();
  labels->add_option("--out", out_path);

  auto* db = app.add_subcommand("db", "Database utilities");
  db->require_subcommand(1);
  std::string domain, belief_text;
  auto* dquery = db->add_subcommand("query", "List entities matching a belief state");
  dquery->add_option("--ontology", ontology_path)->required();
  dquery->add_option("--db", db_path)->required();
  dquery->add_option("--domain", domain)->required();
  dquery->add_option("--belief", belief_text, "Linear belief text");

  auto* eval = app.add_subcommand("eval", "Inform / Success / BLEU / Combined");
  eval->add_option("--ontology", ontology_path)->required();
  eval->add_option("--db", db_path)->required();
  eval->add_option("--corpus", corpus_paths)->required();
  eval->add_option("--predictions", predictions_path)->required();
  eval->add_option("--out", out_path, "Write the JSON report here");

  SynthConfig synth_cfg;
  auto* synth = app.add_subcommand("synth", "Generate a self-consistent synthetic corpus");
  synth->add_option("--seed", synth_cfg.seed);
  synth->add_option("--out", out_path, "Output directory")->required();
  synth->add_option("--dialogs", synth_cfg.dialogs);
  synth->add_option("--domains", synth_cfg.domains);
  synth->add_option("--slots", synth_cfg.slots_per_domain);
  synth->add_option("--entities", synth_cfg.entities_per_domain);
  synth->add_option("--min-turns", synth_cfg.min_turns);
  synth->add_option("--max-turns", synth_cfg.max_turns);

  std::vector<std::string> argv_storage{"dialtree"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  auto read_all_corpora = [&](const Ontology& ontology) {
    std::vector<Dialog> all;
    for (const auto& p : corpus_paths) {
      auto part = read_corpus(fs::path(p), ontology);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
  };

  try {
    if (parse->parsed()) {
      const auto ontology = read_ontology(ontology_path);
      const auto dialogs = read_all_corpora(ontology);
      Sink sink(out_path, out);
      write_corpus(sink.get(), dialogs);
      err << "parsed " << dialogs.size() << " dialogs\n";
    } else if (mbuild->parsed()) {
      const auto ontology = read_ontology(ontology_path);
      const auto dialogs = read_all_corpora(ontology);
      const auto vocab = collect_vocab(dialogs);
      BuildStats stats;
      const auto m = build_matrix(vocab, ontology, threads, &stats);
      save_matrix(m, matrix_path, vocab_path_for(vocab_path, matrix_path));
      out << "actions " << m.size() << "\ndistances " << stats.distance_evaluations << '\n';
    } else if (mquery->parsed()) {
      const auto m = load_matrix(matrix_path, vocab_path_for(vocab_path, matrix_path));
      if (qi >= m.size() || qj >= m.size())
        throw RangeError("index out of range for N=" + std::to_string(m.size()));
      out << fixed6(m.at(qi, qj)) << '\n';
    } else if (seval->parsed()) {
      const Schedule s(mu, parse_time_unit(time_unit));
      out << fixed6(keep_probability(s, t)) << '\n';
    } else if (sample->parsed()) {
      const auto m = load_matrix(matrix_path, vocab_path_for(vocab_path, matrix_path));
      const Schedule s(mu, parse_time_unit(time_unit));
      SamplerRng rng(seed);
      const auto errors = run_sample_stream(in, out, m, s, rng);
      if (errors) err << errors << " request(s) answered with error records\n";
    } else if (labels->parsed()) {
      const auto ontology = read_ontology(ontology_path);
      const auto dialogs = read_all_corpora(ontology);
      const LabelSpace space(ontology);
      Sink sink(out_path, out);
      for (const auto& d : dialogs)
        for (std::size_t k = 0; k < d.turns.size(); ++k)
          sink.get() << labels_record(space, d, k, err).dump() << '\n';
    } else if (dquery->parsed()) {
      const auto ontology = read_ontology(ontology_path);
      const auto entities = read_db(db_path, ontology);
      const auto belief = parse_belief(belief_text, ontology);
      validate(ontology, belief);
      const auto matches = query(entities, belief, domain);
      out << "bucket " << to_string(bucketize(matches.size())) << "\ncount " << matches.size() << '\n';
      for (const auto* e : matches) out << e->name << '\n';
    } else if (eval->parsed()) {
      const auto ontology = read_ontology(ontology_path);
      const auto entities = read_db(db_path, ontology);
      const auto gold = read_all_corpora(ontology);
      const auto predicted = read_predictions(fs::path(predictions_path), ontology);
      const auto report = evaluate(gold, predicted, entities);
      out << format_report_table(report);
      if (!out_path.empty()) write_text_file(out_path, to_json(report).dump(2) + "\n");
    } else if (synth->parsed()) {
      const auto corpus = generate_corpus(synth_cfg);
      const fs::path dir(out_path);
      fs::create_directories(dir);
      write_text_file(dir / "ontology.json", to_json(corpus.ontology).dump(2) + "\n");
      write_text_file(dir / "db.json", to_json(corpus.db).dump(2) + "\n");
      std::ostringstream lines, gold;
      write_corpus(lines, corpus.dialogs);
      for (const auto& d : corpus.dialogs) gold << to_json(gold_prediction(d)).dump() << '\n';
      write_text_file(dir / "corpus.jsonl", lines.str());
      write_text_file(dir / "predictions_gold.jsonl", gold.str());
      out << "wrote " << corpus.dialogs.size() << " dialogs to " << dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dialtree
