#include "dialtree/corpus_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dialtree/codec.hpp"
#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw FormatError(std::string(what) + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Json parse_json(std::istream& in, const std::string& source) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

Ontology ontology_from_json(const Json& j) {
  std::vector<DomainSchema> domains;
  for (const auto& d : field(j, "domains")) {
    DomainSchema schema{string_field(d, "name"), string_list(field(d, "slots"), "slots"), {}};
    if (d.contains("requestables")) schema.requestables = string_list(d.at("requestables"), "requestables");
    domains.push_back(std::move(schema));
  }
  std::vector<std::string> keywords;
  if (j.contains("keyword_vocab")) keywords = string_list(j.at("keyword_vocab"), "keyword_vocab");
  return Ontology(std::move(domains), string_list(field(j, "acts"), "acts"), std::move(keywords));
}

Json to_json(const Ontology& ontology) {
  Json j;
  j["domains"] = Json::array();
  for (const auto& d : ontology.domains())
    j["domains"].push_back({{"name", d.name}, {"slots", d.slots}, {"requestables", d.requestables}});
  j["acts"] = ontology.acts();
  j["keyword_vocab"] = ontology.keyword_vocab();
  return j;
}

Ontology read_ontology(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return ontology_from_json(parse_json(in, path.string()));
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

EntityDb db_from_json(const Json& j, const Ontology& ontology) {
  if (!j.is_object()) throw FormatError("db must be an object of per-domain arrays");
  std::vector<DomainEntities> domains;
  for (const auto& [domain, list] : j.items()) {
    if (!list.is_array()) throw FormatError("db domain '" + domain + "' must be an array");
    DomainEntities entry{domain, {}};
    for (const auto& obj : list) {
      if (!obj.is_object()) throw FormatError("db entity in '" + domain + "' must be an object");
      Entity e{string_field(obj, "name"), {}};
      for (const auto& [slot, value] : obj.items()) {
        if (!value.is_string()) throw FormatError("db value for '" + slot + "' must be a string");
        e.slots.emplace_back(slot, value.get<std::string>());
      }
      entry.entities.push_back(std::move(e));
    }
    domains.push_back(std::move(entry));
  }
  return EntityDb(ontology, std::move(domains));
}

Json to_json(const EntityDb& db) {
  Json j = Json::object();
  for (const auto& d : db.domains()) {
    Json list = Json::array();
    for (const auto& e : d.entities) {
      Json obj = Json::object();
      obj["name"] = e.name;
      for (const auto& [slot, value] : e.slots)
        if (slot != "name") obj[slot] = value;
      list.push_back(std::move(obj));
    }
    j[d.domain] = std::move(list);
  }
  return j;
}

EntityDb read_db(const std::filesystem::path& path, const Ontology& ontology) {
  auto in = open_input(path);
  try {
    return db_from_json(parse_json(in, path.string()), ontology);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Dialog dialog_from_json(const Json& j, const Ontology& ontology) {
  Dialog d;
  d.id = string_field(j, "id");
  try {
    if (j.contains("goal")) {
      const auto& goal = j.at("goal");
      if (!goal.is_object()) throw FormatError("goal must be an object");
      for (const auto& [domain, spec] : goal.items()) {
        DomainGoal g{domain, {}, {}};
        if (spec.contains("inform"))
          for (const auto& [slot, value] : spec.at("inform").items()) {
            if (!value.is_string()) throw FormatError("goal value for '" + slot + "' must be a string");
            g.informable.emplace_back(slot, normalize_space(value.get<std::string>()));
          }
        if (spec.contains("request")) g.requested = string_list(spec.at("request"), "goal request");
        d.goal.domains.push_back(std::move(g));
      }
    }
    const auto& turns = field(j, "turns");
    if (!turns.is_array()) throw FormatError("turns must be an array");
    for (std::size_t i = 0; i < turns.size(); ++i) {
      const auto& tj = turns[i];
      try {
        Turn t;
        t.index = tj.contains("index") ? tj.at("index").get<std::size_t>() : i;
        t.user = string_field(tj, "user");
        t.belief = parse_belief(string_field(tj, "belief"), ontology);
        t.db_bucket = parse_db_bucket(string_field(tj, "db"));
        t.action = parse_action(string_field(tj, "action"), ontology);
        t.response_delex = string_field(tj, "response");
        if (tj.contains("response_lex")) t.response_lex = string_field(tj, "response_lex");
        d.turns.push_back(std::move(t));
      } catch (const std::exception& e) {
        throw FormatError("turn " + std::to_string(i) + ": " + e.what());
      }
    }
    validate(ontology, d);
  } catch (const std::exception& e) {
    throw FormatError("dialog '" + d.id + "': " + e.what());
  }
  return d;
}

Json to_json(const Dialog& dialog) {
  Json j;
  j["id"] = dialog.id;
  Json goal = Json::object();
  for (const auto& g : dialog.goal.domains) {
    Json inform = Json::object();
    for (const auto& [slot, value] : g.informable) inform[slot] = value;
    goal[g.domain] = {{"inform", inform}, {"request", g.requested}};
  }
  j["goal"] = std::move(goal);
  j["turns"] = Json::array();
  for (const auto& t : dialog.turns) {
    Json tj;
    tj["index"] = t.index;
    tj["user"] = t.user;
    tj["belief"] = serialize_belief(t.belief);
    tj["db"] = std::string(to_string(t.db_bucket));
    tj["action"] = serialize_action(t.action);
    tj["response"] = t.response_delex;
    if (t.response_lex) tj["response_lex"] = *t.response_lex;
    j["turns"].push_back(std::move(tj));
  }
  return j;
}

namespace {

template <typename F>
void for_each_record(std::istream& in, const std::string& source, F&& handle) {
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (normalize_space(line).empty()) continue;
    const auto where = source + ":" + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    try {
      handle(j);
    } catch (const std::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<Dialog> read_corpus(std::istream& in, const Ontology& ontology, const std::string& source) {
  std::vector<Dialog> out;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_record(in, source, [&](const Json& j) {
    auto d = dialog_from_json(j, ontology);
    if (!seen.emplace(d.id, out.size()).second) throw FormatError("duplicate dialog id '" + d.id + "'");
    out.push_back(std::move(d));
  });
  return out;
}

std::vector<Dialog> read_corpus(const std::filesystem::path& path, const Ontology& ontology) {
  auto in = open_input(path);
  return read_corpus(in, ontology, path.string());
}

void write_corpus(std::ostream& out, const std::vector<Dialog>& dialogs) {
  for (const auto& d : dialogs) out << to_json(d).dump() << '\n';
}

std::vector<PredictedDialog> read_predictions(std::istream& in, const Ontology& ontology,
                                              const std::string& source) {
  std::vector<PredictedDialog> out;
  for_each_record(in, source, [&](const Json& j) {
    PredictedDialog p{string_field(j, "id"), {}};
    const auto& turns = field(j, "turns");
    for (std::size_t i = 0; i < turns.size(); ++i) {
      try {
        p.turns.push_back({parse_belief(string_field(turns[i], "belief"), ontology),
                           string_field(turns[i], "response")});
      } catch (const std::exception& e) {
        throw FormatError("dialog '" + p.id + "' turn " + std::to_string(i) + ": " + e.what());
      }
    }
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<PredictedDialog> read_predictions(const std::filesystem::path& path, const Ontology& ontology) {
  auto in = open_input(path);
  return read_predictions(in, ontology, path.string());
}

Json to_json(const PredictedDialog& prediction) {
  Json j;
  j["id"] = prediction.id;
  j["turns"] = Json::array();
  for (const auto& t : prediction.turns)
    j["turns"].push_back({{"belief", serialize_belief(t.belief)}, {"response", t.response}});
  return j;
}

Json to_json(const EvalReport& report) {
  Json j;
  j["inform"] = report.inform;
  j["success"] = report.success;
  j["bleu"] = report.bleu;
  j["combined"] = report.combined;
  j["dialogs"] = Json::array();
  for (const auto& d : report.dialogs) {
    Json dj;
    dj["id"] = d.id;
    dj["inform"] = d.inform;
    dj["success"] = d.success;
    dj["domains"] = Json::array();
    for (const auto& o : d.domains) {
      Json oj;
      oj["domain"] = o.domain;
      oj["inform"] = o.inform ? Json(*o.inform) : Json();
      oj["success"] = o.success;
      oj["offer_turn"] = o.offer_turn ? Json(*o.offer_turn) : Json();
      oj["offered_entity"] = o.offered_entity ? Json(*o.offered_entity) : Json();
      dj["domains"].push_back(std::move(oj));
    }
    j["dialogs"].push_back(std::move(dj));
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace dialtree
