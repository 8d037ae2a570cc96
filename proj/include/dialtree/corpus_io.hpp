#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialtree/db.hpp"
#include "dialtree/dialog.hpp"
#include "dialtree/evaluator.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

// File formats (UTF-8 JSON). See README.md for field-by-field layouts.
//   ontology:    {"domains": [{"name", "slots", "requestables"}], "acts", "keyword_vocab"}
//   db:          {"<domain>": [{"name": ..., "<slot>": ...}, ...], ...}
//   corpus:      one dialog object per line (JSON Lines)
//   predictions: one {"id", "turns": [{"belief", "response"}]} object per line

using Json = nlohmann::ordered_json;

Ontology ontology_from_json(const Json& j);
Json to_json(const Ontology& ontology);
Ontology read_ontology(const std::filesystem::path& path);

EntityDb db_from_json(const Json& j, const Ontology& ontology);
Json to_json(const EntityDb& db);
EntityDb read_db(const std::filesystem::path& path, const Ontology& ontology);

/// Parses and validates one dialog object.
Dialog dialog_from_json(const Json& j, const Ontology& ontology);
Json to_json(const Dialog& dialog);

/// Reads a JSON Lines corpus. Errors name the source, line, dialog id and
/// turn index of the first problem.
std::vector<Dialog> read_corpus(std::istream& in, const Ontology& ontology,
                                const std::string& source = "<corpus>");
std::vector<Dialog> read_corpus(const std::filesystem::path& path, const Ontology& ontology);
void write_corpus(std::ostream& out, const std::vector<Dialog>& dialogs);

std::vector<PredictedDialog> read_predictions(std::istream& in, const Ontology& ontology,
                                              const std::string& source = "<predictions>");
std::vector<PredictedDialog> read_predictions(const std::filesystem::path& path, const Ontology& ontology);
Json to_json(const PredictedDialog& prediction);

Json to_json(const EvalReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dialtree
