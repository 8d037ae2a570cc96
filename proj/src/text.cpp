#include "dialtree/text.hpp"

#include <cctype>

namespace dialtree {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

std::string normalize_space(std::string_view text) { return join(split_whitespace(text)); }

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_bracketed(std::string_view token) {
  return token.size() > 2 && token.front() == '[' && token.back() == ']';
}

std::string_view bracket_interior(std::string_view token) {
  return token.substr(1, token.size() - 2);
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '-')) return false;
  }
  return true;
}

bool is_placeholder(std::string_view token) {
  constexpr std::string_view prefix = "[value_";
  if (token.size() <= prefix.size() + 1 || token.substr(0, prefix.size()) != prefix ||
      token.back() != ']')
    return false;
  return is_identifier(token.substr(prefix.size(), token.size() - prefix.size() - 1));
}

std::string placeholder_for(std::string_view slot) {
  return "[value_" + std::string(slot) + "]";
}

}  // namespace dialtree
