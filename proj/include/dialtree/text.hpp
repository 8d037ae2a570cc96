#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dialtree {

std::vector<std::string> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

/// Collapses runs of whitespace to one space and trims both ends.
std::string normalize_space(std::string_view text);

std::string to_lower(std::string_view text);

/// True for tokens of the form "[...]" with a nonempty interior.
bool is_bracketed(std::string_view token);
std::string_view bracket_interior(std::string_view token);

/// True for "[value_<identifier>]" placeholders.
bool is_placeholder(std::string_view token);
std::string placeholder_for(std::string_view slot);

bool is_identifier(std::string_view name);

}  // namespace dialtree
