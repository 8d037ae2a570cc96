#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace dialtree {

/// Discretized count of database entities matching a belief state.
enum class DbBucket { Zero, One, Two, Three, Many };

/// 0, 1, 2, 3 map to their own bucket; 4 or more is Many.
DbBucket bucketize(std::size_t count);

std::string_view to_string(DbBucket bucket);
DbBucket parse_db_bucket(std::string_view name);

}  // namespace dialtree
