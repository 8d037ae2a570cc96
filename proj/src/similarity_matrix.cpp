#include "dialtree/similarity_matrix.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <fstream>
#include <sstream>
#include <thread>

#include "dialtree/action_tree.hpp"
#include "dialtree/codec.hpp"
#include "dialtree/error.hpp"

namespace dialtree {

ActionVocab::ActionVocab(std::vector<std::string> actions) {
  for (auto& a : actions) {
    if (index_.count(a)) throw ValidationError("duplicate vocabulary entry '" + a + "'");
    index_.emplace(a, actions_.size());
    actions_.push_back(std::move(a));
  }
}

std::size_t ActionVocab::add(const std::string& action) {
  auto [it, inserted] = index_.emplace(action, actions_.size());
  if (inserted) actions_.push_back(action);
  return it->second;
}

std::optional<std::size_t> ActionVocab::find(const std::string& action) const {
  auto it = index_.find(action);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ActionVocab collect_vocab(std::span<const Dialog> corpus) {
  ActionVocab vocab;
  for (const auto& d : corpus)
    for (const auto& t : d.turns) vocab.add(serialize_action(t.action));
  return vocab;
}

SimilarityMatrix::SimilarityMatrix(ActionVocab vocab, std::vector<float> values)
    : vocab_(std::move(vocab)), values_(std::move(values)) {
  if (values_.size() != vocab_.size() * vocab_.size())
    throw ShapeError("matrix payload has " + std::to_string(values_.size()) +
                     " values for a vocabulary of " + std::to_string(vocab_.size()));
}

SimilarityMatrix build_matrix(const ActionVocab& vocab, const Ontology& ontology, unsigned threads,
                              BuildStats* stats) {
  const std::size_t n = vocab.size();
  if (n == 0) throw ValidationError("cannot build a similarity matrix over an empty vocabulary");
  std::vector<ActionTree> trees;
  trees.reserve(n);
  for (std::size_t i = 0; i < n; ++i) trees.push_back(to_tree(parse_action(vocab[i], ontology)));

  std::vector<float> values(n * n, 0.0f);
  std::atomic<std::size_t> next_row{0};
  std::atomic<std::size_t> evaluations{0};
  auto worker = [&] {
    std::size_t local = 0;
    // Rows are claimed dynamically; row i costs n-i-1 distances.
    for (std::size_t i = next_row++; i < n; i = next_row++) {
      values[i * n + i] = 1.0f;
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto s = static_cast<float>(similarity(trees[i], trees[j]));
        values[i * n + j] = s;
        values[j * n + i] = s;
        ++local;
      }
    }
    evaluations += local;
  };

  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (stats) stats->distance_evaluations = evaluations.load();
  return SimilarityMatrix(vocab, std::move(values));
}

namespace {

constexpr std::array<char, 4> kMagic = {'A', 'T', 'S', 'M'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
bool get_le(std::istream& in, T& v) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(bytes[i]) << (8 * i));
  return true;
}

}  // namespace

void write_matrix_values(std::ostream& out, std::uint32_t n, std::span<const float> values) {
  if (values.size() != static_cast<std::size_t>(n) * n) throw ShapeError("matrix payload size mismatch");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint32_t>(out, n);
  for (float v : values) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
}

std::vector<float> read_matrix_values(std::istream& in, std::uint32_t* n_out) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw FormatError("not a similarity matrix file (bad magic)");
  std::uint16_t version = 0;
  if (!get_le(in, version)) throw CorruptionError("truncated matrix header");
  if (version != kVersion)
    throw FormatError("unsupported matrix version " + std::to_string(version));
  std::uint32_t n = 0;
  if (!get_le(in, n)) throw CorruptionError("truncated matrix header");

  const std::uint64_t count = static_cast<std::uint64_t>(n) * n;
  // Compare against the remaining payload before allocating.
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    const auto remaining = static_cast<std::uint64_t>(end - here);
    if (remaining != count * 4)
      throw CorruptionError("matrix declares N=" + std::to_string(n) + " but payload holds " +
                            std::to_string(remaining) + " bytes");
  }
  std::vector<float> values;
  values.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint32_t bits = 0;
    if (!get_le(in, bits)) throw CorruptionError("truncated matrix payload");
    values.push_back(std::bit_cast<float>(bits));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after matrix payload");
  if (n_out) *n_out = n;
  return values;
}

void save_matrix(const SimilarityMatrix& m, const std::filesystem::path& matrix_path,
                 const std::filesystem::path& vocab_path) {
  std::ofstream bin(matrix_path, std::ios::binary);
  if (!bin) throw Error("cannot write " + matrix_path.string());
  write_matrix_values(bin, static_cast<std::uint32_t>(m.size()), m.values());
  std::ofstream txt(vocab_path, std::ios::binary);
  if (!txt) throw Error("cannot write " + vocab_path.string());
  for (const auto& a : m.vocab().actions()) txt << a << '\n';
  if (!bin || !txt) throw Error("write failed for " + matrix_path.string());
}

SimilarityMatrix load_matrix(const std::filesystem::path& matrix_path,
                             const std::filesystem::path& vocab_path) {
  std::ifstream bin(matrix_path, std::ios::binary);
  if (!bin) throw Error("cannot read " + matrix_path.string());
  std::uint32_t n = 0;
  auto values = read_matrix_values(bin, &n);

  std::ifstream txt(vocab_path, std::ios::binary);
  if (!txt) throw Error("cannot read " + vocab_path.string());
  std::vector<std::string> actions;
  for (std::string line; std::getline(txt, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    actions.push_back(std::move(line));
  }
  if (actions.size() != n)
    throw CorruptionError("vocabulary has " + std::to_string(actions.size()) +
                          " lines but matrix has N=" + std::to_string(n));
  return SimilarityMatrix(ActionVocab(std::move(actions)), std::move(values));
}

std::vector<double> sampling_row(const SimilarityMatrix& m, std::size_t i) {
  const std::size_t n = m.size();
  if (i >= n) throw RangeError("row " + std::to_string(i) + " out of range for N=" + std::to_string(n));
  if (n < 2) throw NoCandidateError("vocabulary of size 1 has no negative candidates");
  std::vector<double> p(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) total += static_cast<double>(m.at(i, j));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    p[j] = total > 0.0 ? static_cast<double>(m.at(i, j)) / total : 1.0 / static_cast<double>(n - 1);
  }
  return p;
}

}  // namespace dialtree
