#ifndef HDMF_FOLKSONOMY_HPP
#define HDMF_FOLKSONOMY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hdmf/tensor.hpp"

namespace hdmf {

// One raw (user, tag, item) annotation as read from the input stream.
// Duplicates are allowed here; the Folksonomy deduplicates.
struct Assignment {
  std::string user;
  std::string tag;
  std::string item;
};

struct ColumnMapping {
  std::size_t user_col = 0;
  std::size_t tag_col = 1;
  std::size_t item_col = 2;
  enum class Header { Auto, Present, Absent };
  Header header = Header::Auto;
};

struct ParseReport {
  std::vector<std::pair<std::size_t, std::string>> bad_rows;  // 1-based line, reason
  std::size_t data_rows = 0;  // rows attempted after any header
  bool header_skipped = false;
};

// Reads tab-separated assignments. Extra columns (timestamps etc.) are
// ignored. Malformed rows are collected in the report; more than 10% of
// rows failing is fatal. Header auto-detection: line 1 is a header when
// every configured column holds a purely alphabetic/underscore token
// (identifiers in tagging dumps carry digits, header names do not).
std::vector<Assignment> load_assignments(const std::string& path,
                                         const ColumnMapping& cols,
                                         ParseReport* report = nullptr);

// Index triple into the vocabularies: {user, tag, item}.
using Triple = std::array<std::uint32_t, 3>;

// Deduplicated assignment set plus the three vocabularies. Vocabulary order
// is the first-seen order of the input stream, which makes every downstream
// matrix deterministic.
struct Folksonomy {
  std::vector<std::string> users;
  std::vector<std::string> tags;
  std::vector<std::string> items;
  std::vector<Triple> assignments;  // unique triples, first-seen order

  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, std::uint32_t> tag_index;
  std::unordered_map<std::string, std::uint32_t> item_index;

  std::size_t user_count() const { return users.size(); }
  std::size_t tag_count() const { return tags.size(); }
  std::size_t item_count() const { return items.size(); }

  void rebuild_index_maps();
};

Folksonomy build_folksonomy(std::span<const Assignment> raw);

// Keeps only tags used at least min_uses times (counted over the unique
// assignment set), drops assignments of removed tags, then prunes users and
// items left with no assignments. Errors when no tag survives.
Folksonomy filter_infrequent_tags(const Folksonomy& f, std::size_t min_uses);

// A split's slice of assignments, sharing the parent vocabularies.
struct FolksonomyView {
  const Folksonomy* vocab = nullptr;
  std::span<const Triple> assignments;
};

struct SplitRatios {
  double train = 0.8;
  double valid = 0.05;
  double test = 0.15;
};

struct SplitFolksonomy {
  Folksonomy base;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;

  FolksonomyView train_view() const { return {&base, train}; }
  FolksonomyView valid_view() const { return {&base, valid}; }
  FolksonomyView test_view() const { return {&base, test}; }
};

// Assignment-level split: seeded shuffle, then largest-remainder
// apportionment of the three sizes (ties go to the earlier split).
SplitFolksonomy split_assignments(const Folksonomy& f, SplitRatios ratios, std::uint64_t seed);

// Tag-count profiles, one row per user (or item), |T| columns.
struct ProfileMatrix {
  enum class Kind { Users, Items };
  Kind kind = Kind::Users;
  DenseMatrix counts;

  std::size_t rows() const { return counts.rows(); }
  std::size_t cols() const { return counts.cols(); }
};

std::pair<ProfileMatrix, ProfileMatrix> build_profiles(const FolksonomyView& split);

// Divides each row by its maximum entry, mapping counts into [0, 1].
// A zero row is an error; callers that can see structurally-cold rows
// (per-split profiles) use the lenient variant, which leaves them zero.
ProfileMatrix normalize_profiles(const ProfileMatrix& m);
ProfileMatrix normalize_profiles_lenient(const ProfileMatrix& m, std::size_t* zero_rows = nullptr);

struct RatingEntry {
  std::uint32_t user;
  std::uint32_t item;
  double value;
};

// Sparse observed ratings: r_ij = number of distinct tags user i put on
// item j within the split. Entries sorted by (user, item); absence means
// the cell is unobserved.
struct RatingMatrix {
  std::size_t user_count = 0;
  std::size_t item_count = 0;
  std::vector<RatingEntry> entries;
};

RatingMatrix build_rating_matrix(const FolksonomyView& split);
RatingMatrix binarize(const RatingMatrix& r);

// Prepared-dataset cache: vocabulary files (one token per line) plus the
// three split TSVs. Regeneration is byte-identical for identical inputs.
void write_dataset_cache(const std::string& dir, const SplitFolksonomy& split);
SplitFolksonomy read_dataset_cache(const std::string& dir);

}  // namespace hdmf

#endif
