#include "hdmf/folksonomy.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hdmf/errors.hpp"
#include "hdmf/rng.hpp"

namespace hdmf {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool alphabetic_token(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!std::isalpha(c) && c != '_') return false;
  }
  return true;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::size_t h = t[0];
    h = h * 1000003u ^ t[1];
    h = h * 1000003u ^ t[2];
    return h;
  }
};

std::uint32_t intern(const std::string& token, std::vector<std::string>& vocab,
                     std::unordered_map<std::string, std::uint32_t>& index) {
  auto it = index.find(token);
  if (it != index.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(vocab.size());
  vocab.push_back(token);
  index.emplace(token, id);
  return id;
}

}  // namespace

void Folksonomy::rebuild_index_maps() {
  user_index.clear();
  tag_index.clear();
  item_index.clear();
  for (std::uint32_t i = 0; i < users.size(); ++i) user_index.emplace(users[i], i);
  for (std::uint32_t i = 0; i < tags.size(); ++i) tag_index.emplace(tags[i], i);
  for (std::uint32_t i = 0; i < items.size(); ++i) item_index.emplace(items[i], i);
}

std::vector<Assignment> load_assignments(const std::string& path, const ColumnMapping& cols,
                                         ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open assignment file: " + path);

  const std::size_t needed = std::max({cols.user_col, cols.tag_col, cols.item_col}) + 1;
  ParseReport local;
  ParseReport& rep = report ? *report : local;

  std::vector<Assignment> out;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);

    if (first_content_line) {
      first_content_line = false;
      bool is_header = cols.header == ColumnMapping::Header::Present;
      if (cols.header == ColumnMapping::Header::Auto && fields.size() >= needed) {
        is_header = alphabetic_token(fields[cols.user_col]) &&
                    alphabetic_token(fields[cols.tag_col]) &&
                    alphabetic_token(fields[cols.item_col]);
      }
      if (is_header) {
        rep.header_skipped = true;
        continue;
      }
    }

    ++rep.data_rows;
    if (fields.size() < needed) {
      rep.bad_rows.emplace_back(line_no, "expected at least " + std::to_string(needed) +
                                             " columns, got " + std::to_string(fields.size()));
      continue;
    }
    const std::string& user = fields[cols.user_col];
    const std::string& tag = fields[cols.tag_col];
    const std::string& item = fields[cols.item_col];
    if (user.empty() || tag.empty() || item.empty()) {
      rep.bad_rows.emplace_back(line_no, "empty identifier");
      continue;
    }
    out.push_back(Assignment{user, tag, item});
  }

  if (rep.data_rows > 0 && rep.bad_rows.size() * 10 > rep.data_rows) {
    throw DataError("more than 10% of rows malformed in " + path + " (" +
                    std::to_string(rep.bad_rows.size()) + " of " + std::to_string(rep.data_rows) +
                    ")");
  }
  return out;
}

Folksonomy build_folksonomy(std::span<const Assignment> raw) {
  Folksonomy f;
  std::unordered_set<Triple, TripleHash> seen;
  for (const Assignment& a : raw) {
    if (a.user.empty() || a.tag.empty() || a.item.empty())
      throw DataError("assignment with empty identifier");
    const Triple t{intern(a.user, f.users, f.user_index), intern(a.tag, f.tags, f.tag_index),
                   intern(a.item, f.items, f.item_index)};
    if (seen.insert(t).second) f.assignments.push_back(t);
  }
  return f;
}

Folksonomy filter_infrequent_tags(const Folksonomy& f, std::size_t min_uses) {
  if (min_uses < 1) throw ConfigError("min_uses must be >= 1");

  std::vector<std::size_t> tag_uses(f.tag_count(), 0);
  for (const Triple& t : f.assignments) ++tag_uses[t[1]];

  std::vector<bool> tag_kept(f.tag_count(), false);
  bool any_tag = false;
  for (std::size_t i = 0; i < tag_uses.size(); ++i) {
    tag_kept[i] = tag_uses[i] >= min_uses;
    any_tag = any_tag || tag_kept[i];
  }
  if (!any_tag) throw DataError("no tag used at least " + std::to_string(min_uses) + " times");

  // Surviving assignments decide which users/items stay in the vocabularies.
  std::vector<bool> user_kept(f.user_count(), false);
  std::vector<bool> item_kept(f.item_count(), false);
  for (const Triple& t : f.assignments) {
    if (tag_kept[t[1]]) {
      user_kept[t[0]] = true;
      item_kept[t[2]] = true;
    }
  }

  constexpr auto kDropped = static_cast<std::uint32_t>(-1);
  auto remap = [kDropped](const std::vector<bool>& kept) {
    std::vector<std::uint32_t> map(kept.size(), kDropped);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (kept[i]) map[i] = next++;
    return map;
  };
  const auto user_map = remap(user_kept);
  const auto tag_map = remap(tag_kept);
  const auto item_map = remap(item_kept);

  Folksonomy out;
  for (std::size_t i = 0; i < f.users.size(); ++i)
    if (user_kept[i]) out.users.push_back(f.users[i]);
  for (std::size_t i = 0; i < f.tags.size(); ++i)
    if (tag_kept[i]) out.tags.push_back(f.tags[i]);
  for (std::size_t i = 0; i < f.items.size(); ++i)
    if (item_kept[i]) out.items.push_back(f.items[i]);
  out.rebuild_index_maps();

  out.assignments.reserve(f.assignments.size());
  for (const Triple& t : f.assignments) {
    if (tag_kept[t[1]])
      out.assignments.push_back(Triple{user_map[t[0]], tag_map[t[1]], item_map[t[2]]});
  }
  return out;
}

SplitFolksonomy split_assignments(const Folksonomy& f, SplitRatios ratios, std::uint64_t seed) {
  const double fractions[3] = {ratios.train, ratios.valid, ratios.test};
  double sum = 0.0;
  for (double p : fractions) {
    if (p <= 0.0) throw ConfigError("split ratios must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");

  const std::size_t n = f.assignments.size();
  if (n < 3) throw DataError("need at least 3 assignments to split");

  // Largest-remainder apportionment; remainder ties go to the earlier split.
  std::size_t counts[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = static_cast<double>(n) * fractions[k];
    counts[k] = static_cast<std::size_t>(exact);
    remainders[k] = exact - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  std::size_t leftover = n - assigned;
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; leftover > 0; i = (i + 1) % 3, --leftover) ++counts[order[i]];

  std::vector<Triple> shuffled = f.assignments;
  Rng rng(seed);
  rng.shuffle(shuffled);

  SplitFolksonomy out;
  out.base = f;
  out.train.assign(shuffled.begin(), shuffled.begin() + counts[0]);
  out.valid.assign(shuffled.begin() + counts[0], shuffled.begin() + counts[0] + counts[1]);
  out.test.assign(shuffled.begin() + counts[0] + counts[1], shuffled.end());
  return out;
}

std::pair<ProfileMatrix, ProfileMatrix> build_profiles(const FolksonomyView& split) {
  if (split.assignments.empty()) throw DataError("cannot build profiles from an empty split");
  const Folksonomy& f = *split.vocab;

  ProfileMatrix users{ProfileMatrix::Kind::Users, DenseMatrix(f.user_count(), f.tag_count())};
  ProfileMatrix items{ProfileMatrix::Kind::Items, DenseMatrix(f.item_count(), f.tag_count())};
  for (const Triple& t : split.assignments) {
    users.counts(t[0], t[1]) += 1.0;
    items.counts(t[2], t[1]) += 1.0;
  }
  return {std::move(users), std::move(items)};
}

namespace {

ProfileMatrix normalize_impl(const ProfileMatrix& m, bool allow_zero_rows,
                             std::size_t* zero_rows) {
  ProfileMatrix out = m;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < out.counts.rows(); ++i) {
    auto row = out.counts.row(i);
    double row_max = 0.0;
    for (double v : row) {
      if (v < 0.0) throw DataError("profile matrix has a negative entry");
      row_max = std::max(row_max, v);
    }
    if (row_max == 0.0) {
      if (!allow_zero_rows)
        throw DataError("profile row " + std::to_string(i) + " is all zeros");
      ++zeros;
      continue;
    }
    for (double& v : row) v /= row_max;
  }
  if (zero_rows) *zero_rows = zeros;
  return out;
}

}  // namespace

ProfileMatrix normalize_profiles(const ProfileMatrix& m) {
  return normalize_impl(m, false, nullptr);
}

ProfileMatrix normalize_profiles_lenient(const ProfileMatrix& m, std::size_t* zero_rows) {
  return normalize_impl(m, true, zero_rows);
}

RatingMatrix build_rating_matrix(const FolksonomyView& split) {
  if (split.assignments.empty())
    throw DataError("cannot build a rating matrix from an empty split");
  const Folksonomy& f = *split.vocab;

  // The view's triples are unique, so counting (user, item) occurrences
  // counts distinct tags.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  cells.reserve(split.assignments.size());
  for (const Triple& t : split.assignments) cells.emplace_back(t[0], t[2]);
  std::sort(cells.begin(), cells.end());

  RatingMatrix r;
  r.user_count = f.user_count();
  r.item_count = f.item_count();
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    r.entries.push_back(RatingEntry{cells[i].first, cells[i].second, static_cast<double>(j - i)});
    i = j;
  }
  return r;
}

RatingMatrix binarize(const RatingMatrix& r) {
  RatingMatrix out = r;
  for (RatingEntry& e : out.entries) e.value = 1.0;
  return out;
}

namespace {

constexpr const char* kVocabFiles[3] = {"users.txt", "tags.txt", "items.txt"};
constexpr const char* kSplitFiles[3] = {"train.tsv", "valid.tsv", "test.tsv"};

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const std::string& l : lines) out << l << '\n';
}

void write_split(const std::filesystem::path& path, const Folksonomy& f,
                 std::span<const Triple> triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const Triple& t : triples)
    out << f.users[t[0]] << '\t' << f.tags[t[1]] << '\t' << f.items[t[2]] << '\n';
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

void write_dataset_cache(const std::string& dir, const SplitFolksonomy& split) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  write_lines(root / kVocabFiles[0], split.base.users);
  write_lines(root / kVocabFiles[1], split.base.tags);
  write_lines(root / kVocabFiles[2], split.base.items);
  write_split(root / kSplitFiles[0], split.base, split.train);
  write_split(root / kSplitFiles[1], split.base, split.valid);
  write_split(root / kSplitFiles[2], split.base, split.test);
}

SplitFolksonomy read_dataset_cache(const std::string& dir) {
  const std::filesystem::path root(dir);
  SplitFolksonomy out;
  out.base.users = read_lines(root / kVocabFiles[0]);
  out.base.tags = read_lines(root / kVocabFiles[1]);
  out.base.items = read_lines(root / kVocabFiles[2]);
  out.base.rebuild_index_maps();

  auto read_split = [&](const char* name) {
    std::vector<Triple> triples;
    for (const std::string& line : read_lines(root / name)) {
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 3) throw DataError(std::string(name) + ": malformed row");
      const auto u = out.base.user_index.find(fields[0]);
      const auto t = out.base.tag_index.find(fields[1]);
      const auto d = out.base.item_index.find(fields[2]);
      if (u == out.base.user_index.end() || t == out.base.tag_index.end() ||
          d == out.base.item_index.end())
        throw DataError(std::string(name) + ": token missing from vocabulary");
      triples.push_back(Triple{u->second, t->second, d->second});
    }
    return triples;
  };
  out.train = read_split(kSplitFiles[0]);
  out.valid = read_split(kSplitFiles[1]);
  out.test = read_split(kSplitFiles[2]);

  out.base.assignments.clear();
  out.base.assignments.reserve(out.train.size() + out.valid.size() + out.test.size());
  for (const auto* part : {&out.train, &out.valid, &out.test})
    out.base.assignments.insert(out.base.assignments.end(), part->begin(), part->end());
  return out;
}

}  // namespace hdmf
