#ifndef HDMF_EVAL_HPP
#define HDMF_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hdmf/folksonomy.hpp"
#include "hdmf/train.hpp"

namespace hdmf {

// Cached code vectors for every user and item; scoring a pair is a dot
// product over the code dimension. The MF baseline drops its factors into
// the same shape, so ranking and evaluation run identically for both.
struct CodeScores {
  DenseMatrix user_codes;  // code_dim x |U|
  DenseMatrix item_codes;  // code_dim x |D|

  std::size_t user_count() const { return user_codes.cols(); }
  std::size_t item_count() const { return item_codes.cols(); }

  double operator()(std::uint32_t user, std::uint32_t item) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < user_codes.rows(); ++r)
      sum += user_codes(r, user) * item_codes(r, item);
    return sum;
  }
};

// Encodes every profile once (in column blocks) and caches the codes.
// Profiles must be normalized the same way as in training.
CodeScores predict_scores_hdmf(const ModelParams& user_tower, const ModelParams& item_tower,
                               const ProfileMatrix& user_profiles,
                               const ProfileMatrix& item_profiles);
CodeScores predict_scores_hdmf(const HdmfModel& model, const ProfileMatrix& user_profiles,
                               const ProfileMatrix& item_profiles);
CodeScores predict_scores_mf(const MfModel& model);

struct RankedList {
  std::uint32_t user = 0;
  std::vector<std::uint32_t> items;  // best first
};

// All items minus the exclusions, sorted by score descending with ties
// broken by ascending item index, truncated to limit.
RankedList rank_for_user(const CodeScores& scores, std::uint32_t user,
                         std::span<const std::uint32_t> excluded_sorted, std::size_t limit);

struct EvalReport {
  std::vector<std::size_t> cutoffs;
  std::vector<double> precision;  // means over users, per cutoff
  std::vector<double> recall;
  std::vector<double> f1;
  double map = 0.0;
  double mrr = 0.0;
  std::size_t user_count = 0;
};

// rankings and relevant run parallel; every user must bring at least one
// relevant item. AP and RR are computed over the full ranking.
EvalReport evaluate(std::span<const RankedList> rankings,
                    const std::vector<std::vector<std::uint32_t>>& relevant,
                    std::span<const std::size_t> cutoffs);

// Held-out protocol: relevance for a user is the items they annotated in
// the eval split and not in the training split; users without such an item
// are skipped. Ranking candidates exclude the user's training items.
struct EvalProtocol {
  std::vector<std::uint32_t> users;
  std::vector<std::vector<std::uint32_t>> exclusions;  // sorted, parallel to users
  std::vector<std::vector<std::uint32_t>> relevant;    // sorted, parallel to users
};

EvalProtocol build_eval_protocol(const SplitFolksonomy& data, std::span<const Triple> eval_split);

// Full protocol run: rank every protocol user over all candidates, then
// score. The report's user order follows the protocol (ascending user index).
EvalReport run_ranking_evaluation(const CodeScores& scores, const EvalProtocol& protocol,
                                  std::span<const std::size_t> cutoffs);

// MRR alone, without materializing rankings: the first relevant item's rank
// equals one plus the number of candidates ordered ahead of it. Agrees
// exactly with run_ranking_evaluation's ordering rule.
double mean_reciprocal_rank(const CodeScores& scores, const EvalProtocol& protocol);

inline const std::vector<std::size_t>& default_cutoffs() {
  static const std::vector<std::size_t> k{5, 15, 30, 50};
  return k;
}

// 4-significant-digit fixed-point rendering of value*100, for the report's
// percentage columns.
std::string format_percent(double value);

void write_report_text(std::ostream& out, const EvalReport& report);
void write_report_tsv(std::ostream& out, const EvalReport& report);
void write_report_files(const std::string& text_path, const std::string& tsv_path,
                        const EvalReport& report);

}  // namespace hdmf

#endif
