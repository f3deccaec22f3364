// Copyright 2026 The Scenetext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenetext/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "scenetext/errors.h"
#include "scenetext/utf8.h"

namespace scenetext {
namespace {

constexpr int kMaxNgram = 4;

using NgramCounts = std::unordered_map<std::string, int>;

bool IsAnswerPunct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == '"' || c == '\'';
}

std::string_view DigitFor(std::string_view word) {
  static constexpr std::array<std::string_view, 11> kWords = {
      "zero", "one", "two",   "three", "four", "five",
      "six",  "seven", "eight", "nine", "ten"};
  static constexpr std::array<std::string_view, 11> kDigits = {
      "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    if (word == kWords[i]) return kDigits[i];
  }
  return word;
}

// All n-grams of order 1..4, keyed by order and the joined tokens.
std::array<NgramCounts, kMaxNgram> CountNgrams(
    const std::vector<std::string>& tokens) {
  std::array<NgramCounts, kMaxNgram> counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string key;
    for (int n = 0; n < kMaxNgram && i + n < tokens.size(); ++n) {
      if (n > 0) key.push_back('\x1f');
      key += tokens[i + n];
      ++counts[n][key];
    }
  }
  return counts;
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

std::string AnlsNormalize(std::string_view text) {
  return AsciiLower(TrimWhitespace(text));
}

struct BleuStats {
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
  std::array<std::size_t, kMaxNgram> matches{};
  std::array<std::size_t, kMaxNgram> totals{};

  void Add(const BleuStats& o) {
    candidate_length += o.candidate_length;
    reference_length += o.reference_length;
    for (int n = 0; n < kMaxNgram; ++n) {
      matches[n] += o.matches[n];
      totals[n] += o.totals[n];
    }
  }

  double Score() const {
    if (candidate_length == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 0; n < kMaxNgram; ++n) {
      if (matches[n] == 0) return 0.0;
      log_sum += std::log(static_cast<double>(matches[n]) /
                          static_cast<double>(totals[n]));
    }
    double bleu = std::exp(log_sum / kMaxNgram);
    if (candidate_length < reference_length) {
      bleu *= std::exp(1.0 - static_cast<double>(reference_length) /
                                 static_cast<double>(candidate_length));
    }
    return bleu;
  }
};

BleuStats ItemBleuStats(const CaptionItem& item) {
  BleuStats s;
  const std::vector<std::string> cand = TokenizeCaption(item.candidate);
  s.candidate_length = cand.size();
  const auto cand_counts = CountNgrams(cand);
  std::array<NgramCounts, kMaxNgram> max_ref;
  bool have_ref = false;
  std::size_t best_len = 0;
  for (const std::string& ref : item.references) {
    const std::vector<std::string> toks = TokenizeCaption(ref);
    const std::size_t len = toks.size();
    const auto diff = [&](std::size_t l) {
      return l > cand.size() ? l - cand.size() : cand.size() - l;
    };
    if (!have_ref || diff(len) < diff(best_len) ||
        (diff(len) == diff(best_len) && len < best_len)) {
      best_len = len;
      have_ref = true;
    }
    const auto ref_counts = CountNgrams(toks);
    for (int n = 0; n < kMaxNgram; ++n) {
      for (const auto& [gram, c] : ref_counts[n]) {
        int& slot = max_ref[n][gram];
        slot = std::max(slot, c);
      }
    }
  }
  s.reference_length = best_len;
  for (int n = 0; n < kMaxNgram; ++n) {
    s.totals[n] = cand.size() > static_cast<std::size_t>(n)
                      ? cand.size() - n
                      : 0;
    for (const auto& [gram, c] : cand_counts[n]) {
      auto it = max_ref[n].find(gram);
      if (it != max_ref[n].end()) {
        s.matches[n] += static_cast<std::size_t>(std::min(c, it->second));
      }
    }
  }
  return s;
}

// TF-IDF weighted n-gram vector for CIDEr-D.
struct CiderVector {
  std::array<std::unordered_map<std::string, double>, kMaxNgram> weights;
  std::array<double, kMaxNgram> norms{};
  std::size_t length = 0;
};

CiderVector MakeCiderVector(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, double>& log_df, double log_n) {
  CiderVector v;
  v.length = tokens.size();
  const auto counts = CountNgrams(tokens);
  for (int n = 0; n < kMaxNgram; ++n) {
    double sq = 0.0;
    for (const auto& [gram, tf] : counts[n]) {
      auto it = log_df.find(gram);
      const double idf = log_n - (it == log_df.end() ? 0.0 : it->second);
      const double w = tf * idf;
      v.weights[n].emplace(gram, w);
      sq += w * w;
    }
    v.norms[n] = std::sqrt(sq);
  }
  return v;
}

double CiderSimilarity(const CiderVector& cand, const CiderVector& ref) {
  const double delta =
      static_cast<double>(cand.length) - static_cast<double>(ref.length);
  const double penalty =
      std::exp(-(delta * delta) / (2.0 * kCiderSigma * kCiderSigma));
  double total = 0.0;
  for (int n = 0; n < kMaxNgram; ++n) {
    double dot = 0.0;
    for (const auto& [gram, w] : cand.weights[n]) {
      auto it = ref.weights[n].find(gram);
      if (it == ref.weights[n].end()) continue;
      dot += std::min(w, it->second) * it->second;
    }
    if (cand.norms[n] != 0.0 && ref.norms[n] != 0.0) {
      dot /= cand.norms[n] * ref.norms[n];
    }
    total += dot * penalty;
  }
  return total / kMaxNgram;
}

nlohmann::json ParseJsonLine(const std::string& line, std::size_t line_no,
                             const char* what) {
  try {
    nlohmann::json doc = nlohmann::json::parse(line);
    if (!doc.is_object()) {
      throw SchemaError(std::string(what) + " line " + std::to_string(line_no) +
                        ": expected a JSON object");
    }
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + " line " + std::to_string(line_no) +
                         ": " + e.what(),
                     e.byte);
  }
}

std::string GetString(const nlohmann::json& doc, const char* key,
                      std::size_t line_no, const char* what) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw SchemaError(std::string(what) + " line " + std::to_string(line_no) +
                      ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::vector<std::string> GetStringList(const nlohmann::json& doc,
                                       const char* key, std::size_t line_no,
                                       const char* what) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    throw SchemaError(std::string(what) + " line " + std::to_string(line_no) +
                      ": missing array field '" + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw SchemaError(std::string(what) + " line " +
                        std::to_string(line_no) + ": '" + key +
                        "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string NormalizeAnswer(std::string_view text) {
  std::vector<std::string> kept;
  for (std::string& word : SplitWhitespace(AsciiLower(text))) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && IsAnswerPunct(word[b])) ++b;
    while (e > b && IsAnswerPunct(word[e - 1])) --e;
    if (b == e) continue;
    std::string_view core(word.data() + b, e - b);
    if (core == "a" || core == "an" || core == "the") continue;
    kept.emplace_back(DigitFor(core));
  }
  return JoinStrings(kept, " ");
}

double VqaAccuracyFromMatches(std::size_t matches) {
  if (matches > kVqaAnswerCount) {
    throw ContractError("match count exceeds the number of answers");
  }
  // In thirds: a subset with c matches scores min(c, 3) / 3.
  const long m = static_cast<long>(matches);
  const long numerator = m * std::min(m - 1, 3L) +
                         (static_cast<long>(kVqaAnswerCount) - m) *
                             std::min(m, 3L);
  return static_cast<double>(numerator) / 30.0;
}

double VqaAccuracy(std::string_view prediction,
                   std::span<const std::string> answers) {
  if (answers.size() != kVqaAnswerCount) {
    throw ContractError("VQA accuracy needs exactly 10 answers, got " +
                        std::to_string(answers.size()));
  }
  const std::string pred = NormalizeAnswer(prediction);
  std::size_t matches = 0;
  for (const std::string& a : answers) {
    if (NormalizeAnswer(a) == pred) ++matches;
  }
  return VqaAccuracyFromMatches(matches);
}

std::size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  return Levenshtein(std::u32string_view(DecodeUtf8(a)),
                     std::u32string_view(DecodeUtf8(b)));
}

double NormalizedLevenshteinSimilarity(std::string_view prediction,
                                       std::string_view gold) {
  const std::u32string p = DecodeUtf8(AnlsNormalize(prediction));
  const std::u32string g = DecodeUtf8(AnlsNormalize(gold));
  const std::size_t longest = std::max(p.size(), g.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(Levenshtein(p, g)) /
                   static_cast<double>(longest);
}

double Anls(std::string_view prediction, std::span<const std::string> golds,
            double tau) {
  if (golds.empty()) throw ContractError("ANLS needs at least one gold answer");
  double best = 0.0;
  for (const std::string& g : golds) {
    const double s = NormalizedLevenshteinSimilarity(prediction, g);
    if (s >= tau) best = std::max(best, s);
  }
  return best;
}

std::vector<std::string> TokenizeCaption(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    const bool word = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                      (c >= 'A' && c <= 'Z') || u >= 0x80;
    if (word) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                             : c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<double> CiderScores(std::span<const CaptionItem> items) {
  if (items.size() < 2) {
    throw ContractError("CIDEr needs at least two items for document frequencies");
  }
  std::vector<std::vector<std::vector<std::string>>> ref_tokens(items.size());
  std::unordered_map<std::string, double> df;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].references.empty()) {
      throw ContractError("caption item without references");
    }
    std::unordered_set<std::string> seen;
    for (const std::string& ref : items[i].references) {
      ref_tokens[i].push_back(TokenizeCaption(ref));
      for (const auto& order : CountNgrams(ref_tokens[i].back())) {
        for (const auto& [gram, c] : order) seen.insert(gram);
      }
    }
    for (const std::string& gram : seen) df[gram] += 1.0;
  }
  for (auto& [gram, v] : df) v = std::log(v);
  const double log_n = std::log(static_cast<double>(items.size()));

  std::vector<double> scores;
  scores.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const CiderVector cand =
        MakeCiderVector(TokenizeCaption(items[i].candidate), df, log_n);
    double sum = 0.0;
    for (const auto& toks : ref_tokens[i]) {
      sum += CiderSimilarity(cand, MakeCiderVector(toks, df, log_n));
    }
    scores.push_back(10.0 * sum / static_cast<double>(ref_tokens[i].size()));
  }
  return scores;
}

double Cider(std::span<const CaptionItem> items) {
  const std::vector<double> scores = CiderScores(items);
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

double Bleu4(std::span<const CaptionItem> items) {
  if (items.empty()) throw ContractError("BLEU needs at least one item");
  BleuStats total;
  for (const CaptionItem& item : items) {
    if (item.references.empty()) {
      throw ContractError("caption item without references");
    }
    total.Add(ItemBleuStats(item));
  }
  return total.Score();
}

double RougeL(const CaptionItem& item) {
  if (item.references.empty()) {
    throw ContractError("ROUGE-L needs at least one reference");
  }
  const std::vector<std::string> cand = TokenizeCaption(item.candidate);
  double best = 0.0;
  for (const std::string& ref : item.references) {
    const std::vector<std::string> toks = TokenizeCaption(ref);
    if (cand.empty() && toks.empty()) {
      best = 1.0;
      continue;
    }
    const std::size_t lcs = LcsLength(cand, toks);
    if (lcs == 0) continue;
    const double p = static_cast<double>(lcs) / static_cast<double>(cand.size());
    const double r = static_cast<double>(lcs) / static_cast<double>(toks.size());
    const double b2 = kRougeBeta * kRougeBeta;
    best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
  }
  return best;
}

EvalTask ParseEvalTask(std::string_view name) {
  const std::string lower = AsciiLower(TrimWhitespace(name));
  if (lower == "vqa") return EvalTask::kVqa;
  if (lower == "vqa_anls" || lower == "vqa-anls") return EvalTask::kVqaAnls;
  if (lower == "caption") return EvalTask::kCaption;
  throw ConfigError("unknown evaluation task '" + std::string(name) +
                    "' (expected vqa, vqa_anls or caption)");
}

std::string_view EvalTaskName(EvalTask task) {
  switch (task) {
    case EvalTask::kVqa:
      return "VQA";
    case EvalTask::kVqaAnls:
      return "VQA_ANLS";
    case EvalTask::kCaption:
      return "CAPTION";
  }
  return "?";
}

MetricReport Evaluate(std::istream& predictions, std::istream& gold,
                      EvalTask task, const EvalOptions& options) {
  std::map<std::string, std::string> preds;
  std::map<std::string, std::vector<std::string>> golds;
  std::vector<std::string> duplicates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(predictions, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    const nlohmann::json doc = ParseJsonLine(line, line_no, "predictions");
    std::string id = GetString(doc, "example_id", line_no, "predictions");
    std::string pred = GetString(doc, "prediction", line_no, "predictions");
    if (!preds.emplace(id, std::move(pred)).second) duplicates.push_back(id);
  }
  const char* gold_key = task == EvalTask::kCaption ? "references" : "answers";
  line_no = 0;
  while (std::getline(gold, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    const nlohmann::json doc = ParseJsonLine(line, line_no, "gold");
    std::string id = GetString(doc, "example_id", line_no, "gold");
    auto list = GetStringList(doc, gold_key, line_no, "gold");
    if (!golds.emplace(id, std::move(list)).second) duplicates.push_back(id);
  }
  if (!duplicates.empty()) {
    throw AlignmentError("duplicate example_id: " + duplicates.front(), {}, {});
  }

  std::vector<std::string> missing;
  std::vector<std::string> unknown;
  for (const auto& [id, g] : golds) {
    if (!preds.contains(id)) missing.push_back(id);
  }
  for (const auto& [id, p] : preds) {
    if (!golds.contains(id)) unknown.push_back(id);
  }
  if (preds.empty() || !missing.empty() || !unknown.empty()) {
    std::string msg = preds.empty() ? "no predictions"
                                    : "predictions and gold do not align";
    msg += " (" + std::to_string(missing.size()) + " gold ids without prediction, " +
           std::to_string(unknown.size()) + " predictions without gold)";
    throw AlignmentError(msg, std::move(missing), std::move(unknown));
  }

  MetricReport report;
  report.task = task;
  report.n_items = golds.size();
  if (task == EvalTask::kCaption) {
    std::vector<CaptionItem> items;
    for (const auto& [id, refs] : golds) {
      items.push_back({preds.at(id), refs});
    }
    const std::vector<double> cider = CiderScores(items);
    double rouge_sum = 0.0;
    double cider_sum = 0.0;
    std::size_t i = 0;
    for (const auto& [id, refs] : golds) {
      ItemScore s{id, {}};
      s.scores["bleu4"] = Bleu4(std::span<const CaptionItem>(&items[i], 1));
      s.scores["rougeL"] = RougeL(items[i]);
      s.scores["cider"] = cider[i];
      rouge_sum += s.scores["rougeL"];
      cider_sum += cider[i];
      report.per_item.push_back(std::move(s));
      ++i;
    }
    const double n = static_cast<double>(items.size());
    report.aggregate["bleu4"] = Bleu4(items);
    report.aggregate["rougeL"] = rouge_sum / n;
    report.aggregate["cider"] = cider_sum / n;
  } else {
    double acc_sum = 0.0;
    double anls_sum = 0.0;
    for (const auto& [id, answers] : golds) {
      ItemScore s{id, {}};
      const std::string& pred = preds.at(id);
      s.scores["accuracy"] = VqaAccuracy(pred, answers);
      acc_sum += s.scores["accuracy"];
      if (task == EvalTask::kVqaAnls) {
        s.scores["anls"] = Anls(pred, answers, options.tau);
        anls_sum += s.scores["anls"];
      }
      report.per_item.push_back(std::move(s));
    }
    const double n = static_cast<double>(golds.size());
    report.aggregate["accuracy"] = acc_sum / n;
    if (task == EvalTask::kVqaAnls) report.aggregate["anls"] = anls_sum / n;
  }
  return report;
}

MetricReport EvaluateFiles(const std::string& predictions_path,
                           const std::string& gold_path, EvalTask task,
                           const EvalOptions& options) {
  std::ifstream pred(predictions_path);
  if (!pred) throw std::runtime_error("cannot open " + predictions_path);
  std::ifstream gold(gold_path);
  if (!gold) throw std::runtime_error("cannot open " + gold_path);
  return Evaluate(pred, gold, task, options);
}

std::string MetricReportToJson(const MetricReport& report,
                               bool include_per_item) {
  nlohmann::ordered_json doc;
  doc["task"] = EvalTaskName(report.task);
  doc["n_items"] = report.n_items;
  doc["aggregate"] = report.aggregate;
  if (include_per_item) {
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const ItemScore& s : report.per_item) {
      nlohmann::ordered_json item;
      item["example_id"] = s.example_id;
      for (const auto& [k, v] : s.scores) item[k] = v;
      items.push_back(std::move(item));
    }
    doc["per_item"] = std::move(items);
  }
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace scenetext
