#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"
#include "cybermoraba/tokens.hpp"

namespace cybermoraba {

struct Verdict {
  Role winner = Role::Defender;
  std::string feedback;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

using TokenPair = std::pair<std::string, std::string>;  // (attack id, defense id)

/// The judge: (attack, defense) -> verdict.
class MatchupMatrix {
 public:
  void set(const std::string& attack, const std::string& defend, Verdict v) {
    entries_[{attack, defend}] = std::move(v);
  }

  const Verdict* find(const std::string& attack, const std::string& defend) const {
    auto it = entries_.find({attack, defend});
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<TokenPair, Verdict>& entries() const { return entries_; }

 private:
  std::map<TokenPair, Verdict> entries_;
};

inline Verdict judge_verdict(const MatchupMatrix& matrix, const std::string& attack,
                             const std::string& defend) {
  const Verdict* v = matrix.find(attack, defend);
  if (v == nullptr) {
    throw GameError(ErrorCode::unknown_token, "no verdict for (" + attack + ", " + defend + ")");
  }
  return *v;
}

/// Defense tokens that beat every attack under the default completion rule.
inline const std::set<std::string>& default_safe_defenses() {
  static const std::set<std::string> safe{"D1", "D2", "D3", "D4", "D5",
                                          "D9", "D10", "D12", "D13"};
  return safe;
}

/// The eight judged pairings of the published sample game, with their
/// feedback messages. They override the generated messages of the default.
inline const std::vector<std::pair<TokenPair, Verdict>>& published_verdicts() {
  static const std::vector<std::pair<TokenPair, Verdict>> rows{
      {{"A1", "D5"}, {Role::Defender, "Never trust malicious emails"}},
      {{"A11", "D1"}, {Role::Defender, "Keep denying malicious links"}},
      {{"A3", "D4"}, {Role::Defender, "Identification of malicious chats"}},
      {{"A2", "D7"}, {Role::Attacker, "The defender trusted a malicious call"}},
      {{"A7", "D12"}, {Role::Defender, "Secured connection suggested"}},
      {{"A8", "D4"}, {Role::Defender, "Malicious access identified"}},
      {{"A10", "D6"}, {Role::Attacker, "Data loss occurred"}},
      {{"A11", "D8"}, {Role::Attacker, "Malicious link used"}},
  };
  return rows;
}

inline std::string generated_feedback(const Token& attack, const Token& defend, Role winner) {
  if (winner == Role::Defender) {
    return "Effective defense: " + defend.definition + " against " + attack.definition;
  }
  return attack.label + " succeeded: " + attack.definition;
}

inline MatchupMatrix build_default_matrix(const TokenCatalog& catalog) {
  MatchupMatrix m;
  const auto& safe = default_safe_defenses();
  for (const Token& a : catalog.attack()) {
    for (const Token& d : catalog.defend()) {
      const Role winner = safe.count(d.id) ? Role::Defender : Role::Attacker;
      m.set(a.id, d.id, {winner, generated_feedback(a, d, winner)});
    }
  }
  for (const auto& [pair, verdict] : published_verdicts()) {
    m.set(pair.first, pair.second, verdict);
  }
  return m;
}

inline std::shared_ptr<const MatchupMatrix> default_matrix() {
  static const auto matrix =
      std::make_shared<const MatchupMatrix>(build_default_matrix(*default_catalog()));
  return matrix;
}

// ---------------------------------------------------------------------------
// Matrix file format (UTF-8, tab separated):
//
//   #cybermoraba-matrix 1
//   A1<TAB>D1<TAB>defender<TAB>Effective defense: ...
//
// Further lines starting with '#' and blank lines are ignored. Messages may
// not contain tabs or newlines.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kMatrixHeader = "#cybermoraba-matrix 1";

struct MatrixRow {
  int line = 0;
  std::string attack;
  std::string defend;
  Role winner = Role::Defender;
  std::string message;
};

inline std::vector<MatrixRow> parse_matrix_rows(std::istream& in) {
  std::vector<MatrixRow> rows;
  std::string text;
  int line = 0;
  bool header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!header) {
      if (text != kMatrixHeader) {
        throw GameError(ErrorCode::malformed, "line 1: expected header '" +
                                                  std::string(kMatrixHeader) + "'");
      }
      header = true;
      continue;
    }
    if (text.empty() || text[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const std::size_t tab = text.find('\t', start);
      if (tab == std::string::npos) break;
      fields.push_back(text.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(text.substr(start));
    if (fields.size() != 4) {
      throw GameError(ErrorCode::malformed,
                      "line " + std::to_string(line) + ": expected 4 tab-separated fields");
    }
    MatrixRow row{line, fields[0], fields[1], Role::Defender, fields[3]};
    try {
      row.winner = role_from_string(fields[2]);
    } catch (const GameError&) {
      throw GameError(ErrorCode::malformed,
                      "line " + std::to_string(line) + ": bad winner '" + fields[2] + "'");
    }
    rows.push_back(std::move(row));
  }
  if (!header) throw GameError(ErrorCode::malformed, "empty matrix file");
  return rows;
}

struct MatrixReport {
  std::size_t expected = 0;
  std::size_t present = 0;  // distinct valid pairs
  std::vector<TokenPair> missing;
  std::vector<TokenPair> duplicates;
  std::vector<std::string> unknown;  // "line N: A14" or the bare id
  std::vector<TokenPair> empty_messages;

  bool ok() const {
    return missing.empty() && duplicates.empty() && unknown.empty() && empty_messages.empty();
  }

  std::string text() const {
    std::ostringstream os;
    os << present << '/' << expected << " pairs\n";
    for (const auto& [a, d] : missing) os << "missing pair: " << a << ' ' << d << '\n';
    for (const auto& [a, d] : duplicates) os << "duplicate pair: " << a << ' ' << d << '\n';
    for (const auto& id : unknown) os << "unknown token: " << id << '\n';
    for (const auto& [a, d] : empty_messages) os << "empty message: " << a << ' ' << d << '\n';
    return os.str();
  }
};

namespace detail {

inline void fill_missing(MatrixReport& report, const TokenCatalog& catalog,
                         const std::set<TokenPair>& seen) {
  report.expected = catalog.attack().size() * catalog.defend().size();
  for (const Token& a : catalog.attack()) {
    for (const Token& d : catalog.defend()) {
      if (!seen.count({a.id, d.id})) report.missing.emplace_back(a.id, d.id);
    }
  }
}

inline bool known(const TokenCatalog& catalog, const std::string& id, Role role) {
  const Token* t = catalog.find(id);
  return t != nullptr && t->role == role;
}

}  // namespace detail

inline MatrixReport validate_matrix_rows(const std::vector<MatrixRow>& rows,
                                         const TokenCatalog& catalog) {
  MatrixReport report;
  std::set<TokenPair> seen;
  for (const MatrixRow& row : rows) {
    bool valid = true;
    for (const auto& [id, role] : {std::pair{row.attack, Role::Attacker},
                                   std::pair{row.defend, Role::Defender}}) {
      if (!detail::known(catalog, id, role)) {
        report.unknown.push_back("line " + std::to_string(row.line) + ": " + id);
        valid = false;
      }
    }
    if (!valid) continue;
    if (!seen.insert({row.attack, row.defend}).second) {
      report.duplicates.emplace_back(row.attack, row.defend);
    }
    if (row.message.empty()) report.empty_messages.emplace_back(row.attack, row.defend);
  }
  report.present = seen.size();
  detail::fill_missing(report, catalog, seen);
  return report;
}

inline MatrixReport validate_matrix(const MatchupMatrix& matrix, const TokenCatalog& catalog) {
  MatrixReport report;
  std::set<TokenPair> seen;
  for (const auto& [pair, verdict] : matrix.entries()) {
    const bool a_ok = detail::known(catalog, pair.first, Role::Attacker);
    const bool d_ok = detail::known(catalog, pair.second, Role::Defender);
    if (!a_ok) report.unknown.push_back(pair.first);
    if (!d_ok) report.unknown.push_back(pair.second);
    if (!a_ok || !d_ok) continue;
    seen.insert(pair);
    if (verdict.feedback.empty()) report.empty_messages.push_back(pair);
  }
  report.present = seen.size();
  detail::fill_missing(report, catalog, seen);
  return report;
}

inline MatchupMatrix matrix_from_rows(const std::vector<MatrixRow>& rows) {
  MatchupMatrix m;
  for (const MatrixRow& row : rows) m.set(row.attack, row.defend, {row.winner, row.message});
  return m;
}

/// Parses and validates; throws invalid_matrix with the report on any defect.
inline MatchupMatrix load_matrix(std::istream& in, const TokenCatalog& catalog) {
  const auto rows = parse_matrix_rows(in);
  const MatrixReport report = validate_matrix_rows(rows, catalog);
  if (!report.ok()) throw GameError(ErrorCode::invalid_matrix, report.text());
  return matrix_from_rows(rows);
}

inline void write_matrix(const MatchupMatrix& matrix, const TokenCatalog& catalog,
                         std::ostream& os) {
  os << kMatrixHeader << '\n';
  os << "# attack\tdefense\twinner\tmessage\n";
  for (const Token& a : catalog.attack()) {
    for (const Token& d : catalog.defend()) {
      const Verdict* v = matrix.find(a.id, d.id);
      if (v == nullptr) continue;
      os << a.id << '\t' << d.id << '\t' << to_string(v->winner) << '\t' << v->feedback << '\n';
    }
  }
}

}  // namespace cybermoraba
