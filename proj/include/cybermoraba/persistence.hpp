#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "cybermoraba/awareness.hpp"
#include "cybermoraba/codec.hpp"
#include "cybermoraba/error.hpp"
#include "cybermoraba/transcript.hpp"

// Scoreboard and game-log store.
//
// On disk a store is a directory holding two JSON files:
//
//   journal.jsonl   first line {"format":"cybermoraba-journal","version":1},
//                   then one record per line:
//                     {"seq":N,"op":"result","entry":{..},"profile":{..},"rounds":[..]}
//                     {"seq":N,"op":"delete","entryId":M}
//   snapshot.json   {"format":"cybermoraba-snapshot","version":1,"seq":N,
//                    "results":[{"entry":..,"profile":..,"rounds":[..]}, ..]}
//
// Loading reads the snapshot, then replays journal records with a larger
// seq. A torn final journal line is dropped. Entry ids are the seq of the
// record that created them.

namespace cybermoraba {

inline constexpr int kStoreVersion = 1;
inline constexpr std::size_t kMaxNicknameLength = 32;

struct PlayerProfile {
  std::string nickname;
  std::optional<std::string> age_band;
  std::optional<std::string> study_field;
  std::optional<bool> prior_gaming;

  void validate() const {
    if (nickname.empty()) throw GameError(ErrorCode::invalid_profile, "nickname is empty");
    if (nickname.size() > kMaxNicknameLength) {
      throw GameError(ErrorCode::invalid_profile, "nickname longer than 32 characters");
    }
    for (unsigned char c : nickname) {
      if (c < 0x20 || c == 0x7f) {
        throw GameError(ErrorCode::invalid_profile, "nickname contains control characters");
      }
    }
  }

  friend bool operator==(const PlayerProfile&, const PlayerProfile&) = default;
};

struct ScoreboardEntry {
  std::uint64_t entry_id = 0;
  std::string nickname;
  int defender_score = 0;
  int attacker_score = 0;
  std::int64_t time_sec = 0;
  AwarenessOutcome winner = AwarenessOutcome::Draw;
  std::string match_id;

  friend bool operator==(const ScoreboardEntry&, const ScoreboardEntry&) = default;
};

/// One completed round, as exported in the dataset.
struct GameLogRecord {
  std::string match_id;
  std::uint64_t entry_id = 0;
  std::string nickname;
  int round = 0;
  std::string attack_token;
  std::string defend_token;
  std::string point;
  int attacker_reward = 0;
  int defender_reward = 0;
  double attacker_elapsed = 0.0;
  double defender_elapsed = 0.0;
  bool timed_out = false;
  int attacker_total = 0;
  int defender_total = 0;
  std::string feedback;

  friend bool operator==(const GameLogRecord&, const GameLogRecord&) = default;
};

namespace codec {

inline Json profile_to_json(const PlayerProfile& p) {
  Json j{{"nickname", p.nickname}};
  if (p.age_band) j["ageBand"] = *p.age_band;
  if (p.study_field) j["studyField"] = *p.study_field;
  if (p.prior_gaming) j["priorGaming"] = *p.prior_gaming;
  return j;
}

inline PlayerProfile profile_from_json(const Json& j) {
  PlayerProfile p;
  p.nickname = get<std::string>(j, "nickname");
  if (j.contains("ageBand") && !j["ageBand"].is_null()) p.age_band = get<std::string>(j, "ageBand");
  if (j.contains("studyField") && !j["studyField"].is_null()) {
    p.study_field = get<std::string>(j, "studyField");
  }
  if (j.contains("priorGaming") && !j["priorGaming"].is_null()) {
    p.prior_gaming = get<bool>(j, "priorGaming");
  }
  return p;
}

inline Json entry_to_json(const ScoreboardEntry& e) {
  return Json{{"entryId", e.entry_id},       {"nickname", e.nickname},
              {"defenderScore", e.defender_score}, {"attackerScore", e.attacker_score},
              {"timeSec", e.time_sec},       {"winner", winner_label(e.winner)},
              {"matchId", e.match_id}};
}

inline ScoreboardEntry entry_from_json(const Json& j) {
  ScoreboardEntry e;
  e.entry_id = get<std::uint64_t>(j, "entryId");
  e.nickname = get<std::string>(j, "nickname");
  e.defender_score = get<int>(j, "defenderScore");
  e.attacker_score = get<int>(j, "attackerScore");
  e.time_sec = get<std::int64_t>(j, "timeSec");
  e.winner = outcome_from_label(get<std::string>(j, "winner"));
  e.match_id = get_or<std::string>(j, "matchId", "");
  return e;
}

}  // namespace codec

enum class DatasetFormat { Delimited, RecordPerLine };

/// Fixed column order of the dataset export.
inline const std::vector<std::string>& dataset_columns() {
  static const std::vector<std::string> columns{
      "match_id",       "entry_id",        "nickname",         "round",
      "attack_token",   "defend_token",    "point",            "attacker_reward",
      "defender_reward", "attacker_elapsed", "defender_elapsed", "timed_out",
      "attacker_total", "defender_total",  "feedback"};
  return columns;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Splits RFC 4180 text into rows of fields.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw GameError(ErrorCode::malformed, "unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json record_to_json(const GameLogRecord& r) {
  return Json{{"match_id", r.match_id},
              {"entry_id", r.entry_id},
              {"nickname", r.nickname},
              {"round", r.round},
              {"attack_token", r.attack_token},
              {"defend_token", r.defend_token},
              {"point", r.point},
              {"attacker_reward", r.attacker_reward},
              {"defender_reward", r.defender_reward},
              {"attacker_elapsed", r.attacker_elapsed},
              {"defender_elapsed", r.defender_elapsed},
              {"timed_out", r.timed_out},
              {"attacker_total", r.attacker_total},
              {"defender_total", r.defender_total},
              {"feedback", r.feedback}};
}

inline GameLogRecord record_from_json(const Json& j) {
  using codec::get;
  GameLogRecord r;
  r.match_id = get<std::string>(j, "match_id");
  r.entry_id = get<std::uint64_t>(j, "entry_id");
  r.nickname = get<std::string>(j, "nickname");
  r.round = get<int>(j, "round");
  r.attack_token = get<std::string>(j, "attack_token");
  r.defend_token = get<std::string>(j, "defend_token");
  r.point = get<std::string>(j, "point");
  r.attacker_reward = get<int>(j, "attacker_reward");
  r.defender_reward = get<int>(j, "defender_reward");
  r.attacker_elapsed = get<double>(j, "attacker_elapsed");
  r.defender_elapsed = get<double>(j, "defender_elapsed");
  r.timed_out = get<bool>(j, "timed_out");
  r.attacker_total = get<int>(j, "attacker_total");
  r.defender_total = get<int>(j, "defender_total");
  r.feedback = get<std::string>(j, "feedback");
  return r;
}

inline std::vector<std::string> record_to_fields(const GameLogRecord& r) {
  return {r.match_id,
          std::to_string(r.entry_id),
          r.nickname,
          std::to_string(r.round),
          r.attack_token,
          r.defend_token,
          r.point,
          std::to_string(r.attacker_reward),
          std::to_string(r.defender_reward),
          format_seconds(r.attacker_elapsed),
          format_seconds(r.defender_elapsed),
          r.timed_out ? "1" : "0",
          std::to_string(r.attacker_total),
          std::to_string(r.defender_total),
          r.feedback};
}

inline GameLogRecord record_from_fields(const std::vector<std::string>& f, int line) {
  if (f.size() != dataset_columns().size()) {
    throw GameError(ErrorCode::malformed, "line " + std::to_string(line) + ": expected " +
                                              std::to_string(dataset_columns().size()) + " fields");
  }
  GameLogRecord r;
  r.match_id = f[0];
  try {
    r.entry_id = std::stoull(f[1]);
  } catch (const std::exception&) {
    throw GameError(ErrorCode::malformed, "line " + std::to_string(line) + ": bad entry id");
  }
  r.nickname = f[2];
  r.round = parse_int(f[3], line);
  r.attack_token = f[4];
  r.defend_token = f[5];
  r.point = f[6];
  r.attacker_reward = parse_int(f[7], line);
  r.defender_reward = parse_int(f[8], line);
  r.attacker_elapsed = parse_seconds(f[9], line);
  r.defender_elapsed = parse_seconds(f[10], line);
  r.timed_out = parse_flag(f[11], line);
  r.attacker_total = parse_int(f[12], line);
  r.defender_total = parse_int(f[13], line);
  r.feedback = f[14];
  return r;
}

inline void sync_directory(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

inline void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw GameError(ErrorCode::storage,
                      "write failed for " + path.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

/// Replaces `path` with `data` through a synced temporary file and rename.
inline void replace_file(const std::filesystem::path& path, const std::string& data) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw GameError(ErrorCode::storage, "cannot create " + tmp.string() + ": " + std::strerror(errno));
  }
  try {
    write_all(fd, data, tmp);
    if (::fsync(fd) != 0) throw GameError(ErrorCode::storage, "fsync failed for " + tmp.string());
  } catch (...) {
    ::close(fd);
    std::filesystem::remove(tmp);
    throw;
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw GameError(ErrorCode::storage, "rename failed for " + path.string() + ": " + ec.message());
  sync_directory(path.parent_path());
}

}  // namespace detail

struct StoreOptions {
  /// Journal records between automatic snapshots; 0 disables them.
  std::uint64_t snapshot_every = 256;
};

/// Thread-safe scoreboard store. Writers are serialised; readers share a lock.
class ScoreStore {
 public:
  /// In-memory store; nothing touches the disk.
  ScoreStore() = default;

  /// Opens or creates a store under `dir`.
  explicit ScoreStore(std::filesystem::path dir, StoreOptions options = {})
      : dir_(std::move(dir)), options_(options) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw GameError(ErrorCode::storage, "cannot create " + dir_->string() + ": " + ec.message());
    load();
  }

  ScoreStore(const ScoreStore&) = delete;
  ScoreStore& operator=(const ScoreStore&) = delete;

  ~ScoreStore() {
    if (journal_fd_ >= 0) ::close(journal_fd_);
  }

  bool persistent() const { return dir_.has_value(); }
  std::filesystem::path journal_path() const { return *dir_ / "journal.jsonl"; }
  std::filesystem::path snapshot_path() const { return *dir_ / "snapshot.json"; }

  /// Stores a finished match. timeSec defaults to the summed move times,
  /// truncated to whole seconds.
  ScoreboardEntry record_result(const PlayerProfile& profile, const AwarenessState& match,
                                std::optional<double> time_sec = std::nullopt,
                                std::string match_id = {}) {
    if (match.phase() != AwarenessPhase::Finished) {
      throw GameError(ErrorCode::match_unfinished, "match is not finished");
    }
    double seconds = 0.0;
    if (time_sec) {
      seconds = *time_sec;
    } else {
      for (const RoundRecord& r : match.rounds()) seconds += r.attacker_elapsed + r.defender_elapsed;
    }
    return append_result(profile, match.defender_score(), match.attacker_score(), seconds,
                         std::move(match_id), match.rounds());
  }

  /// Stores bare totals with no round log.
  ScoreboardEntry record_scores(const PlayerProfile& profile, int defender_score,
                                int attacker_score, double time_sec, std::string match_id = {}) {
    return append_result(profile, defender_score, attacker_score, time_sec, std::move(match_id), {});
  }

  std::vector<ScoreboardEntry> list_scoreboard() const {
    std::shared_lock lock(mutex_);
    std::vector<ScoreboardEntry> out;
    out.reserve(results_.size());
    for (const Result& r : results_) out.push_back(r.entry);
    return out;
  }

  std::optional<ScoreboardEntry> find_entry(std::uint64_t entry_id) const {
    std::shared_lock lock(mutex_);
    if (const Result* r = locate(entry_id)) return r->entry;
    return std::nullopt;
  }

  std::optional<PlayerProfile> profile(std::uint64_t entry_id) const {
    std::shared_lock lock(mutex_);
    if (const Result* r = locate(entry_id)) return r->profile;
    return std::nullopt;
  }

  /// Removes one entry together with its round log.
  void delete_entry(std::uint64_t entry_id) {
    std::unique_lock lock(mutex_);
    if (locate(entry_id) == nullptr) {
      throw GameError(ErrorCode::not_found, "no scoreboard entry " + std::to_string(entry_id));
    }
    const std::uint64_t seq = seq_ + 1;
    append_line(Json{{"seq", seq}, {"op", "delete"}, {"entryId", entry_id}});
    seq_ = seq;
    apply_delete(entry_id);
    maybe_snapshot();
  }

  /// Dataset rows, one per stored round, in insertion order.
  std::vector<GameLogRecord> game_logs() const {
    std::shared_lock lock(mutex_);
    std::vector<GameLogRecord> out;
    for (const Result& r : results_) {
      int att = 0, def = 0;
      for (const RoundRecord& round : r.rounds) {
        att += round.attacker_reward;
        def += round.defender_reward;
        GameLogRecord g;
        g.match_id = r.entry.match_id;
        g.entry_id = r.entry.entry_id;
        g.nickname = r.entry.nickname;
        g.round = round.round;
        g.attack_token = round.attack_token;
        g.defend_token = round.defend_token;
        g.point = round.point ? round.point->name() : "";
        g.attacker_reward = round.attacker_reward;
        g.defender_reward = round.defender_reward;
        g.attacker_elapsed = round.attacker_elapsed;
        g.defender_elapsed = round.defender_elapsed;
        g.timed_out = round.timed_out;
        g.attacker_total = att;
        g.defender_total = def;
        g.feedback = round.feedback;
        out.push_back(std::move(g));
      }
    }
    return out;
  }

  void export_dataset(std::ostream& os, DatasetFormat format) const {
    const auto records = game_logs();
    if (format == DatasetFormat::Delimited) {
      const auto& cols = dataset_columns();
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
      os << '\n';
      for (const GameLogRecord& r : records) {
        const auto fields = detail::record_to_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i) {
          os << (i ? "," : "") << detail::csv_field(fields[i]);
        }
        os << '\n';
      }
    } else {
      for (const GameLogRecord& r : records) os << detail::record_to_json(r).dump() << '\n';
    }
  }

  /// Writes a snapshot and truncates the journal to its header.
  void snapshot() {
    std::unique_lock lock(mutex_);
    write_snapshot();
  }

  std::uint64_t last_seq() const {
    std::shared_lock lock(mutex_);
    return seq_;
  }

 private:
  struct Result {
    ScoreboardEntry entry;
    PlayerProfile profile;
    std::vector<RoundRecord> rounds;
  };

  static Json result_to_json(const Result& r) {
    Json rounds = Json::array();
    for (const RoundRecord& round : r.rounds) rounds.push_back(codec::round_to_json(round));
    return Json{{"entry", codec::entry_to_json(r.entry)},
                {"profile", codec::profile_to_json(r.profile)},
                {"rounds", std::move(rounds)}};
  }

  static Result result_from_json(const Json& j) {
    Result r;
    r.entry = codec::entry_from_json(codec::get<Json>(j, "entry"));
    r.profile = codec::profile_from_json(codec::get<Json>(j, "profile"));
    for (const Json& round : codec::get<Json>(j, "rounds")) {
      r.rounds.push_back(codec::round_from_json(round));
    }
    if (r.entry.winner != outcome_from_scores(r.entry.attacker_score, r.entry.defender_score)) {
      throw GameError(ErrorCode::storage,
                      "stored winner disagrees with scores for entry " + std::to_string(r.entry.entry_id));
    }
    return r;
  }

  const Result* locate(std::uint64_t id) const {
    for (const Result& r : results_) {
      if (r.entry.entry_id == id) return &r;
    }
    return nullptr;
  }

  void apply_delete(std::uint64_t id) {
    results_.erase(std::remove_if(results_.begin(), results_.end(),
                                  [id](const Result& r) { return r.entry.entry_id == id; }),
                   results_.end());
  }

  ScoreboardEntry append_result(const PlayerProfile& profile, int defender_score,
                                int attacker_score, double time_sec, std::string match_id,
                                std::vector<RoundRecord> rounds) {
    profile.validate();
    if (defender_score < 0 || attacker_score < 0) {
      throw GameError(ErrorCode::invalid_options, "scores must be non-negative");
    }
    if (!std::isfinite(time_sec) || time_sec < 0) {
      throw GameError(ErrorCode::invalid_options, "time must be a non-negative number");
    }
    std::unique_lock lock(mutex_);
    const std::uint64_t seq = seq_ + 1;
    Result r;
    r.entry.entry_id = seq;
    r.entry.nickname = profile.nickname;
    r.entry.defender_score = defender_score;
    r.entry.attacker_score = attacker_score;
    r.entry.time_sec = static_cast<std::int64_t>(time_sec);
    r.entry.winner = outcome_from_scores(attacker_score, defender_score);
    r.entry.match_id = match_id.empty() ? "m" + std::to_string(seq) : std::move(match_id);
    r.profile = profile;
    r.rounds = std::move(rounds);
    Json line = result_to_json(r);
    line["seq"] = seq;
    line["op"] = "result";
    append_line(line);
    seq_ = seq;
    results_.push_back(r);
    maybe_snapshot();
    return r.entry;
  }

  /// Appends one journal line, or nothing at all on failure.
  void append_line(const Json& record) {
    if (!dir_) return;
    const std::string data = record.dump() + '\n';
    const off_t before = ::lseek(journal_fd_, 0, SEEK_END);
    try {
      detail::write_all(journal_fd_, data, journal_path());
      if (::fsync(journal_fd_) != 0) {
        throw GameError(ErrorCode::storage, "fsync failed for " + journal_path().string());
      }
    } catch (...) {
      if (before >= 0 && ::ftruncate(journal_fd_, before) == 0) ::fsync(journal_fd_);
      throw;
    }
    ++since_snapshot_;
  }

  void maybe_snapshot() {
    if (dir_ && options_.snapshot_every > 0 && since_snapshot_ >= options_.snapshot_every) {
      write_snapshot();
    }
  }

  static std::string journal_header() {
    return Json{{"format", "cybermoraba-journal"}, {"version", kStoreVersion}}.dump() + '\n';
  }

  void write_snapshot() {
    if (!dir_) return;
    Json results = Json::array();
    for (const Result& r : results_) results.push_back(result_to_json(r));
    const Json snap{{"format", "cybermoraba-snapshot"},
                    {"version", kStoreVersion},
                    {"seq", seq_},
                    {"results", std::move(results)}};
    detail::replace_file(snapshot_path(), snap.dump(1) + '\n');
    // Journal records at or below the snapshot seq are skipped on load, so a
    // crash between these two steps loses nothing.
    if (journal_fd_ >= 0) ::close(journal_fd_);
    journal_fd_ = -1;
    detail::replace_file(journal_path(), journal_header());
    open_journal();
    since_snapshot_ = 0;
  }

  void open_journal() {
    journal_fd_ = ::open(journal_path().c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (journal_fd_ < 0) {
      throw GameError(ErrorCode::storage,
                      "cannot open " + journal_path().string() + ": " + std::strerror(errno));
    }
  }

  static Json check_header(const Json& j, const char* format, const std::filesystem::path& path) {
    if (!j.is_object() || j.value("format", "") != format) {
      throw GameError(ErrorCode::storage, path.string() + ": not a " + format + " file");
    }
    if (j.value("version", 0) != kStoreVersion) {
      throw GameError(ErrorCode::storage, path.string() + ": unsupported version");
    }
    return j;
  }

  void load() {
    std::uint64_t snapshot_seq = 0;
    if (std::filesystem::exists(snapshot_path())) {
      std::ifstream in(snapshot_path());
      Json snap;
      try {
        snap = Json::parse(in);
      } catch (const Json::exception& e) {
        throw GameError(ErrorCode::storage, snapshot_path().string() + ": " + e.what());
      }
      check_header(snap, "cybermoraba-snapshot", snapshot_path());
      snapshot_seq = codec::get<std::uint64_t>(snap, "seq");
      for (const Json& r : codec::get<Json>(snap, "results")) results_.push_back(result_from_json(r));
      seq_ = snapshot_seq;
    }

    if (!std::filesystem::exists(journal_path())) {
      detail::replace_file(journal_path(), journal_header());
    }
    std::ifstream in(journal_path(), std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    std::size_t pos = 0, good_end = 0;
    int line_no = 0;
    while (pos < content.size()) {
      const std::size_t nl = content.find('\n', pos);
      const bool complete = nl != std::string::npos;
      const std::string line = content.substr(pos, complete ? nl - pos : std::string::npos);
      const std::size_t next = complete ? nl + 1 : content.size();
      ++line_no;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::exception&) {
        if (next == content.size()) break;  // torn tail from an interrupted append
        throw GameError(ErrorCode::storage,
                        journal_path().string() + ": corrupt line " + std::to_string(line_no));
      }
      if (!complete) break;
      if (line_no == 1) {
        check_header(j, "cybermoraba-journal", journal_path());
      } else {
        replay(j, snapshot_seq, line_no);
      }
      good_end = next;
      pos = next;
    }
    if (good_end == 0) {
      detail::replace_file(journal_path(), journal_header());
    } else if (good_end < content.size()) {
      std::filesystem::resize_file(journal_path(), good_end);
    }
    open_journal();
  }

  void replay(const Json& j, std::uint64_t snapshot_seq, int line_no) {
    try {
      const auto seq = codec::get<std::uint64_t>(j, "seq");
      if (seq <= snapshot_seq) return;
      if (seq <= seq_) throw GameError(ErrorCode::storage, "sequence numbers out of order");
      const auto op = codec::get<std::string>(j, "op");
      if (op == "result") {
        Result r = result_from_json(j);
        if (r.entry.entry_id != seq) throw GameError(ErrorCode::storage, "entry id differs from seq");
        results_.push_back(std::move(r));
      } else if (op == "delete") {
        apply_delete(codec::get<std::uint64_t>(j, "entryId"));
      } else {
        throw GameError(ErrorCode::storage, "unknown op '" + op + "'");
      }
      seq_ = seq;
      ++since_snapshot_;
    } catch (const GameError& e) {
      throw GameError(ErrorCode::storage,
                      journal_path().string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::optional<std::filesystem::path> dir_;
  StoreOptions options_;
  mutable std::shared_mutex mutex_;
  std::vector<Result> results_;
  std::uint64_t seq_ = 0;
  std::uint64_t since_snapshot_ = 0;
  int journal_fd_ = -1;
};

/// Parses a dataset produced by export_dataset.
inline std::vector<GameLogRecord> parse_dataset(std::istream& in, DatasetFormat format) {
  std::vector<GameLogRecord> out;
  if (format == DatasetFormat::Delimited) {
    const auto rows = detail::parse_csv(in);
    if (rows.empty() || rows.front() != dataset_columns()) {
      throw GameError(ErrorCode::malformed, "dataset header does not match the column order");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      out.push_back(detail::record_from_fields(rows[i], static_cast<int>(i + 1)));
    }
    return out;
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(detail::record_from_json(Json::parse(line)));
    } catch (const Json::exception&) {
      throw GameError(ErrorCode::malformed, "line " + std::to_string(line_no) + ": not JSON");
    } catch (const GameError& e) {
      throw GameError(ErrorCode::malformed, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace cybermoraba
