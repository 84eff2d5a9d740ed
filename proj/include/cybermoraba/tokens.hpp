#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"

namespace cybermoraba {

struct Token {
  std::string id;  // "A1".."A13" or "D1".."D13"
  Role role = Role::Attacker;
  std::string label;
  std::string definition;
};

constexpr char role_prefix(Role r) { return r == Role::Attacker ? 'A' : 'D'; }

/// Attack and defense tokens in display order. Catalog order is also the
/// "lowest id" order used for tie-breaks (A2 before A10).
class TokenCatalog {
 public:
  TokenCatalog(std::vector<Token> attack, std::vector<Token> defend)
      : attack_(std::move(attack)), defend_(std::move(defend)) {
    std::set<std::string> ids;
    auto check = [&ids](const std::vector<Token>& tokens, Role role) {
      if (tokens.empty()) {
        throw GameError(ErrorCode::invalid_options,
                        std::string("catalog has no ") + std::string(to_string(role)) + " tokens");
      }
      for (const Token& t : tokens) {
        if (t.role != role || t.id.size() < 2 || t.id[0] != role_prefix(role)) {
          throw GameError(ErrorCode::invalid_options, "token id does not match its role: " + t.id);
        }
        if (!ids.insert(t.id).second) {
          throw GameError(ErrorCode::invalid_options, "duplicate token id: " + t.id);
        }
      }
    };
    check(attack_, Role::Attacker);
    check(defend_, Role::Defender);
  }

  const std::vector<Token>& attack() const { return attack_; }
  const std::vector<Token>& defend() const { return defend_; }
  const std::vector<Token>& tokens(Role r) const {
    return r == Role::Attacker ? attack_ : defend_;
  }

  const Token* find(std::string_view id) const {
    for (const auto* list : {&attack_, &defend_}) {
      for (const Token& t : *list) {
        if (t.id == id) return &t;
      }
    }
    return nullptr;
  }

  const Token& at(std::string_view id, Role role) const {
    const Token* t = find(id);
    if (t == nullptr || t->role != role) {
      throw GameError(ErrorCode::unknown_token, "unknown " + std::string(to_string(role)) +
                                                    " token: '" + std::string(id) + "'");
    }
    return *t;
  }

  /// Position of id within its role's list; -1 when absent.
  int order(std::string_view id) const {
    for (const auto* list : {&attack_, &defend_}) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        if ((*list)[i].id == id) return static_cast<int>(i);
      }
    }
    return -1;
  }

 private:
  std::vector<Token> attack_;
  std::vector<Token> defend_;
};

/// The thirteen attack and thirteen defense tokens as published. A5 and A6
/// share the definition "Malicious directory" in the source table; kept as is.
inline std::shared_ptr<const TokenCatalog> default_catalog() {
  static const auto catalog = std::make_shared<const TokenCatalog>(
      std::vector<Token>{
          {"A1", Role::Attacker, "Email", "Malicious e-mail"},
          {"A2", Role::Attacker, "Phone", "Malicious phone call"},
          {"A3", Role::Attacker, "Chat", "Malicious chat"},
          {"A4", Role::Attacker, "Attachment", "Malicious attachment"},
          {"A5", Role::Attacker, "Donate", "Malicious directory"},
          {"A6", Role::Attacker, "Password", "Malicious directory"},
          {"A7", Role::Attacker, "Connection", "Malicious network connection"},
          {"A8", Role::Attacker, "Access", "Malicious intrusion"},
          {"A9", Role::Attacker, "Data", "Malicious data"},
          {"A10", Role::Attacker, "Data loss", "Data loss process"},
          {"A11", Role::Attacker, "Click", "Malicious link"},
          {"A12", Role::Attacker, "Sensitive data", "Theft of data"},
          {"A13", Role::Attacker, "Message", "Malicious communication"},
      },
      std::vector<Token>{
          {"D1", Role::Defender, "Denying", "Blocking/denying actions"},
          {"D2", Role::Defender, "Network monitoring", "Network traffic analysis"},
          {"D3", Role::Defender, "Avoid clicking", "Refuse to click"},
          {"D4", Role::Defender, "Identification", "Verification process"},
          {"D5", Role::Defender, "No trust", "Zero trust policy"},
          {"D6", Role::Defender, "Upload", "Uploading process"},
          {"D7", Role::Defender, "Trust", "The defender trusts"},
          {"D8", Role::Defender, "Provide", "Providing information"},
          {"D9", Role::Defender, "Confidential", "Confidentiality of data"},
          {"D10", Role::Defender, "Report", "Reporting cyber incidents"},
          {"D11", Role::Defender, "Social media", "Sharing data on social media"},
          {"D12", Role::Defender, "Connection", "Secured network connection"},
          {"D13", Role::Defender, "Backup", "Data recovery"},
      });
  return catalog;
}

}  // namespace cybermoraba
