// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_COMMON_HPP
#define MUDT_COMMON_HPP

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mudt {

// Error with a stable machine-readable code (E_COLUMNS, E_CYCLE, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace str {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// ASCII title case: first letter upper, rest lower. Non-ASCII bytes pass through.
inline std::string title(std::string_view s) {
  std::string out(s);
  bool first = true;
  for (char& c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (first && std::isalpha(u)) {
      c = static_cast<char>(std::toupper(u));
      first = false;
    } else {
      c = static_cast<char>(std::tolower(u));
    }
  }
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace str

// Insertion-ordered key/value map for small annotation bundles (MISC).
class OrderedMap {
 public:
  using Entry = std::pair<std::string, std::string>;

  bool empty() const noexcept { return items_.size() == 0; }
  std::size_t size() const noexcept { return items_.size(); }

  void set(std::string key, std::string value) {
    for (auto& e : items_) {
      if (e.first == key) {
        e.second = std::move(value);
        return;
      }
    }
    items_.emplace_back(std::move(key), std::move(value));
  }

  bool contains(std::string_view key) const {
    return find(key) != nullptr;
  }

  std::optional<std::string> get(std::string_view key) const {
    if (const auto* e = find(key)) return e->second;
    return std::nullopt;
  }

  void erase(std::string_view key) {
    items_.erase(std::remove_if(items_.begin(), items_.end(),
                                [&](const Entry& e) { return e.first == key; }),
                 items_.end());
  }

  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  bool operator==(const OrderedMap&) const = default;

 private:
  const Entry* find(std::string_view key) const {
    for (const auto& e : items_) {
      if (e.first == key) return &e;
    }
    return nullptr;
  }

  std::vector<Entry> items_;
};

}  // namespace mudt

#endif  // MUDT_COMMON_HPP
