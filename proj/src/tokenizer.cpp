#include <array>
#include <string>
#include <unordered_set>

#include "spdf/error.hpp"
#include "spdf/simengine.hpp"
#include "spdf/text.hpp"

namespace spdf::sim {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::string_view tag, std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * kFnvPrime;
  h = (h ^ 0xFF) * kFnvPrime;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * kFnvPrime;
  return h;
}

// Keywords of the C family, Java, Python and friends. Anything else that looks
// like a name collapses to a single identifier code.
const std::unordered_set<std::string_view>& keywords() {
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "and",      "as",       "assert",    "async",     "auto",    "await",   "bool",
      "boolean",  "break",    "byte",     "case",      "catch",     "char",    "class",   "const",
      "continue", "def",      "default",  "del",       "delete",    "do",      "double",  "elif",
      "else",     "enum",     "except",   "explicit",  "export",    "extends", "extern",  "false",
      "final",    "finally",  "float",    "for",       "friend",    "from",    "func",    "function",
      "global",   "goto",     "if",       "implements", "import",   "in",      "inline",  "instanceof",
      "int",      "interface", "is",      "lambda",    "let",       "long",    "match",   "mut",
      "namespace", "native",  "new",      "nil",       "none",      "None",    "nonlocal", "not",
      "null",     "nullptr",  "operator", "or",        "override",  "package", "pass",    "private",
      "protected", "pub",     "public",   "raise",     "register",  "return",  "short",   "signed",
      "sizeof",   "static",   "struct",   "super",     "switch",    "synchronized", "template", "this",
      "throw",    "throws",   "true",     "True",      "False",     "try",     "typedef", "typename",
      "union",    "unsigned", "using",    "var",       "virtual",   "void",    "volatile", "while",
      "with",     "yield",    "string",   "String",    "fn",        "impl",    "trait",   "self",
  };
  return kw;
}

constexpr std::array<std::string_view, 9> kOps3 = {"<<=", ">>=", "...", "===", "!==", "->*", "**=", "<=>", ">>>"};
constexpr std::array<std::string_view, 23> kOps2 = {"==", "!=", "<=", ">=", "&&", "||", "++", "--",
                                                    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                                                    "<<", ">>", "->", "::", "**", "=>", ":="};

bool is_ident_start(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

TokenStream tokenize_code(std::string_view s) {
  static const std::uint64_t kIdent = fnv1a("class", "identifier");
  static const std::uint64_t kNumber = fnv1a("class", "number");
  static const std::uint64_t kString = fnv1a("class", "string");

  TokenStream out;
  auto emit = [&](std::uint64_t code, std::size_t b, std::size_t e) {
    out.tokens.push_back(code);
    out.spans.push_back({b, e});
  };

  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < n && s[i + 1] == '/')) {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      const auto close = s.find("*/", i + 2);
      i = close == std::string_view::npos ? n : close + 2;
      continue;
    }
    const std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(static_cast<unsigned char>(s[i]))) ++i;
      const auto word = s.substr(start, i - start);
      emit(keywords().contains(word) ? fnv1a("keyword", word) : kIdent, start, i);
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < n) {
        const auto d = static_cast<unsigned char>(s[i]);
        if (is_ident_char(d) || d == '.') {
          ++i;
        } else if ((d == '+' || d == '-') && (s[i - 1] == 'e' || s[i - 1] == 'E')) {
          ++i;
        } else {
          break;
        }
      }
      emit(kNumber, start, i);
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') {
      ++i;
      while (i < n && static_cast<unsigned char>(s[i]) != c && s[i] != '\n') {
        if (s[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n && static_cast<unsigned char>(s[i]) == c) ++i;
      emit(kString, start, i);
      continue;
    }
    std::size_t len = 1;
    for (auto op : kOps3) {
      if (s.substr(i, 3) == op) len = 3;
    }
    if (len == 1) {
      for (auto op : kOps2) {
        if (s.substr(i, 2) == op) len = 2;
      }
    }
    emit(fnv1a("operator", s.substr(i, len)), i, i + len);
    i += len;
  }
  return out;
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
  if (c >= 0xA0 && c <= 0xBF) return false;                  // Latin-1 punctuation and symbols
  if (c == 0xD7 || c == 0xF7) return false;                  // multiplication / division signs
  if (c >= 0x2000 && c <= 0x206F) return false;              // general punctuation
  if (c >= 0x3000 && c <= 0x303F) return false;              // CJK punctuation
  return true;
}

TokenStream tokenize_text(std::string_view s) {
  if (!text::is_valid_utf8(s)) fail(ErrorKind::InvalidArgument, "plain-text content is not valid UTF-8");
  TokenStream out;
  std::string word;
  std::size_t word_start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    if (word.empty()) return;
    out.tokens.push_back(fnv1a("word", word));
    out.spans.push_back({word_start, end});
    word.clear();
  };
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    const std::size_t len = lead < 0x80 ? 1 : (lead & 0xE0) == 0xC0 ? 2 : (lead & 0xF0) == 0xE0 ? 3 : 4;
    const char32_t cp = text::decode_utf8(s.substr(i, len))[0];
    if (is_word_char(cp)) {
      if (word.empty()) word_start = i;
      const char32_t lower = text::to_lower(cp);
      word += text::encode_utf8(std::u32string_view(&lower, 1));
    } else {
      flush(i);
    }
    i += len;
  }
  flush(i);
  return out;
}

}  // namespace

Profile parse_profile(std::string_view name) {
  if (name == "generic-code") return Profile::GenericCode;
  if (name == "plain-text") return Profile::PlainText;
  fail(ErrorKind::InvalidArgument, "unknown tokenizer profile: " + std::string(name));
}

std::string_view profile_name(Profile p) { return p == Profile::GenericCode ? "generic-code" : "plain-text"; }

FingerprintParams default_params(Profile profile) {
  return profile == Profile::GenericCode ? FingerprintParams{5, 4} : FingerprintParams{3, 4};
}

TokenStream tokenize(std::string_view content, Profile profile) {
  return profile == Profile::GenericCode ? tokenize_code(content) : tokenize_text(content);
}

}  // namespace spdf::sim
