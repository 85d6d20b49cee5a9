// Lexer-level Java method extraction.
//
// The source is tokenized once (literals and comments are consumed whole so
// braces inside them never count), then a small recursive scanner walks type
// bodies member by member. A member header is every token since the previous
// member boundary; when a `{` arrives the header decides what the block is.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/corpus.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {
namespace {

enum class TokKind : std::uint8_t { Word, Punct, Literal, Number };

struct Token {
  TokKind kind;
  std::size_t begin;
  std::size_t end;
  bool error = false;  // unterminated string/char literal
};

struct Comment {
  std::size_t begin;
  std::size_t end;
};

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c == '$' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  void run() {
    const std::size_t n = src_.size();
    std::size_t i = 0;
    while (i < n) {
      const auto c = static_cast<unsigned char>(src_[i]);
      if (std::isspace(c) != 0) {
        ++i;
      } else if (c == '/' && i + 1 < n && src_[i + 1] == '/') {
        const std::size_t start = i;
        while (i < n && src_[i] != '\n') ++i;
        comments.push_back({start, i});
      } else if (c == '/' && i + 1 < n && src_[i + 1] == '*') {
        const std::size_t close = src_.find("*/", i + 2);
        if (close == std::string_view::npos) {
          throw Error(ErrorCode::UnbalancedBraces, "unterminated block comment");
        }
        comments.push_back({i, close + 2});
        i = close + 2;
      } else if (c == '"') {
        i = string_literal(i);
      } else if (c == '\'') {
        i = char_literal(i);
      } else if (std::isdigit(c) != 0) {
        const std::size_t start = i;
        while (i < n && (is_word_byte(static_cast<unsigned char>(src_[i])) || src_[i] == '.')) ++i;
        tokens.push_back({TokKind::Number, start, i});
      } else if (is_word_byte(c)) {
        const std::size_t start = i;
        while (i < n && is_word_byte(static_cast<unsigned char>(src_[i]))) ++i;
        tokens.push_back({TokKind::Word, start, i});
      } else {
        tokens.push_back({TokKind::Punct, i, i + 1});
        ++i;
      }
    }
  }

  std::vector<Token> tokens;
  std::vector<Comment> comments;

 private:
  std::size_t string_literal(std::size_t i) {
    const std::size_t n = src_.size();
    if (src_.substr(i, 3) == "\"\"\"") {
      std::size_t j = i + 3;
      while (j < n) {
        if (src_[j] == '\\') {
          j += 2;
        } else if (src_.substr(j, 3) == "\"\"\"") {
          tokens.push_back({TokKind::Literal, i, j + 3});
          return j + 3;
        } else {
          ++j;
        }
      }
      throw Error(ErrorCode::UnbalancedBraces, "unterminated text block");
    }
    std::size_t j = i + 1;
    while (j < n && src_[j] != '"' && src_[j] != '\n') j += (src_[j] == '\\') ? 2 : 1;
    if (j < n && src_[j] == '"') {
      tokens.push_back({TokKind::Literal, i, j + 1});
      return j + 1;
    }
    tokens.push_back({TokKind::Literal, i, std::min(j, n), true});
    return std::min(j, n);
  }

  std::size_t char_literal(std::size_t i) {
    const std::size_t n = src_.size();
    std::size_t j = i + 1;
    while (j < n && src_[j] != '\'' && src_[j] != '\n') j += (src_[j] == '\\') ? 2 : 1;
    if (j < n && src_[j] == '\'') {
      tokens.push_back({TokKind::Literal, i, j + 1});
      return j + 1;
    }
    tokens.push_back({TokKind::Literal, i, std::min(j, n), true});
    return std::min(j, n);
  }

  std::string_view src_;
};

enum class TypeKind { Class, Interface, Enum, Record, Annotation };

struct TypeHeader {
  TypeKind kind;
  std::string_view name;
};

class Extractor {
 public:
  Extractor(std::string_view src, std::string_view project, std::string_view file_path)
      : src_(src), project_(project), file_path_(file_path) {
    Lexer lexer(src);
    lexer.run();
    toks_ = std::move(lexer.tokens);
    comments_ = std::move(lexer.comments);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  std::vector<MethodRecord> run() {
    std::size_t i = 0;
    scan_members(i, nullptr);
    std::sort(out_.begin(), out_.end(), [](const MethodRecord& a, const MethodRecord& b) {
      return a.document.provenance.start_line < b.document.provenance.start_line;
    });
    return std::move(out_);
  }

 private:
  bool punct(std::size_t i, char c) const {
    return toks_[i].kind == TokKind::Punct && src_[toks_[i].begin] == c;
  }
  bool word(std::size_t i, std::string_view w) const {
    return toks_[i].kind == TokKind::Word && text(i) == w;
  }
  std::string_view text(std::size_t i) const {
    return src_.substr(toks_[i].begin, toks_[i].end - toks_[i].begin);
  }
  std::uint32_t line_of(std::size_t offset) const {
    const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<std::uint32_t>(it - line_starts_.begin()) + 1;
  }

  // `type` is null at compilation-unit level.
  void scan_members(std::size_t& i, const TypeHeader* type) {
    const bool top = type == nullptr;
    bool enum_constants = type != nullptr && type->kind == TypeKind::Enum;
    std::size_t header = kNone;
    bool tainted = false;
    const std::size_t n = toks_.size();

    while (i < n) {
      if (punct(i, '}')) {
        if (top) throw Error(ErrorCode::UnbalancedBraces, "unexpected '}' at top level");
        ++i;
        return;
      }
      if (punct(i, ';')) {
        header = kNone;
        tainted = false;
        enum_constants = false;
        ++i;
        continue;
      }
      if (enum_constants && punct(i, ',')) {
        header = kNone;
        ++i;
        continue;
      }
      if (!punct(i, '{')) {
        if (header == kNone) header = i;
        ++i;
        continue;
      }

      // A block opens. Decide what the header in front of it declares.
      const std::size_t open = i;
      const std::size_t hs = header == kNone ? open : header;
      if (enum_constants) {
        skip_block(i);
        continue;
      }
      if (!tainted) {
        if (auto nested = type_header(hs, open)) {
          ++i;
          scan_members(i, &*nested);
          header = kNone;
          continue;
        }
      }
      if (top) {
        skip_block(i);
        header = kNone;
        continue;
      }
      if (tainted || has_top_level_assign(hs, open)) {
        skip_block(i);
        tainted = true;
        continue;
      }
      if (hs == open || (open - hs == 1 && word(hs, "static"))) {
        skip_block(i);  // initializer
        header = kNone;
        continue;
      }
      if (is_method_header(hs, open, *type)) {
        emit_method(hs, i);
        header = kNone;
        continue;
      }
      skip_block(i);
      tainted = true;
    }
    if (!top) throw Error(ErrorCode::UnbalancedBraces, "end of file inside a type body");
  }

  // Advances i past the block opening at i. Returns true if parentheses
  // inside were unbalanced.
  bool skip_block(std::size_t& i) {
    int depth = 0;
    int parens = 0;
    bool bad_parens = false;
    for (; i < toks_.size(); ++i) {
      if (toks_[i].kind != TokKind::Punct) continue;
      const char c = src_[toks_[i].begin];
      if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          ++i;
          return bad_parens || parens != 0;
        }
      } else if (c == '(') {
        ++parens;
      } else if (c == ')') {
        if (--parens < 0) bad_parens = true;
      }
    }
    throw Error(ErrorCode::UnbalancedBraces, "end of file inside a block");
  }

  std::optional<TypeHeader> type_header(std::size_t hs, std::size_t he) const {
    int depth = 0;
    for (std::size_t k = hs; k < he; ++k) {
      if (punct(k, '(')) ++depth;
      if (punct(k, ')')) --depth;
      if (depth != 0 || toks_[k].kind != TokKind::Word) continue;
      if (k > hs && punct(k - 1, '.')) continue;
      if (k + 1 >= he || toks_[k + 1].kind != TokKind::Word) continue;
      const auto w = text(k);
      const auto name = text(k + 1);
      if (w == "class") return TypeHeader{TypeKind::Class, name};
      if (w == "enum") return TypeHeader{TypeKind::Enum, name};
      if (w == "interface") {
        const bool annotation = k > hs && punct(k - 1, '@');
        return TypeHeader{annotation ? TypeKind::Annotation : TypeKind::Interface, name};
      }
      if (w == "record" && k + 2 < he && (punct(k + 2, '(') || punct(k + 2, '<'))) {
        return TypeHeader{TypeKind::Record, name};
      }
    }
    return std::nullopt;
  }

  bool has_top_level_assign(std::size_t hs, std::size_t he) const {
    int depth = 0;
    for (std::size_t k = hs; k < he; ++k) {
      if (punct(k, '(')) ++depth;
      if (punct(k, ')')) --depth;
      if (depth == 0 && punct(k, '=')) return true;
    }
    return false;
  }

  bool is_method_header(std::size_t hs, std::size_t he, const TypeHeader& type) const {
    // Last top-level parenthesized group in the header.
    std::size_t last_open = kNone;
    std::size_t last_close = kNone;
    int depth = 0;
    for (std::size_t k = hs; k < he; ++k) {
      if (punct(k, '(')) {
        if (depth++ == 0) last_open = k;
      } else if (punct(k, ')')) {
        if (--depth == 0) last_close = k;
        if (depth < 0) return false;
      }
    }
    if (depth != 0) return false;

    if (last_open == kNone) {
      // Compact canonical constructor: `[modifiers] RecordName {`.
      return type.kind == TypeKind::Record && toks_[he - 1].kind == TokKind::Word &&
             text(he - 1) == type.name;
    }
    if (last_open == hs) return false;
    const std::size_t name = last_open - 1;
    if (toks_[name].kind != TokKind::Word || word(name, "new")) return false;
    if (name > hs && (punct(name - 1, '.') || punct(name - 1, '@'))) return false;
    for (std::size_t k = last_close + 1; k < he; ++k) {
      if (toks_[k].kind == TokKind::Word) continue;
      if (toks_[k].kind != TokKind::Punct) return false;
      const char c = src_[toks_[k].begin];
      if (std::string_view(".,<>?[]&@").find(c) == std::string_view::npos) return false;
    }
    if (last_close + 1 < he && !word(last_close + 1, "throws") && !punct(last_close + 1, '[')) {
      return false;
    }
    return true;
  }

  void emit_method(std::size_t hs, std::size_t& i) {
    const std::size_t open = i;
    const bool bad_parens_in_body = skip_block(i);
    const std::size_t close = i - 1;

    const std::size_t begin = toks_[hs].begin;
    const std::size_t end = toks_[close].end;
    bool error = bad_parens_in_body;
    int parens = 0;
    for (std::size_t k = hs; k <= close; ++k) {
      error = error || toks_[k].error;
      if (k < open) {
        if (punct(k, '(')) ++parens;
        if (punct(k, ')')) --parens;
      }
    }
    error = error || parens != 0;

    MethodRecord rec;
    rec.document.kind = DocKind::java_method;
    rec.document.text = std::string(src_.substr(begin, end - begin));
    rec.document.provenance = Provenance{std::string(project_), std::string(file_path_), line_of(begin),
                                         line_of(toks_[close].begin)};
    std::string_view sig = src_.substr(begin, toks_[open].begin - begin);
    while (!sig.empty() && std::isspace(static_cast<unsigned char>(sig.back())) != 0) sig.remove_suffix(1);
    rec.signature_text = std::string(sig);
    if (auto comment = doc_comment_before(begin)) {
      rec.doc_comment_line = line_of(comment->begin);
      rec.doc_comment = std::string(src_.substr(comment->begin, comment->end - comment->begin));
    }
    rec.parse_error = error;
    out_.push_back(std::move(rec));
  }

  std::optional<Comment> doc_comment_before(std::size_t offset) const {
    auto it = std::lower_bound(comments_.begin(), comments_.end(), offset,
                               [](const Comment& c, std::size_t off) { return c.end <= off; });
    if (it == comments_.begin()) return std::nullopt;
    const Comment& c = *std::prev(it);
    const auto body = src_.substr(c.begin, c.end - c.begin);
    if (!body.starts_with("/**") || body == "/**/") return std::nullopt;
    for (std::size_t k = c.end; k < offset; ++k) {
      if (std::isspace(static_cast<unsigned char>(src_[k])) == 0) return std::nullopt;
    }
    if (line_of(c.end - 1) >= line_of(offset)) return std::nullopt;
    return c;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::string_view src_;
  std::string_view project_;
  std::string_view file_path_;
  std::vector<Token> toks_;
  std::vector<Comment> comments_;
  std::vector<std::size_t> line_starts_;
  std::vector<MethodRecord> out_;
};

}  // namespace

std::vector<MethodRecord> extract_java_methods(std::string_view source, std::string_view project,
                                               std::string_view file_path) {
  if (!is_valid_utf8(source)) {
    throw Error(ErrorCode::NotUtf8, "source is not valid UTF-8: " + std::string(file_path));
  }
  return Extractor(source, project, file_path).run();
}

bool has_empty_body(const MethodRecord& record) {
  std::string_view text = record.document.text;
  if (!text.starts_with(record.signature_text)) return false;
  text.remove_prefix(record.signature_text.size());
  const auto open = text.find('{');
  if (open == std::string_view::npos || text.size() < open + 2 || text.back() != '}') return false;
  const auto body = text.substr(open + 1, text.size() - open - 2);
  return std::all_of(body.begin(), body.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

std::vector<MethodRecord> filter_methods(std::vector<MethodRecord> records) {
  std::erase_if(records, [](const MethodRecord& r) {
    return r.parse_error || has_empty_body(r);
  });
  return records;
}

}  // namespace corpusdedup
