#include "corpusdedup/bpe.hpp"

#include <unicode/uchar.h>

#include <fstream>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/error.hpp"
#include "corpusdedup/hashing.hpp"

namespace corpusdedup {
namespace {

constexpr std::uint32_t kInvalidCp = std::numeric_limits<std::uint32_t>::max();

struct CodePoint {
  std::uint32_t cp;
  std::size_t len;
};

CodePoint decode_at(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) return {c, 1};
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return {kInvalidCp, 1};
  }
  if (i + len > s.size()) return {kInvalidCp, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {kInvalidCp, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

enum class CharClass { Letter, Number, Space, Other };

CharClass classify(std::uint32_t cp) {
  if (cp == kInvalidCp) return CharClass::Other;
  const auto c = static_cast<UChar32>(cp);
  if (u_isUWhiteSpace(c)) return CharClass::Space;
  const auto mask = U_GET_GC_MASK(c);
  if ((mask & U_GC_L_MASK) != 0) return CharClass::Letter;
  if ((mask & U_GC_N_MASK) != 0) return CharClass::Number;
  return CharClass::Other;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Inverse of byte_encoder, indexed by code point (all stand-ins are < 0x144).
const std::array<int, 0x144>& byte_decoder() {
  static const std::array<int, 0x144> table = [] {
    std::array<int, 0x144> t{};
    t.fill(-1);
    const auto& enc = BpeVocab::byte_encoder();
    for (int b = 0; b < 256; ++b) t[decode_at(enc[b], 0).cp] = b;
    return t;
  }();
  return table;
}

std::string first_existing(const std::filesystem::path& dir, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (std::filesystem::exists(dir / n)) return (dir / n).string();
  }
  throw Error(ErrorCode::IoFailure, fmt::format("no {} in {}", *names.begin(), dir.string()));
}

}  // namespace

const std::array<std::string, 256>& BpeVocab::byte_encoder() {
  static const std::array<std::string, 256> table = [] {
    std::array<std::string, 256> t;
    std::array<bool, 256> printable{};
    for (int b = '!'; b <= '~'; ++b) printable[b] = true;
    for (int b = 0xA1; b <= 0xAC; ++b) printable[b] = true;
    for (int b = 0xAE; b <= 0xFF; ++b) printable[b] = true;
    std::uint32_t next = 256;
    for (int b = 0; b < 256; ++b) {
      const std::uint32_t cp = printable[b] ? static_cast<std::uint32_t>(b) : next++;
      append_utf8(t[b], cp);
    }
    return t;
  }();
  return table;
}

BpeVocab BpeVocab::load(const std::filesystem::path& dir) {
  const auto vocab_path = first_existing(dir, {"encoder.json", "vocab.json"});
  const auto merges_path = first_existing(dir, {"vocab.bpe", "merges.txt"});

  std::unordered_map<std::string, TokenId> token_to_id;
  {
    std::ifstream in(vocab_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + vocab_path);
    const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) throw Error(ErrorCode::VocabMissingSymbol, vocab_path + " is not a JSON object");
    for (const auto& [tok, id] : j.items()) {
      if (!id.is_number_unsigned()) {
        throw Error(ErrorCode::VocabMissingSymbol, "non-integer id for token " + tok);
      }
      token_to_id.emplace(tok, id.get<TokenId>());
    }
  }

  std::vector<std::pair<std::string, std::string>> merges;
  {
    std::ifstream in(merges_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + merges_path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (first && line.starts_with("#version")) {
        first = false;
        continue;
      }
      first = false;
      if (line.empty()) continue;
      const auto sp = line.find(' ');
      if (sp == std::string::npos || line.find(' ', sp + 1) != std::string::npos) {
        throw Error(ErrorCode::VocabMissingSymbol, "malformed merge line: " + line);
      }
      merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
    }
  }
  return from_parts(std::move(token_to_id), std::move(merges));
}

BpeVocab BpeVocab::from_parts(std::unordered_map<std::string, TokenId> token_to_id,
                              std::vector<std::pair<std::string, std::string>> merges,
                              std::string_view end_of_text) {
  BpeVocab v;
  TokenId max_id = 0;
  for (const auto& [tok, id] : token_to_id) max_id = std::max(max_id, id);
  v.id_to_token_.resize(token_to_id.empty() ? 0 : static_cast<std::size_t>(max_id) + 1);
  for (const auto& [tok, id] : token_to_id) v.id_to_token_[id] = tok;

  const auto eot = token_to_id.find(std::string(end_of_text));
  if (eot == token_to_id.end()) {
    throw Error(ErrorCode::VocabMissingSymbol, fmt::format("end-of-text token {} missing", end_of_text));
  }
  v.eot_ = eot->second;

  std::uint64_t fp = hash_bytes("gpt2-bpe");
  for (std::size_t id = 0; id < v.id_to_token_.size(); ++id) {
    fp = hash_combine(fp, hash_bytes(v.id_to_token_[id], id));
  }
  v.ranks_.reserve(merges.size());
  for (std::uint32_t rank = 0; rank < merges.size(); ++rank) {
    const auto& [l, r] = merges[rank];
    if (!token_to_id.contains(l + r)) {
      throw Error(ErrorCode::VocabMissingSymbol, fmt::format("merge '{} {}' yields unknown symbol", l, r));
    }
    if (!v.ranks_.emplace(l + " " + r, rank).second) {
      throw Error(ErrorCode::VocabMissingSymbol, fmt::format("duplicate merge '{} {}'", l, r));
    }
    fp = hash_combine(fp, hash_bytes(l + " " + r, rank));
  }
  v.fingerprint_ = fp;
  v.token_to_id_ = std::move(token_to_id);
  return v;
}

std::int64_t BpeVocab::merge_rank(std::string_view left, std::string_view right) const {
  thread_local std::string key;
  key.assign(left);
  key += ' ';
  key.append(right);
  const auto it = ranks_.find(key);
  return it == ranks_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

const std::string* BpeVocab::token(TokenId id) const noexcept {
  if (id >= id_to_token_.size()) return nullptr;
  return &id_to_token_[id];
}

const TokenId* BpeVocab::id(std::string_view symbol) const noexcept {
  thread_local std::string key;
  key.assign(symbol);
  const auto it = token_to_id_.find(key);
  return it == token_to_id_.end() ? nullptr : &it->second;
}

std::vector<std::string_view> gpt2_pretokenize(std::string_view text) {
  std::vector<std::string_view> out;
  const std::size_t n = text.size();
  std::size_t i = 0;

  auto run_of = [&](std::size_t from, CharClass cls) {
    std::size_t j = from;
    while (j < n) {
      const auto cp = decode_at(text, j);
      if (classify(cp.cp) != cls) break;
      j += cp.len;
    }
    return j;
  };

  while (i < n) {
    if (text[i] == '\'') {
      std::size_t len = 0;
      for (std::string_view c : {"re", "ve", "ll", "s", "t", "m", "d"}) {
        if (text.substr(i + 1, c.size()) == c) {
          len = 1 + c.size();
          break;
        }
      }
      if (len != 0) {
        out.push_back(text.substr(i, len));
        i += len;
        continue;
      }
    }

    const auto first = decode_at(text, i);
    const auto cls = classify(first.cp);
    if (cls != CharClass::Space || text[i] == ' ') {
      // ` ?` prefix: a single ASCII space glued to a following non-space run.
      std::size_t body = i;
      CharClass body_cls = cls;
      if (text[i] == ' ' && i + 1 < n) {
        body = i + 1;
        body_cls = classify(decode_at(text, body).cp);
      }
      if (body_cls != CharClass::Space && !(text[i] == ' ' && body == i)) {
        const std::size_t end = run_of(body, body_cls);
        out.push_back(text.substr(i, end - i));
        i = end;
        continue;
      }
    }

    // Whitespace run: \s+(?!\S) keeps the last space for the next token when
    // a non-space follows; a lone space before a non-space falls to \s+.
    std::size_t j = i;
    std::size_t last = i;
    std::size_t count = 0;
    while (j < n) {
      const auto cp = decode_at(text, j);
      if (classify(cp.cp) != CharClass::Space) break;
      last = j;
      j += cp.len;
      ++count;
    }
    const std::size_t end = (j < n && count >= 2) ? last : j;
    out.push_back(text.substr(i, end - i));
    i = end;
  }
  return out;
}

std::vector<TokenId> bpe_encode(std::string_view text, const BpeVocab& vocab) {
  std::vector<TokenId> ids;
  const auto& enc = BpeVocab::byte_encoder();
  std::vector<std::string> word;
  std::vector<std::string> merged;

  for (const auto piece : gpt2_pretokenize(text)) {
    word.clear();
    for (char c : piece) word.push_back(enc[static_cast<unsigned char>(c)]);

    while (word.size() > 1) {
      std::int64_t best = -1;
      std::size_t best_at = 0;
      for (std::size_t k = 0; k + 1 < word.size(); ++k) {
        const auto r = vocab.merge_rank(word[k], word[k + 1]);
        if (r >= 0 && (best < 0 || r < best)) {
          best = r;
          best_at = k;
        }
      }
      if (best < 0) break;
      // Merge every non-overlapping occurrence of the best pair, left to right.
      const std::string left = word[best_at];
      const std::string right = word[best_at + 1];
      merged.clear();
      for (std::size_t k = 0; k < word.size();) {
        if (k + 1 < word.size() && word[k] == left && word[k + 1] == right) {
          merged.push_back(left + right);
          k += 2;
        } else {
          merged.push_back(std::move(word[k]));
          k += 1;
        }
      }
      word.swap(merged);
    }

    for (const auto& sym : word) {
      const TokenId* id = vocab.id(sym);
      if (id == nullptr) throw Error(ErrorCode::VocabMissingSymbol, "no id for symbol " + sym);
      ids.push_back(*id);
    }
  }
  return ids;
}

std::string bpe_decode(std::span<const TokenId> ids, const BpeVocab& vocab) {
  const auto& dec = byte_decoder();
  std::string out;
  for (TokenId id : ids) {
    const std::string* sym = vocab.token(id);
    if (sym == nullptr) throw Error(ErrorCode::UnknownTokenId, fmt::format("token id {} out of range", id));
    for (std::size_t i = 0; i < sym->size();) {
      const auto cp = decode_at(*sym, i);
      if (cp.cp >= dec.size() || dec[cp.cp] < 0) {
        throw Error(ErrorCode::UnknownTokenId, fmt::format("token id {} has a non byte-level symbol", id));
      }
      out += static_cast<char>(dec[cp.cp]);
      i += cp.len;
    }
  }
  return out;
}

}  // namespace corpusdedup
