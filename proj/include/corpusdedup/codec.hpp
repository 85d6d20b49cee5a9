#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corpusdedup {

std::string base64_encode(std::string_view bytes);
/// Throws Error{MalformedRecord} on invalid input.
std::string base64_decode(std::string_view text);

std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t running = 0);

bool is_valid_utf8(std::string_view text) noexcept;

/// Append-only little-endian byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void varint(std::uint64_t v);
  void bytes(std::string_view v);
  void patch_u64(std::size_t offset, std::uint64_t v);

  std::size_t size() const noexcept { return buf_.size(); }
  std::vector<std::uint8_t>& data() noexcept { return buf_; }
  std::vector<std::uint8_t> release() noexcept { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked little-endian reader over a byte span. Any overrun throws
/// Error{ChecksumMismatch}, since the callers verify a checksum first and an
/// overrun can only mean a malformed-but-checksummed file.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes, std::size_t pos = 0)
      : bytes_(bytes), pos_(pos) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::uint64_t varint();
  std::string_view bytes(std::size_t n);

  std::size_t position() const noexcept { return pos_; }
  void seek(std::size_t pos);

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

std::uint64_t load_u64(const std::uint8_t* p) noexcept;
std::uint32_t load_u32(const std::uint8_t* p) noexcept;

/// Read-only memory mapping of a whole file. Empty files map to an empty span.
class MappedFile {
 public:
  static std::shared_ptr<const MappedFile> open(const std::filesystem::path& path);
  ~MappedFile();

  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;

  std::span<const std::uint8_t> bytes() const noexcept { return {data_, size_}; }

 private:
  MappedFile(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  const std::uint8_t* data_;
  std::size_t size_;
};

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace corpusdedup
