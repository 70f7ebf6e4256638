#ifndef ASB_IO_HPP_
#define ASB_IO_HPP_

#include <zlib.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asb/error.hpp"

namespace asb::io {

namespace fs = std::filesystem;

/// True when the file starts with the gzip magic bytes 0x1F 0x8B.
inline bool is_gzip(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::array<unsigned char, 2> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), 2);
  return in.gcount() == 2 && magic[0] == 0x1F && magic[1] == 0x8B;
}

/// Reads a text file line by line, transparently inflating gzip input.
/// Trailing '\r' is stripped so CRLF files behave like LF files.
class LineReader {
 public:
  explicit LineReader(const fs::path& path) : path_(path) {
    if (is_gzip(path)) {
      gz_ = gzopen(path.string().c_str(), "rb");
      if (gz_ == nullptr) throw IoError("cannot open '" + path.string() + "'");
    } else {
      plain_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*plain_) throw IoError("cannot open '" + path.string() + "'");
    }
  }

  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  ~LineReader() {
    if (gz_ != nullptr) gzclose(gz_);
  }

  bool next(std::string& line) {
    line.clear();
    if (plain_) {
      if (!std::getline(*plain_, line)) {
        if (plain_->bad()) throw IoError("read error in '" + path_.string() + "'");
        return false;
      }
    } else {
      std::array<char, 8192> buf{};
      bool any = false;
      while (gzgets(gz_, buf.data(), static_cast<int>(buf.size())) != nullptr) {
        any = true;
        std::string_view chunk(buf.data());
        if (!chunk.empty() && chunk.back() == '\n') {
          chunk.remove_suffix(1);
          line.append(chunk);
          break;
        }
        line.append(chunk);
      }
      if (!any) {
        int err = 0;
        gzerror(gz_, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
          throw IoError("gzip read error in '" + path_.string() + "'");
        }
        return false;
      }
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  fs::path path_;
  std::unique_ptr<std::ifstream> plain_;
  gzFile gz_ = nullptr;
};

inline std::vector<std::string> read_lines(const fs::path& path) {
  LineReader reader(path);
  std::vector<std::string> lines;
  std::string line;
  while (reader.next(line)) lines.push_back(line);
  return lines;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes `contents` to a sibling temp file and renames it over `path`,
/// so readers never observe a partially written file.
inline void write_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace asb::io

#endif  // ASB_IO_HPP_
