#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace treent {

class xml_error : public std::runtime_error {
 public:
  xml_error(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Pull-based byte stream; read returns 0 only at end of input.
class byte_source {
 public:
  virtual ~byte_source() = default;
  virtual std::size_t read(char* out, std::size_t cap) = 0;
};

class memory_source : public byte_source {
 public:
  explicit memory_source(std::string_view data) : data_(data) {}

  std::size_t read(char* out, std::size_t cap) override {
    const std::size_t n = std::min(cap, data_.size() - pos_);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
    return n;
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

class file_source : public byte_source {
 public:
  explicit file_source(const std::string& path) : file_(std::fopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw std::runtime_error("cannot open " + path);
  }

  ~file_source() override {
    if (file_ != nullptr) std::fclose(file_);
  }

  file_source(const file_source&) = delete;
  file_source& operator=(const file_source&) = delete;

  std::size_t read(char* out, std::size_t cap) override {
    return std::fread(out, 1, cap, file_);
  }

 private:
  std::FILE* file_;
};

/// Inflates gzip or zlib data from an underlying source; concatenated gzip
/// members are decoded back to back.
class gzip_source : public byte_source {
 public:
  explicit gzip_source(std::unique_ptr<byte_source> inner)
      : inner_(std::move(inner)), in_buf_(1 << 16) {
    strm_.zalloc = Z_NULL;
    strm_.zfree = Z_NULL;
    strm_.opaque = Z_NULL;
    strm_.next_in = Z_NULL;
    strm_.avail_in = 0;
    if (inflateInit2(&strm_, 15 + 32) != Z_OK)
      throw std::runtime_error("gzip: inflateInit failed");
  }

  ~gzip_source() override { inflateEnd(&strm_); }

  gzip_source(const gzip_source&) = delete;
  gzip_source& operator=(const gzip_source&) = delete;

  std::size_t read(char* out, std::size_t cap) override {
    if (done_ || cap == 0) return 0;
    strm_.next_out = reinterpret_cast<Bytef*>(out);
    const uInt want = static_cast<uInt>(std::min<std::size_t>(cap, 1u << 30));
    strm_.avail_out = want;
    while (strm_.avail_out > 0) {
      if (strm_.avail_in == 0 && !inner_eof_) {
        const std::size_t got = inner_->read(in_buf_.data(), in_buf_.size());
        strm_.next_in = reinterpret_cast<Bytef*>(in_buf_.data());
        strm_.avail_in = static_cast<uInt>(got);
        inner_eof_ = got == 0;
      }
      if (strm_.avail_in == 0 && inner_eof_) {
        if (stream_open_) throw std::runtime_error("gzip: truncated stream");
        done_ = true;
        break;
      }
      if (!stream_open_) {
        // A finished member with input still pending: another member follows.
        if (inflateReset2(&strm_, 15 + 32) != Z_OK)
          throw std::runtime_error("gzip: inflateReset failed");
        stream_open_ = true;
      }
      const int rc = inflate(&strm_, Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        stream_open_ = false;
        continue;
      }
      if (rc != Z_OK && rc != Z_BUF_ERROR)
        throw std::runtime_error(std::string("gzip: ") +
                                 (strm_.msg != nullptr ? strm_.msg : "decode error"));
      if (rc == Z_BUF_ERROR && strm_.avail_in == 0 && inner_eof_)
        throw std::runtime_error("gzip: truncated stream");
    }
    return want - strm_.avail_out;
  }

 private:
  std::unique_ptr<byte_source> inner_;
  std::vector<char> in_buf_;
  z_stream strm_{};
  bool inner_eof_ = false;
  bool stream_open_ = true;  // a member is being decoded or expected
  bool done_ = false;
};

/// Opens a file, transparently unwrapping gzip when the magic bytes match.
inline std::unique_ptr<byte_source> open_byte_source(const std::string& path) {
  unsigned char magic[2] = {0, 0};
  {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (f == nullptr) throw std::runtime_error("cannot open " + path);
    const std::size_t got = std::fread(magic, 1, 2, f);
    std::fclose(f);
    if (got < 2) magic[0] = 0;
  }
  auto file = std::make_unique<file_source>(path);
  if (magic[0] == 0x1f && magic[1] == 0x8b)
    return std::make_unique<gzip_source>(std::move(file));
  return file;
}

namespace detail {

class xml_reader {
 public:
  explicit xml_reader(byte_source& src) : src_(src), buf_(1 << 18) {}

  /// Next byte as unsigned char value, -1 at end of input.
  int get() {
    if (pos_ == len_ && !fill()) return -1;
    return static_cast<unsigned char>(buf_[pos_++]);
  }

  int peek() {
    if (pos_ == len_ && !fill()) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  /// Bytes consumed so far.
  std::size_t offset() const { return base_ + pos_; }

 private:
  bool fill() {
    base_ += len_;
    len_ = src_.read(buf_.data(), buf_.size());
    pos_ = 0;
    return len_ > 0;
  }

  byte_source& src_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::size_t base_ = 0;
};

inline bool xml_space(int c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline bool xml_name_end(int c) {
  return c == -1 || xml_space(c) || c == '>' || c == '/' || c == '<';
}

}  // namespace detail

struct ingest_options {
  std::uint64_t reserve_hint = 0;  // expected element count, pre-sizes the arena
  std::uint64_t max_nodes = 0;     // 0 = unlimited; exceeding it is an error
};

/// Streaming structure-only XML parse: element names become node labels,
/// nesting becomes the tree; attributes, text, comments, processing
/// instructions, CDATA and DOCTYPE content are skipped. Memory use beyond
/// the returned tree is bounded by element depth.
inline tree parse_xml_structure(byte_source& src, alphabet& sigma,
                                const ingest_options& opt = {}) {
  detail::xml_reader in(src);
  tree_builder builder;
  if (opt.reserve_hint > 0) builder.reserve(opt.reserve_hint);

  struct open_element {
    label_id label;
    node_index node;
  };
  std::vector<open_element> stack;
  bool root_seen = false;
  std::string name;

  // Leading UTF-8 byte order mark.
  if (in.peek() == 0xef) {
    in.get();
    if (in.get() != 0xbb || in.get() != 0xbf)
      throw xml_error("malformed byte order mark", 0);
  }

  auto skip_comment = [&]() {
    // After "<!--": scan for "-->".
    int dashes = 0;
    while (true) {
      const int c = in.get();
      if (c == -1) throw xml_error("unterminated comment", in.offset());
      if (c == '-')
        ++dashes;
      else if (c == '>' && dashes >= 2)
        return;
      else
        dashes = 0;
    }
  };

  auto skip_cdata = [&]() {
    // After "<![CDATA[": scan for "]]>".
    int brackets = 0;
    while (true) {
      const int c = in.get();
      if (c == -1) throw xml_error("unterminated CDATA section", in.offset());
      if (c == ']')
        ++brackets;
      else if (c == '>' && brackets >= 2)
        return;
      else
        brackets = 0;
    }
  };

  auto skip_decl = [&]() {
    // After "<!X...": runs to the matching '>', honoring quotes and an
    // internal subset in brackets.
    int level = 0;
    while (true) {
      const int c = in.get();
      if (c == -1) throw xml_error("unterminated declaration", in.offset());
      if (c == '"' || c == '\'') {
        const int q = c;
        while (true) {
          const int d = in.get();
          if (d == -1) throw xml_error("unterminated declaration", in.offset());
          if (d == q) break;
        }
      } else if (c == '[') {
        ++level;
      } else if (c == ']') {
        if (level > 0) --level;
      } else if (c == '>' && level == 0) {
        return;
      }
    }
  };

  auto skip_pi = [&]() {
    // After "<?": scan for "?>".
    bool qm = false;
    while (true) {
      const int c = in.get();
      if (c == -1) throw xml_error("unterminated processing instruction", in.offset());
      if (c == '>' && qm) return;
      qm = c == '?';
    }
  };

  auto read_name = [&]() {
    name.clear();
    while (!detail::xml_name_end(in.peek())) name += static_cast<char>(in.get());
  };

  while (true) {
    const int c = in.get();
    if (c == -1) break;
    if (c != '<') {
      if (stack.empty() && !detail::xml_space(c))
        throw xml_error("content outside the document element", in.offset() - 1);
      continue;
    }

    const std::size_t tag_offset = in.offset() - 1;
    const int c2 = in.peek();
    if (c2 == '?') {
      in.get();
      skip_pi();
      continue;
    }
    if (c2 == '!') {
      in.get();
      const int c3 = in.get();
      if (c3 == '-') {
        if (in.get() != '-') throw xml_error("malformed comment", tag_offset);
        skip_comment();
      } else if (c3 == '[') {
        static const char kCdata[] = "CDATA[";
        for (const char* p = kCdata; *p != '\0'; ++p)
          if (in.get() != *p) throw xml_error("unsupported markup", tag_offset);
        skip_cdata();
      } else if (c3 == -1) {
        throw xml_error("unterminated declaration", tag_offset);
      } else {
        skip_decl();
      }
      continue;
    }
    if (c2 == '/') {
      in.get();
      read_name();
      while (detail::xml_space(in.peek())) in.get();
      if (in.get() != '>') throw xml_error("malformed close tag", tag_offset);
      if (stack.empty()) throw xml_error("close tag without open element", tag_offset);
      if (name != sigma.text(stack.back().label))
        throw xml_error("close tag </" + name + "> does not match <" +
                            std::string(sigma.text(stack.back().label)) + ">",
                        tag_offset);
      stack.pop_back();
      continue;
    }

    read_name();
    if (name.empty()) throw xml_error("malformed tag", tag_offset);
    if (stack.empty() && root_seen)
      throw xml_error("second document element <" + name + ">", tag_offset);
    const label_id id = sigma.intern(name);
    const node_index node =
        stack.empty() ? builder.add_root(id) : builder.add_child(stack.back().node, id);
    root_seen = true;
    if (opt.max_nodes > 0 && builder.size() > opt.max_nodes)
      throw xml_error("element count exceeds limit " + std::to_string(opt.max_nodes),
                      tag_offset);

    // Attributes: scan to '>' or '/>', honoring quotes.
    bool self_closing = false;
    while (true) {
      const int a = in.get();
      if (a == -1) throw xml_error("unterminated tag <" + name + ">", tag_offset);
      if (a == '"' || a == '\'') {
        while (true) {
          const int d = in.get();
          if (d == -1)
            throw xml_error("unterminated attribute value in <" + name + ">", tag_offset);
          if (d == a) break;
        }
      } else if (a == '/') {
        while (detail::xml_space(in.peek())) in.get();
        if (in.get() != '>') throw xml_error("malformed tag <" + name + ">", tag_offset);
        self_closing = true;
        break;
      } else if (a == '>') {
        break;
      }
    }
    if (!self_closing) stack.push_back({id, node});
  }

  if (!stack.empty())
    throw xml_error("end of input inside <" + std::string(sigma.text(stack.back().label)) +
                        ">",
                    in.offset());
  if (!root_seen) throw xml_error("no document element", in.offset());
  return builder.take();
}

inline tree parse_xml_file(const std::string& path, alphabet& sigma,
                           const ingest_options& opt = {}) {
  auto src = open_byte_source(path);
  return parse_xml_structure(*src, sigma, opt);
}

inline tree parse_xml_text(std::string_view text, alphabet& sigma,
                           const ingest_options& opt = {}) {
  memory_source src(text);
  return parse_xml_structure(src, sigma, opt);
}

/// Labels that actually occur in t, interned in first-occurrence order of the
/// node arena.
inline alphabet alphabet_of(const tree& t, const alphabet& sigma) {
  alphabet sub;
  for (node_index v = 0; v < t.size(); ++v) sub.intern(sigma.text(t.label(v)));
  return sub;
}

}  // namespace treent
