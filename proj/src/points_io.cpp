#include "frontfill/points_io.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <system_error>

namespace frontfill {

namespace {

bool has_gz_suffix(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Buffered writer over either a plain file or a gzip stream.
class Sink {
 public:
  explicit Sink(const std::string& path) : gz_(has_gz_suffix(path)) {
    if (gz_) {
      gzfile_ = gzopen(path.c_str(), "wb");
      if (!gzfile_) throw std::runtime_error("cannot open '" + path + "' for writing");
    } else {
      file_ = std::fopen(path.c_str(), "wb");
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    buf_.reserve(kFlushAt + 256);
  }
  ~Sink() {
    try {
      close();
    } catch (...) {
    }
  }

  void append(const char* data, std::size_t len) {
    buf_.append(data, len);
    if (buf_.size() >= kFlushAt) flush();
  }
  void append(char c) { append(&c, 1); }

  void close() {
    if (closed_) return;
    flush();
    closed_ = true;
    if (gz_) {
      if (gzclose(gzfile_) != Z_OK) throw std::runtime_error("gzip close failed");
    } else {
      if (std::fclose(file_) != 0) throw std::runtime_error("file close failed");
    }
  }

 private:
  static constexpr std::size_t kFlushAt = 1 << 20;

  void flush() {
    if (buf_.empty()) return;
    if (gz_) {
      if (gzwrite(gzfile_, buf_.data(), static_cast<unsigned>(buf_.size())) !=
          static_cast<int>(buf_.size()))
        throw std::runtime_error("gzip write failed");
    } else {
      if (std::fwrite(buf_.data(), 1, buf_.size(), file_) != buf_.size())
        throw std::runtime_error("file write failed");
    }
    buf_.clear();
  }

  bool gz_;
  bool closed_ = false;
  gzFile gzfile_ = nullptr;
  std::FILE* file_ = nullptr;
  std::string buf_;
};

// Line reader; gzread handles plain files transparently too.
class Source {
 public:
  explicit Source(const std::string& path) {
    gzfile_ = gzopen(path.c_str(), "rb");
    if (!gzfile_) throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  ~Source() { gzclose(gzfile_); }

  bool getline(std::string& line) {
    line.clear();
    for (;;) {
      if (pos_ == len_) {
        int n = gzread(gzfile_, buf_, sizeof buf_);
        if (n < 0) throw std::runtime_error("read failed (corrupt gzip stream?)");
        if (n == 0) return !line.empty();
        pos_ = 0;
        len_ = static_cast<std::size_t>(n);
      }
      const char* nl = static_cast<const char*>(std::memchr(buf_ + pos_, '\n', len_ - pos_));
      if (nl) {
        line.append(buf_ + pos_, nl - (buf_ + pos_));
        pos_ = static_cast<std::size_t>(nl - buf_) + 1;
        return true;
      }
      line.append(buf_ + pos_, len_ - pos_);
      pos_ = len_;
    }
  }

 private:
  gzFile gzfile_;
  char buf_[1 << 16];
  std::size_t pos_ = 0, len_ = 0;
};

const char* kCoordNames[3] = {"x", "y", "z"};

void append_double(std::string& row, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  row.append(buf, res.ptr - buf);
}

void append_int(std::string& row, long long v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  row.append(buf, res.ptr - buf);
}

double parse_double(const char*& s, const char* end, const std::string& path, std::size_t line) {
  double v;
  auto res = std::from_chars(s, end, v);
  if (res.ec != std::errc())
    throw std::runtime_error(path + ":" + std::to_string(line) + ": malformed number");
  s = res.ptr;
  return v;
}

long long parse_int(const char*& s, const char* end, const std::string& path, std::size_t line) {
  long long v;
  auto res = std::from_chars(s, end, v);
  if (res.ec != std::errc())
    throw std::runtime_error(path + ":" + std::to_string(line) + ": malformed integer");
  s = res.ptr;
  return v;
}

void expect_comma(const char*& s, const char* end, const std::string& path, std::size_t line) {
  if (s == end || *s != ',')
    throw std::runtime_error(path + ":" + std::to_string(line) + ": wrong column count");
  ++s;
}

}  // namespace

template <int D>
void write_points(const PointSet<D>& set, const std::string& path) {
  Sink sink(path);
  std::string row;
  for (int i = 0; i < D; ++i) {
    if (i) row += ',';
    row += kCoordNames[i];
  }
  row += ",thread,cell,order\n";
  sink.append(row.data(), row.size());

  for (const auto& rec : set.points) {
    row.clear();
    for (int i = 0; i < D; ++i) {
      if (i) row += ',';
      append_double(row, rec.p.v[i]);
    }
    row += ',';
    append_int(row, rec.thread);
    row += ',';
    append_int(row, rec.cell);
    row += ',';
    append_int(row, rec.order);
    row += '\n';
    sink.append(row.data(), row.size());
  }
  sink.close();
}

int points_file_dim(const std::string& path) {
  Source src(path);
  std::string header;
  if (!src.getline(header)) throw std::runtime_error(path + ": empty points file");
  if (header.rfind("x,y,z,", 0) == 0) return 3;
  if (header.rfind("x,y,", 0) == 0) return 2;
  if (header.rfind("x,", 0) == 0) return 1;
  throw std::runtime_error(path + ":1: unrecognized points header '" + header + "'");
}

template <int D>
PointSet<D> read_points(const std::string& path) {
  int dim = points_file_dim(path);
  if (dim != D)
    throw std::runtime_error(path + ": contains " + std::to_string(dim) +
                             "-D points, expected " + std::to_string(D) + "-D");

  Source src(path);
  std::string line;
  src.getline(line);  // header, validated above

  PointSet<D> set;
  std::size_t lineno = 1;
  while (src.getline(line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* s = line.data();
    const char* end = s + line.size();
    PointRecord<D> rec;
    for (int i = 0; i < D; ++i) {
      if (i) expect_comma(s, end, path, lineno);
      rec.p.v[i] = parse_double(s, end, path, lineno);
    }
    expect_comma(s, end, path, lineno);
    rec.thread = static_cast<int32_t>(parse_int(s, end, path, lineno));
    expect_comma(s, end, path, lineno);
    rec.cell = static_cast<int32_t>(parse_int(s, end, path, lineno));
    expect_comma(s, end, path, lineno);
    rec.order = parse_int(s, end, path, lineno);
    if (s != end)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    set.points.push_back(rec);
    if (rec.thread == -1) set.seeds.push_back(rec.p);
  }
  return set;
}

template void write_points<1>(const PointSet<1>&, const std::string&);
template void write_points<2>(const PointSet<2>&, const std::string&);
template void write_points<3>(const PointSet<3>&, const std::string&);
template PointSet<1> read_points<1>(const std::string&);
template PointSet<2> read_points<2>(const std::string&);
template PointSet<3> read_points<3>(const std::string&);

}  // namespace frontfill
