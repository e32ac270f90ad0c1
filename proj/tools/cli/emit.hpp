#pragma once

#include <cstdio>
#include <string>

namespace amo::cli {

// Round-trip-safe decimal rendering: 17 significant digits.
std::string num17(double v);

// Output sink: a file when a path is given, stdout otherwise. File writes
// go through a temporary and rename on close, so readers never see a
// partial result.
class Sink {
 public:
  explicit Sink(const std::string& path);
  ~Sink();
  Sink(const Sink&) = delete;
  Sink& operator=(const Sink&) = delete;

  void write(const std::string& s);
  void line(const std::string& s) { write(s + "\n"); }
  void close();

 private:
  std::string path_;
  std::string tmp_;
  std::FILE* f_ = nullptr;
  bool to_stdout_ = false;
};

}  // namespace amo::cli
