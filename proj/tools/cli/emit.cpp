#include "emit.hpp"

#include <cstdio>
#include <stdexcept>

namespace amo::cli {

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Sink::Sink(const std::string& path) : path_(path) {
  if (path_.empty()) {
    to_stdout_ = true;
    f_ = stdout;
    return;
  }
  tmp_ = path_ + ".tmp";
  f_ = std::fopen(tmp_.c_str(), "wb");
  if (!f_) throw std::runtime_error("cannot open output file: " + path_);
}

Sink::~Sink() {
  try {
    close();
  } catch (...) {
  }
}

void Sink::write(const std::string& s) {
  if (!f_) throw std::logic_error("write after close");
  if (std::fwrite(s.data(), 1, s.size(), f_) != s.size())
    throw std::runtime_error("short write to " + (to_stdout_ ? "stdout" : path_));
}

void Sink::close() {
  if (!f_) return;
  if (to_stdout_) {
    std::fflush(f_);
    f_ = nullptr;
    return;
  }
  std::FILE* f = f_;
  f_ = nullptr;
  if (std::fclose(f) != 0)
    throw std::runtime_error("close failed for " + path_);
  if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path_);
}

}  // namespace amo::cli
