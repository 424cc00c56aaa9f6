#include "workspace.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ctg::cli {

void require(const fs::path& p, const std::string& producer) {
  if (!fs::exists(p)) throw DataError("missing " + p.string() + "; run `ctg " + producer + "` first");
}

void require_corpus(const fs::path& stem, const std::string& producer) {
  for (const char* ext : {".src", ".tgt", ".meta"}) require(stem.string() + ext, producer);
}

std::vector<std::string> read_list(const fs::path& p, const std::string& producer) {
  require(p, producer);
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(is, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

void write_list(const fs::path& p, const std::vector<std::string>& items) {
  std::string text;
  for (const auto& i : items) text += i + "\n";
  write_text(p, text);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  os << text;
  if (!os) throw DataError("cannot write " + p.string());
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ctg::cli
