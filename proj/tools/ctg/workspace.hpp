#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctg::cli {

namespace fs = std::filesystem;

/// Input the user got wrong or an upstream artifact that is missing or
/// unreadable. Maps to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Artifact layout under the work directory:
///   problems/<id>.p              generate
///   proofs/<id>.proof, stats.csv prove
///   corpus/<name>.{src,tgt,meta} extract; corpora.txt, proofs.txt
///   corpus/<name>.<part>.*       split; split.txt
///   models/<name>.ckpt           train
///   predictions/<name>.<part>.tsv decode
///   reports/*.csv                evaluate, baseline, guided-prove
struct Workspace {
  fs::path root;

  fs::path problems() const { return root / "problems"; }
  fs::path proofs() const { return root / "proofs"; }
  fs::path corpus() const { return root / "corpus"; }
  fs::path models() const { return root / "models"; }
  fs::path predictions() const { return root / "predictions"; }
  fs::path reports() const { return root / "reports"; }

  fs::path corpus_stem(const std::string& name, const std::string& part = "") const {
    return corpus() / (part.empty() ? name : name + "." + part);
  }
  fs::path checkpoint(const std::string& name) const { return models() / (name + ".ckpt"); }
  fs::path prediction_file(const std::string& name, const std::string& part) const {
    return predictions() / (name + "." + part + ".tsv");
  }
};

/// Throws DataError naming the command that produces `p` when it is absent.
void require(const fs::path& p, const std::string& producer);
void require_corpus(const fs::path& stem, const std::string& producer);

std::vector<std::string> read_list(const fs::path& p, const std::string& producer);
void write_list(const fs::path& p, const std::vector<std::string>& items);
std::string slurp(const fs::path& p);
void write_text(const fs::path& p, const std::string& text);

/// Regular files with the given extension, sorted by name.
std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext);

/// Runs f(0..n-1) on up to `jobs` threads. f must only write to
/// per-index slots.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f);

}  // namespace ctg::cli
