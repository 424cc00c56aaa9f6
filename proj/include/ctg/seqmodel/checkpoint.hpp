#pragma once

#include <filesystem>

#include "ctg/seqmodel/model.hpp"

namespace ctg {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A `v1` header line with the config and vocabulary hashes, both
/// vocabularies, then one record per tensor: name, rank, dims and the
/// row-major little-endian doubles, each length-prefixed.
void save_checkpoint(const SeqModel& m, const std::filesystem::path& p);

/// Throws CheckpointError on a version mismatch, truncation, a shape that
/// disagrees with the header, or a vocabulary whose hash disagrees.
SeqModel load_checkpoint(const std::filesystem::path& p);

}  // namespace ctg
