#include "ctg/seqmodel/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace ctg {

namespace {

constexpr const char* kMagic = "ctg-seq2seq";

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Input {
 public:
  explicit Input(std::string data) : data_(std::move(data)) {}

  std::string line() {
    const std::size_t nl = data_.find('\n', pos_);
    if (nl == std::string::npos) throw CheckpointError("checkpoint truncated");
    std::string out = data_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return out;
  }

  std::uint64_t u64() { return uint(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }

  std::string bytes(std::size_t n) {
    need(n);
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CheckpointError("checkpoint truncated");
  }

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    return v;
  }

  std::string data_;
  std::size_t pos_ = 0;
};

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

}  // namespace

void save_checkpoint(const SeqModel& m, const std::filesystem::path& p) {
  const ModelConfig& c = m.config;
  std::string out = std::string("v1 ") + kMagic + " src_vocab=" + std::to_string(c.src_vocab) +
                    " tgt_vocab=" + std::to_string(c.tgt_vocab) + " embed=" + std::to_string(c.embed) +
                    " hidden=" + std::to_string(c.hidden) + " layers=" + std::to_string(c.layers) +
                    " attention=" + (c.attention ? "1" : "0") + " seed=" + std::to_string(c.seed) +
                    " src_hash=" + hex(m.src_vocab.hash()) + " tgt_hash=" + hex(m.tgt_vocab.hash()) + "\n";
  for (const Vocabulary* v : {&m.src_vocab, &m.tgt_vocab}) {
    out += "vocab " + std::to_string(v->size()) + "\n";
    for (const auto& t : v->tokens()) out += t + "\n";
  }
  std::size_t count = 0;
  m.params.visit([&count](const std::string&, const Mat&) { ++count; });
  out += "tensors " + std::to_string(count) + "\n";
  m.params.visit([&out](const std::string& name, const Mat& t) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, 2);
    put_u64(out, static_cast<std::uint64_t>(t.rows()));
    put_u64(out, static_cast<std::uint64_t>(t.cols()));
    put_u64(out, static_cast<std::uint64_t>(t.size()) * 8);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(t(i, j)));
    }
  });
  std::ofstream os(p, std::ios::binary);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw CheckpointError("cannot write checkpoint " + p.string());
}

SeqModel load_checkpoint(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw CheckpointError("cannot read checkpoint " + p.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  Input in(buf.str());

  std::istringstream header(in.line());
  std::string version, magic;
  header >> version >> magic;
  if (version != "v1" || magic != kMagic) throw CheckpointError("unsupported checkpoint version '" + version + "'");
  std::map<std::string, std::string> kv;
  for (std::string field; header >> field;) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw CheckpointError("malformed checkpoint header");
    kv[field.substr(0, eq)] = field.substr(eq + 1);
  }
  auto num = [&](const char* key) -> std::uint64_t {
    auto it = kv.find(key);
    if (it == kv.end()) throw CheckpointError(std::string("checkpoint header lacks ") + key);
    try {
      return std::stoull(it->second, nullptr, std::string(key).ends_with("hash") ? 16 : 10);
    } catch (const std::exception&) {
      throw CheckpointError(std::string("bad checkpoint header field ") + key);
    }
  };
  ModelConfig c;
  c.src_vocab = num("src_vocab");
  c.tgt_vocab = num("tgt_vocab");
  c.embed = num("embed");
  c.hidden = num("hidden");
  c.layers = num("layers");
  c.attention = num("attention") != 0;
  c.seed = num("seed");

  auto read_vocab = [&](std::uint64_t expected_size, std::uint64_t expected_hash) {
    std::istringstream l(in.line());
    std::string tag;
    std::size_t n = 0;
    if (!(l >> tag >> n) || tag != "vocab") throw CheckpointError("malformed vocabulary section");
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(in.line());
    Vocabulary v;
    try {
      v = Vocabulary::from_tokens(std::move(tokens));
    } catch (const std::invalid_argument& e) {
      throw CheckpointError(e.what());
    }
    if (v.size() != expected_size || v.hash() != expected_hash) throw CheckpointError("vocabulary disagrees with header");
    return v;
  };
  Vocabulary src = read_vocab(c.src_vocab, num("src_hash"));
  Vocabulary tgt = read_vocab(c.tgt_vocab, num("tgt_hash"));
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(e.what());
  }
  SeqModel m = init_model(c, std::move(src), std::move(tgt));

  std::istringstream tl(in.line());
  std::string tag;
  std::size_t count = 0;
  if (!(tl >> tag >> count) || tag != "tensors") throw CheckpointError("malformed tensor section");
  std::size_t expected = 0;
  m.params.visit([&expected](const std::string&, const Mat&) { ++expected; });
  if (count != expected) throw CheckpointError("tensor count disagrees with the configuration");
  m.params.visit([&in](const std::string& name, Mat& t) {
    const std::string got = in.bytes(in.u32());
    if (got != name) throw CheckpointError("expected tensor " + name + ", found " + got);
    if (in.u32() != 2) throw CheckpointError("tensor " + name + ": unexpected rank");
    const std::uint64_t rows = in.u64(), cols = in.u64();
    if (rows != static_cast<std::uint64_t>(t.rows()) || cols != static_cast<std::uint64_t>(t.cols())) {
      throw CheckpointError("tensor " + name + ": shape disagrees with the configuration");
    }
    if (in.u64() != rows * cols * 8) throw CheckpointError("tensor " + name + ": bad payload length");
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = std::bit_cast<double>(in.u64());
    }
  });
  if (!in.at_end()) throw CheckpointError("trailing data after the last tensor");
  return m;
}

}  // namespace ctg
