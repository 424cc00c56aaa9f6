#include "ctg/baseline/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace ctg {

namespace {

void walks(const Term& t, const SymbolTable& symbols, const std::string& prefix, std::map<std::string, double>& out) {
  if (t.is_var() || t.args().empty()) return;
  const std::string& f = symbols.name(t.functor());
  out[prefix + f] += 1;
  for (const auto& a : t.args()) {
    out[prefix + f + ">" + (a.is_var() ? symbols.name(SymbolTable::kVar) : symbols.name(a.functor()))] += 1;
    walks(a, symbols, prefix, out);
  }
}

}  // namespace

std::map<std::string, double> literal_walks(const Literal& l, const SymbolTable& symbols) {
  std::map<std::string, double> out;
  const std::string prefix = l.positive ? "" : "~";
  if (l.atom.args().empty()) {
    out[prefix + symbols.name(l.atom.functor())] += 1;
  } else {
    walks(l.atom, symbols, prefix, out);
  }
  return out;
}

std::uint32_t FeatureHasher::operator()(const std::string& feature) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : feature) mix(static_cast<unsigned char>(c));
  return static_cast<std::uint32_t>(h & ((std::uint64_t{1} << bits) - 1));
}

FeatureVector featurize_literal(const Literal& l, const SymbolTable& symbols, const FeatureHasher& h) {
  FeatureVector out;
  for (const auto& [f, w] : literal_walks(l, symbols)) out[h(f)] += w;
  return out;
}

FeatureVector featurize_path(const std::vector<Literal>& lits, const SymbolTable& symbols, double gamma,
                             const FeatureHasher& h) {
  if (lits.empty()) throw std::invalid_argument("cannot featurize an empty path");
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("decay must lie in (0, 1]");
  FeatureVector out;
  double weight = 1, total = 0;
  for (std::size_t d = 0; d < lits.size(); ++d) {
    for (const auto& [f, v] : featurize_literal(lits[lits.size() - 1 - d], symbols, h)) out[f] += weight * v;
    total += weight;
    weight *= gamma;
  }
  for (auto& [f, v] : out) v /= total;
  return out;
}

std::vector<Literal> parse_literal_path(const Tokens& source, SymbolTable& symbols) {
  std::vector<Literal> out;
  Tokens segment;
  auto flush = [&] {
    auto l = detokenize_literal(segment, symbols);
    if (!l) throw std::invalid_argument("malformed literal '" + join_tokens(segment) + "' in path");
    out.push_back(std::move(*l));
    segment.clear();
  };
  for (const auto& t : source) {
    if (t == kLiteralSeparator) {
      flush();
    } else {
      segment.push_back(t);
    }
  }
  flush();
  return out;
}

Eigen::VectorXd MultilabelModel::scores(const FeatureVector& fv) const {
  Eigen::VectorXd s = bias_;
  for (const auto& [f, v] : fv) {
    auto it = std::lower_bound(features_.begin(), features_.end(), f);
    if (it == features_.end() || *it != f) continue;
    s += v * weights_.col(it - features_.begin());
  }
  return s;
}

std::vector<std::string> MultilabelModel::predict_topk(const FeatureVector& fv, std::size_t k) const {
  const Eigen::VectorXd s = scores(fv);
  std::vector<std::size_t> idx(labels_.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Labels are sorted, so index order is lexicographic order.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return s(static_cast<Eigen::Index>(a)) > s(static_cast<Eigen::Index>(b));
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, idx.size()); ++i) out.push_back(labels_[idx[i]]);
  return out;
}

namespace {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

}  // namespace

void MultilabelModel::save(const std::filesystem::path& p) const {
  std::ostringstream os;
  os << "ctg-baseline v1\n";
  os << "accuracy " << hexfloat(training_accuracy_) << '\n';
  os << "labels " << labels_.size() << '\n';
  for (const auto& l : labels_) os << l << '\n';
  os << "features " << features_.size() << '\n';
  for (auto f : features_) os << f << '\n';
  for (std::size_t l = 0; l < labels_.size(); ++l) {
    const auto li = static_cast<Eigen::Index>(l);
    std::size_t nnz = 0;
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) nnz += weights_(li, j) != 0;
    os << "label " << l << ' ' << hexfloat(bias_(li)) << ' ' << nnz;
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      if (weights_(li, j) != 0) os << ' ' << j << ':' << hexfloat(weights_(li, j));
    }
    os << '\n';
  }
  std::ofstream out(p, std::ios::binary);
  out << os.str();
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

MultilabelModel MultilabelModel::load(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  auto fail = [&p](const std::string& why) { return std::runtime_error(p.string() + ": " + why); };
  std::string line, tag;
  if (!std::getline(in, line) || line != "ctg-baseline v1") throw fail("unsupported baseline model version");
  MultilabelModel m;
  std::string acc;
  std::size_t n = 0;
  if (!(in >> tag >> acc) || tag != "accuracy") throw fail("missing accuracy");
  m.training_accuracy_ = parse_hexfloat(acc);
  if (!(in >> tag >> n) || tag != "labels") throw fail("missing labels");
  m.labels_.resize(n);
  for (auto& l : m.labels_) {
    if (!(in >> l)) throw fail("truncated label list");
  }
  if (!(in >> tag >> n) || tag != "features") throw fail("missing features");
  m.features_.resize(n);
  for (auto& f : m.features_) {
    if (!(in >> f)) throw fail("truncated feature list");
  }
  m.weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.labels_.size()), static_cast<Eigen::Index>(n));
  m.bias_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.labels_.size()));
  for (std::size_t l = 0; l < m.labels_.size(); ++l) {
    std::size_t index = 0, nnz = 0;
    std::string bias;
    if (!(in >> tag >> index >> bias >> nnz) || tag != "label" || index != l) throw fail("bad label record");
    m.bias_(static_cast<Eigen::Index>(l)) = parse_hexfloat(bias);
    for (std::size_t k = 0; k < nnz; ++k) {
      std::string entry;
      if (!(in >> entry)) throw fail("truncated weights");
      const auto colon = entry.find(':');
      if (colon == std::string::npos) throw fail("bad weight entry");
      const std::size_t j = std::stoul(entry.substr(0, colon));
      if (j >= n) throw fail("weight index out of range");
      m.weights_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = parse_hexfloat(entry.substr(colon + 1));
    }
  }
  return m;
}

MultilabelModel train_multilabel(const std::vector<LabeledExample>& examples, const MultilabelParams& hp) {
  MultilabelModel m;
  for (const auto& e : examples) m.labels_.push_back(e.label);
  std::sort(m.labels_.begin(), m.labels_.end());
  m.labels_.erase(std::unique(m.labels_.begin(), m.labels_.end()), m.labels_.end());
  if (m.labels_.size() < 2) throw SingleLabelCorpus("multilabel training needs at least two distinct labels");
  for (const auto& e : examples) {
    for (const auto& [f, v] : e.features) m.features_.push_back(f);
  }
  std::sort(m.features_.begin(), m.features_.end());
  m.features_.erase(std::unique(m.features_.begin(), m.features_.end()), m.features_.end());

  const auto L = static_cast<Eigen::Index>(m.labels_.size());
  m.weights_ = Eigen::MatrixXd::Zero(L, static_cast<Eigen::Index>(m.features_.size()));
  m.bias_ = Eigen::VectorXd::Zero(L);

  struct Compact {
    std::vector<std::pair<Eigen::Index, double>> x;
    Eigen::Index y;
  };
  std::vector<Compact> data;
  for (const auto& e : examples) {
    Compact c;
    for (const auto& [f, v] : e.features) {
      c.x.emplace_back(std::lower_bound(m.features_.begin(), m.features_.end(), f) - m.features_.begin(), v);
    }
    c.y = std::lower_bound(m.labels_.begin(), m.labels_.end(), e.label) - m.labels_.begin();
    data.push_back(std::move(c));
  }

  std::mt19937_64 rng(hp.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    const double lr = hp.learning_rate / std::sqrt(1.0 + static_cast<double>(epoch));
    for (std::size_t idx : order) {
      const Compact& c = data[idx];
      Eigen::VectorXd z = m.bias_;
      for (const auto& [j, v] : c.x) z += v * m.weights_.col(j);
      Eigen::VectorXd g = (1.0 / (1.0 + (-z.array()).exp())).matrix();
      g(c.y) -= 1.0;
      m.bias_ -= lr * g;
      for (const auto& [j, v] : c.x) {
        m.weights_.col(j) -= lr * (v * g + hp.l2 * m.weights_.col(j));
      }
    }
  }

  std::size_t correct = 0;
  for (const auto& c : data) {
    Eigen::VectorXd z = m.bias_;
    for (const auto& [j, v] : c.x) z += v * m.weights_.col(j);
    Eigen::Index best = 0;
    for (Eigen::Index l = 1; l < L; ++l) {
      if (z(l) > z(best)) best = l;
    }
    correct += best == c.y;
  }
  m.training_accuracy_ = data.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(data.size());
  return m;
}

}  // namespace ctg
