#include "workspace.hpp"

#include <fstream>
#include <sstream>

namespace relstab::cli {

namespace {

using json = nlohmann::json;

struct Line {
  std::size_t number;
  std::vector<std::string> words;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string w;
    while (ls >> w) line.words.push_back(w);
    if (line.words.empty() || line.words[0][0] == '#') continue;
    out.push_back(std::move(line));
  }
  return out;
}

long long parse_int(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

// Parses "name=value" pairs of a header line into the requested order.
std::vector<long long> header(const Line& l, const std::string& kind,
                              const std::vector<std::string>& fields) {
  if (l.words[0] != kind) throw ParseError(l.number, "expected header '" + kind + "'");
  if (l.words.size() != fields.size() + 1)
    throw ParseError(l.number, "header needs exactly the fields of '" + kind + "'");
  std::vector<long long> out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string& w = l.words[i + 1];
    const std::string prefix = fields[i] + "=";
    if (w.rfind(prefix, 0) != 0) throw ParseError(l.number, "expected '" + prefix + "...'");
    const long long v = parse_int(w.substr(prefix.size()), l.number);
    if (v < 0) throw ParseError(l.number, fields[i] + " must be nonnegative");
    out.push_back(v);
  }
  return out;
}

std::vector<Scalar> entries(const Line& l, const std::string& kind, std::size_t count, unsigned p) {
  if (l.words[0] != kind) throw ParseError(l.number, "expected a '" + kind + "' line");
  if (l.words.size() != count + 1)
    throw ParseError(l.number, "expected " + std::to_string(count) + " entries, got " +
                                   std::to_string(l.words.size() - 1));
  std::vector<Scalar> out;
  for (std::size_t i = 1; i < l.words.size(); ++i) {
    const long long v = parse_int(l.words[i], l.number);
    if (v < 0 || v >= static_cast<long long>(p))
      throw ParseError(l.number, "entry " + l.words[i] + " is not in 0.." + std::to_string(p - 1));
    out.push_back(static_cast<Scalar>(v));
  }
  return out;
}

FieldSpec field_of(long long p, std::size_t line) {
  try {
    return FieldSpec(static_cast<unsigned>(p));
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

std::string join_row(const std::string& tag, const Matrix& m, std::size_t r0, std::size_t n) {
  std::string s = tag;
  for (std::size_t i = r0; i < r0 + n; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += " " + std::to_string(m(i, j));
  return s;
}

Matrix make_matrix(FieldSpec f, std::size_t rows, std::size_t cols, const std::vector<Scalar>& v) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

json matrix_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(FieldSpec f, const json& j) {
  const auto data = j.at("data").get<std::vector<Scalar>>();
  const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
  if (data.size() != rows * cols) throw Error("cached matrix has the wrong size");
  for (auto v : data)
    if (v >= f.p()) throw Error("cached matrix entry out of range");
  return make_matrix(f, rows, cols, data);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

GroupPtr parse_group_file(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "empty group file");
  const std::size_t degree = static_cast<std::size_t>(header(lines[0], "group", {"degree"})[0]);
  std::vector<Perm> gens;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.words[0] != "gen") throw ParseError(l.number, "expected a 'gen' line");
    if (l.words.size() != degree + 1)
      throw ParseError(l.number, "permutation needs " + std::to_string(degree) + " images");
    Perm perm;
    std::vector<bool> seen(degree, false);
    for (std::size_t k = 1; k < l.words.size(); ++k) {
      const long long v = parse_int(l.words[k], l.number);
      if (v < 0 || v >= static_cast<long long>(degree))
        throw ParseError(l.number, "image " + l.words[k] + " out of range");
      if (seen[static_cast<std::size_t>(v)])
        throw ParseError(l.number, "repeated image " + l.words[k] + ": not a permutation");
      seen[static_cast<std::size_t>(v)] = true;
      perm.push_back(static_cast<std::uint32_t>(v));
    }
    gens.push_back(std::move(perm));
  }
  try {
    return build_group(std::move(gens), degree);
  } catch (const GroupError& e) {
    throw ParseError(lines[0].number, e.what());
  }
}

std::string print_group_file(const FiniteGroup& g) {
  std::string s = "group degree=" + std::to_string(g.degree()) + "\n";
  for (const auto& perm : g.generators()) {
    s += "gen";
    for (auto v : perm) s += " " + std::to_string(v);
    s += "\n";
  }
  return s;
}

GModule parse_module_file(const std::string& text, const GroupPtr& group) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "empty module file");
  const auto h = header(lines[0], "module", {"p", "dim"});
  const FieldSpec f = field_of(h[0], lines[0].number);
  const std::size_t d = static_cast<std::size_t>(h[1]);
  if (lines.size() - 1 != group->num_generators())
    throw ParseError(lines[0].number, "expected " + std::to_string(group->num_generators()) +
                                          " 'mat' lines, one per group generator, got " +
                                          std::to_string(lines.size() - 1));
  std::vector<Matrix> acts;
  for (std::size_t i = 1; i < lines.size(); ++i)
    acts.push_back(make_matrix(f, d, d, entries(lines[i], "mat", d * d, f.p())));
  try {
    return GModule(group, f, d, std::move(acts));
  } catch (const Error& e) {
    throw ParseError(lines[0].number, e.what());
  }
}

std::string print_module_file(const GModule& m) {
  std::string s = "module p=" + std::to_string(m.field().p()) + " dim=" + std::to_string(m.dim()) + "\n";
  for (const auto& a : m.actions()) s += join_row("mat", a, 0, a.rows()) + "\n";
  return s;
}

Matrix parse_map_file(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "empty map file");
  const auto h = header(lines[0], "map", {"p", "rows", "cols"});
  const FieldSpec f = field_of(h[0], lines[0].number);
  const auto rows = static_cast<std::size_t>(h[1]), cols = static_cast<std::size_t>(h[2]);
  if (lines.size() - 1 != rows)
    throw ParseError(lines[0].number, "expected " + std::to_string(rows) + " 'row' lines");
  std::vector<Scalar> data;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto r = entries(lines[i], "row", cols, f.p());
    data.insert(data.end(), r.begin(), r.end());
  }
  return make_matrix(f, rows, cols, data);
}

std::string print_map_file(const Matrix& m) {
  std::string s = "map p=" + std::to_string(m.field().p()) + " rows=" + std::to_string(m.rows()) +
                  " cols=" + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) s += join_row("row", m, i, 1) + "\n";
  return s;
}

std::vector<std::string> parse_corpus_file(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& l : tokenize(text)) {
    if (l.words.size() != 1) throw ParseError(l.number, "expected one path per line");
    out.push_back(l.words[0]);
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string cache_key(const GModule& m) {
  return std::to_string(m.group().hash()) + ":" + std::to_string(m.field().p()) + ":" +
         std::to_string(module_hash(m));
}

DecompCache::DecompCache(std::optional<std::filesystem::path> path) : path_(std::move(path)) {
  json root = json::object();
  if (path_ && std::filesystem::exists(*path_)) {
    try {
      root = json::parse(read_text(*path_));
      if (!root.is_object() || root.value("version", 0) != 1 || !root.contains("entries"))
        throw Error("unrecognised layout");
    } catch (const std::exception& e) {
      warnings_.push_back("ignoring cache " + path_->string() + ": " + e.what());
      root = json::object();
    }
  }
  if (!root.contains("entries")) root = json{{"version", 1}, {"entries", json::object()}};
  root_ = std::move(root);
}

std::optional<Decomposition> DecompCache::lookup(const std::string& key, const GModule& m) {
  const json& entries = root_.at("entries");
  if (!entries.contains(key)) return std::nullopt;
  try {
    const json& e = entries.at(key);
    const FieldSpec f = m.field();
    Decomposition d{m, {}, GMap::identity(m), Matrix(f, 0, 0), {}, {}};
    std::size_t offset = 0;
    for (const auto& s : e.at("summands")) {
      std::vector<Matrix> acts;
      for (const auto& a : s.at("actions")) acts.push_back(matrix_from_json(f, a));
      const auto dim = s.at("dim").get<std::size_t>();
      GModule mod(m.group_ptr(), f, dim, std::move(acts));
      const auto mult = s.at("multiplicity").get<std::size_t>();
      const std::string cert = s.at("certificate").get<std::string>();
      Certificate c = Certificate::MonteCarlo;
      for (auto cand : {Certificate::LocalTop, Certificate::LocalSocle, Certificate::EndDimOne,
                        Certificate::Exhaustive, Certificate::MonteCarlo})
        if (to_string(cand) == cert) c = cand;
      for (std::size_t k = 0; k < mult; ++k) {
        d.block_summand.push_back(d.summands.size());
        d.block_offset.push_back(offset);
        offset += dim;
      }
      d.summands.push_back({std::move(mod), mult, c});
    }
    if (offset != m.dim()) throw Error("summand dimensions do not add up");
    const Matrix iso = matrix_from_json(f, e.at("iso"));
    const Matrix inv = matrix_from_json(f, e.at("iso_inverse"));
    // The witness: an invertible G-map from the assembled sum onto m.
    d.iso = GMap(d.assembled(), m, iso);
    if (!(iso * inv).is_identity() || !(inv * iso).is_identity())
      throw Error("iso_inverse is not inverse to iso");
    d.iso_inverse = inv;
    return d;
  } catch (const std::exception& ex) {
    warnings_.push_back("cache entry " + key + " failed validation: " + ex.what());
    return std::nullopt;
  }
}

Decomposition DecompCache::decompose(const GModule& m, const DecomposeOptions& opts) {
  const std::string key = cache_key(m);
  if (path_) {
    if (auto hit = lookup(key, m)) {
      ++hits_;
      return std::move(*hit);
    }
  }
  ++misses_;
  Decomposition d = krull_schmidt(m, opts);
  if (path_) {
    json summands = json::array();
    for (const auto& s : d.summands) {
      json acts = json::array();
      for (const auto& a : s.module.actions()) acts.push_back(matrix_json(a));
      summands.push_back({{"dim", s.module.dim()},
                          {"multiplicity", s.multiplicity},
                          {"certificate", to_string(s.certificate)},
                          {"actions", acts}});
    }
    root_["entries"][key] = {{"summands", summands},
                            {"iso", matrix_json(d.iso.matrix())},
                            {"iso_inverse", matrix_json(d.iso_inverse)}};
    dirty_ = true;
  }
  return d;
}

void DecompCache::save() {
  if (!path_ || !dirty_) return;
  const auto tmp = path_->string() + ".tmp";
  try {
    write_text(tmp, root_.dump(1) + "\n");
    std::filesystem::rename(tmp, *path_);
    dirty_ = false;
  } catch (const std::exception& e) {
    warnings_.push_back(std::string("could not write cache: ") + e.what());
  }
}

void write_counterexample(const std::filesystem::path& dir, const FiniteGroup* group,
                          const Counterexample& ce) {
  std::filesystem::create_directories(dir);
  std::string info = "check: " + ce.check + "\n";
  if (!ce.detail.empty()) info += "detail: " + ce.detail + "\n";
  if (group) {
    write_text(dir / "group.grp", print_group_file(*group));
    info += "group: group.grp\n";
  }
  for (const auto& [name, m] : ce.modules) {
    write_text(dir / (name + ".mod"), print_module_file(m));
    info += "module " + name + ": " + name + ".mod\n";
  }
  if (ce.map) {
    write_text(dir / "map.map", print_map_file(*ce.map));
    info += "map: map.map\n";
  }
  write_text(dir / "README.txt", info);
}

}  // namespace relstab::cli
