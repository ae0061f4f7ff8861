#include "sauna/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sauna {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

void stripTrailingCr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

CategoricalStats buildStats(const std::vector<std::string>& column,
                            std::vector<std::int32_t>& codesOut) {
  CategoricalStats stats;
  stats.total = static_cast<Index>(column.size());
  codesOut.reserve(column.size());
  for (const auto& label : column) {
    auto it = stats.codeByLabel.find(label);
    std::int32_t code;
    if (it == stats.codeByLabel.end()) {
      code = static_cast<std::int32_t>(stats.labels.size());
      stats.codeByLabel.emplace(label, code);
      stats.labels.push_back(label);
      stats.freq.push_back(0);
    } else {
      code = it->second;
    }
    ++stats.freq[code];
    codesOut.push_back(code);
  }
  return stats;
}

}  // namespace

Index Schema::numericCount() const {
  Index c = 0;
  for (const auto& a : attributes)
    if (a.kind == AttrKind::Numeric) ++c;
  return c;
}

Index Schema::categoricalCount() const {
  return static_cast<Index>(attributes.size()) - numericCount();
}

void Schema::validate() const {
  if (attributes.empty()) throw std::invalid_argument("schema has no attributes");
  std::unordered_set<std::string> seen;
  for (const auto& a : attributes) {
    if (a.name.empty()) throw std::invalid_argument("schema has an unnamed attribute");
    if (!seen.insert(a.name).second) {
      throw std::invalid_argument("duplicate attribute name '" + a.name + "'");
    }
  }
}

std::int32_t CategoricalStats::code(const std::string& label) const {
  auto it = codeByLabel.find(label);
  return it == codeByLabel.end() ? -1 : it->second;
}

void validateQuery(const BoxQuery& q) {
  if (q.box.lo.size() != q.box.hi.size()) {
    throw std::invalid_argument("query bounds have mismatched dimensions");
  }
  if ((q.box.lo > q.box.hi).any()) {
    throw std::invalid_argument("query has an interval with lo > hi");
  }
  if (q.weights) {
    if (q.weights->size() != q.box.lo.size()) {
      throw std::invalid_argument("query weights have mismatched dimensions");
    }
    if ((*q.weights < 0).any() || !(*q.weights > 0).any()) {
      throw std::invalid_argument("query weights must be nonnegative with one positive");
    }
  }
}

Dataset::Dataset(Schema schema, std::vector<Vec> numericColumns,
                 std::vector<std::vector<std::string>> categoricalColumns,
                 std::optional<Box> domainOverride)
    : schema_(std::move(schema)), numeric_(std::move(numericColumns)) {
  schema_.validate();
  if (static_cast<Index>(numeric_.size()) != schema_.numericCount() ||
      static_cast<Index>(categoricalColumns.size()) != schema_.categoricalCount()) {
    throw std::invalid_argument("column count does not match schema");
  }
  n_ = numeric_.empty() ? (categoricalColumns.empty() ? 0 : static_cast<Index>(categoricalColumns[0].size()))
                        : numeric_[0].size();
  if (n_ < 1) throw std::invalid_argument("dataset has no tuples");
  for (const auto& col : numeric_) {
    if (col.size() != n_) throw std::invalid_argument("numeric columns have unequal lengths");
    if (!col.isFinite().all()) throw std::invalid_argument("numeric column contains a non-finite value");
  }
  for (const auto& col : categoricalColumns) {
    if (static_cast<Index>(col.size()) != n_) {
      throw std::invalid_argument("categorical columns have unequal lengths");
    }
  }

  const Index d = static_cast<Index>(numeric_.size());
  if (domainOverride) {
    if (domainOverride->dims() != d) throw std::invalid_argument("domain has wrong dimensionality");
    if ((domainOverride->lo >= domainOverride->hi).any()) {
      throw std::invalid_argument("domain bounds must satisfy lo < hi");
    }
    domain_ = *domainOverride;
    for (Index i = 0; i < d; ++i) {
      if (numeric_[i].minCoeff() < domain_.lo(i) || numeric_[i].maxCoeff() > domain_.hi(i)) {
        throw std::invalid_argument("dimension " + schema_.attributes[i].name +
                                    " has values outside the declared domain");
      }
    }
  } else {
    domain_.lo = Vec(d);
    domain_.hi = Vec(d);
    for (Index i = 0; i < d; ++i) {
      double lo = numeric_[i].minCoeff();
      double hi = numeric_[i].maxCoeff();
      if (lo == hi) {  // keep lo < hi for constant columns
        lo -= 0.5;
        hi += 0.5;
      }
      domain_.lo(i) = lo;
      domain_.hi(i) = hi;
    }
  }

  cat_.resize(categoricalColumns.size());
  stats_.reserve(categoricalColumns.size());
  for (std::size_t c = 0; c < categoricalColumns.size(); ++c) {
    stats_.push_back(buildStats(categoricalColumns[c], cat_[c]));
  }
}

Index Dataset::numericIndexOf(const std::string& name) const {
  Index idx = 0;
  for (const auto& a : schema_.attributes) {
    if (a.kind != AttrKind::Numeric) continue;
    if (a.name == name) return idx;
    ++idx;
  }
  return -1;
}

Index Dataset::catIndexOf(const std::string& name) const {
  Index idx = 0;
  for (const auto& a : schema_.attributes) {
    if (a.kind != AttrKind::Categorical) continue;
    if (a.name == name) return idx;
    ++idx;
  }
  return -1;
}

Vec Dataset::point(Index row) const {
  Vec p(numericDims());
  for (Index i = 0; i < numericDims(); ++i) p(i) = numeric_[i](row);
  return p;
}

const CategoricalStats& categoricalStats(const Dataset& ds, const std::string& attribute) {
  Index idx = ds.catIndexOf(attribute);
  if (idx < 0) {
    if (ds.numericIndexOf(attribute) >= 0) {
      throw std::invalid_argument("attribute '" + attribute + "' is numeric, not categorical");
    }
    throw std::invalid_argument("unknown attribute '" + attribute + "'");
  }
  return ds.catStats(idx);
}

Manifest readManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open manifest '" + path + "'");
  Manifest m;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    stripTrailingCr(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("manifest '" + path + "' line " + std::to_string(lineNo) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key.rfind("kind.", 0) == 0) {
      std::string name = key.substr(5);
      if (value == "numeric") {
        m.kinds[name] = AttrKind::Numeric;
      } else if (value == "categorical") {
        m.kinds[name] = AttrKind::Categorical;
      } else {
        fail("manifest '" + path + "' line " + std::to_string(lineNo) + ": unknown kind '" + value + "'");
      }
    } else if (key.rfind("lo.", 0) == 0) {
      m.lo[key.substr(3)] = parseDouble(value);
    } else if (key.rfind("hi.", 0) == 0) {
      m.hi[key.substr(3)] = parseDouble(value);
    } else {
      m.extra[key] = value;
    }
  }
  return m;
}

void writeManifest(const Dataset& ds, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(path);
  if (!out) fail("cannot write manifest '" + path + "'");
  Index dim = 0;
  for (const auto& a : ds.schema().attributes) {
    out << "kind." << a.name << '='
        << (a.kind == AttrKind::Numeric ? "numeric" : "categorical") << '\n';
    if (a.kind == AttrKind::Numeric) {
      out << "lo." << a.name << '=' << formatDouble(ds.domain().lo(dim)) << '\n';
      out << "hi." << a.name << '=' << formatDouble(ds.domain().hi(dim)) << '\n';
      ++dim;
    }
  }
  for (const auto& [k, v] : extra) out << k << '=' << v << '\n';
  if (!out) fail("failed writing manifest '" + path + "'");
}

namespace {

struct ParsedCsv {
  std::vector<Vec> numeric;
  std::vector<std::vector<std::string>> categorical;
};

ParsedCsv parseCsv(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail("empty file '" + path + "'");
  stripTrailingCr(line);

  auto header = splitCsvLine(line);
  if (header.size() != schema.attributes.size()) {
    fail("'" + path + "': header has " + std::to_string(header.size()) + " columns, schema expects " +
         std::to_string(schema.attributes.size()));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != schema.attributes[i].name) {
      fail("'" + path + "': header column " + std::to_string(i + 1) + " is '" + header[i] +
           "', schema expects '" + schema.attributes[i].name + "'");
    }
  }

  std::vector<std::vector<double>> numeric(schema.numericCount());
  std::vector<std::vector<std::string>> categorical(schema.categoricalCount());

  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    stripTrailingCr(line);
    if (line.empty()) continue;
    auto cells = splitCsvLine(line);
    if (cells.size() != schema.attributes.size()) {
      fail("'" + path + "' row " + std::to_string(row) + ": expected " +
           std::to_string(schema.attributes.size()) + " cells, got " + std::to_string(cells.size()));
    }
    Index numIdx = 0, catIdx = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& attr = schema.attributes[c];
      if (cells[c].empty()) {
        fail("'" + path + "' row " + std::to_string(row) + ", column '" + attr.name +
             "': missing value");
      }
      if (attr.kind == AttrKind::Numeric) {
        double v = 0.0;
        const char* first = cells[c].data();
        const char* last = first + cells[c].size();
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{} || res.ptr != last) {
          fail("'" + path + "' row " + std::to_string(row) + ", column '" + attr.name +
               "': cannot parse '" + cells[c] + "' as a number");
        }
        numeric[numIdx++].push_back(v);
      } else {
        categorical[catIdx++].push_back(cells[c]);
      }
    }
  }
  if (row == 0) fail("'" + path + "' has a header but no rows");

  ParsedCsv out;
  out.numeric.reserve(numeric.size());
  for (auto& col : numeric) {
    out.numeric.emplace_back(Eigen::Map<const Vec>(col.data(), static_cast<Index>(col.size())));
  }
  out.categorical = std::move(categorical);
  return out;
}

}  // namespace

Dataset loadCsv(const std::string& path, const Schema& schema, std::optional<Box> domainOverride) {
  schema.validate();
  auto parsed = parseCsv(path, schema);
  return Dataset(schema, std::move(parsed.numeric), std::move(parsed.categorical),
                 std::move(domainOverride));
}

Dataset loadCsvWithManifest(const std::string& csvPath, const std::string& manifestPath) {
  Manifest manifest = readManifest(manifestPath);

  std::ifstream in(csvPath);
  if (!in) fail("cannot open '" + csvPath + "'");
  std::string headerLine;
  if (!std::getline(in, headerLine)) fail("empty file '" + csvPath + "'");
  stripTrailingCr(headerLine);
  in.close();

  Schema schema;
  for (const auto& name : splitCsvLine(headerLine)) {
    auto it = manifest.kinds.find(name);
    AttrKind kind = it == manifest.kinds.end() ? AttrKind::Numeric : it->second;
    schema.attributes.push_back({name, kind});
  }
  schema.validate();

  auto parsed = parseCsv(csvPath, schema);

  // Bounds from the manifest where declared, data min/max elsewhere.
  const Index d = schema.numericCount();
  std::optional<Box> domain;
  if (!manifest.lo.empty() || !manifest.hi.empty()) {
    Box b{Vec(d), Vec(d)};
    Index dim = 0;
    for (const auto& a : schema.attributes) {
      if (a.kind != AttrKind::Numeric) continue;
      auto lo = manifest.lo.find(a.name);
      auto hi = manifest.hi.find(a.name);
      b.lo(dim) = lo != manifest.lo.end() ? lo->second : parsed.numeric[dim].minCoeff();
      b.hi(dim) = hi != manifest.hi.end() ? hi->second : parsed.numeric[dim].maxCoeff();
      ++dim;
    }
    domain = b;
  }
  return Dataset(schema, std::move(parsed.numeric), std::move(parsed.categorical), std::move(domain));
}

Dataset loadCsvAllNumeric(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::string headerLine;
  if (!std::getline(in, headerLine)) fail("empty file '" + path + "'");
  stripTrailingCr(headerLine);
  in.close();

  Schema schema;
  for (const auto& name : splitCsvLine(headerLine)) schema.attributes.push_back({name, AttrKind::Numeric});
  return loadCsv(path, schema);
}

void writeCsv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write '" + path + "'");

  std::string buf;
  buf.reserve(1 << 20);
  const auto& attrs = ds.schema().attributes;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) buf += ',';
    buf += attrs[i].name;
  }
  buf += '\n';

  for (Index row = 0; row < ds.n(); ++row) {
    Index numIdx = 0, catIdx = 0;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i) buf += ',';
      if (attrs[i].kind == AttrKind::Numeric) {
        buf += formatDouble(ds.numericColumn(numIdx++)(row));
      } else {
        const auto& stats = ds.catStats(catIdx);
        buf += stats.labels[static_cast<std::size_t>(ds.catColumn(catIdx)[row])];
        ++catIdx;
      }
    }
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail("failed writing '" + path + "'");
}

}  // namespace sauna
