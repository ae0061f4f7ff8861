#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sauna/core.hpp"

namespace sauna {

enum class AttrKind { Numeric, Categorical };

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
};

struct Schema {
  std::vector<Attribute> attributes;

  Index numericCount() const;
  Index categoricalCount() const;
  /// Throws std::invalid_argument on empty, duplicate or missing names.
  void validate() const;
};

/// Frequency table of one categorical column. Codes are dense integers
/// assigned in first-appearance order.
struct CategoricalStats {
  std::vector<std::string> labels;  // code -> label
  std::vector<Index> freq;          // code -> occurrences
  Index total = 0;                  // tuple count n

  std::unordered_map<std::string, std::int32_t> codeByLabel;

  std::int32_t code(const std::string& label) const;  // -1 when unknown
  Index distinct() const { return static_cast<Index>(labels.size()); }
};

/// Conjunctive range query: one closed interval per numeric dimension plus
/// optional categorical equality predicates. A zero-width interval expresses
/// a point constraint on that dimension.
struct BoxQuery {
  Box box;
  std::optional<Vec> weights;  // per-dimension, >= 0; metric construction input
  Norm norm = Norm::L2;
  std::vector<std::pair<std::string, std::string>> catEquals;  // (attribute, value)

  Index dims() const { return box.dims(); }
};

void validateQuery(const BoxQuery& q);

/// Immutable columnar table. Numeric values are 64-bit reals; categorical
/// values are interned to dense codes at construction, with frequency stats
/// computed once. Safe to share across threads after construction.
class Dataset {
 public:
  /// numericColumns / categoricalColumns follow the schema's numeric and
  /// categorical sub-orders. The domain defaults to per-dimension data
  /// min/max (degenerate dimensions widened by +-0.5); an override must
  /// contain the data.
  Dataset(Schema schema, std::vector<Vec> numericColumns,
          std::vector<std::vector<std::string>> categoricalColumns,
          std::optional<Box> domainOverride = std::nullopt);

  const Schema& schema() const { return schema_; }
  const Box& domain() const { return domain_; }
  Index n() const { return n_; }
  Index numericDims() const { return static_cast<Index>(numeric_.size()); }

  const Vec& numericColumn(Index dim) const { return numeric_.at(dim); }
  const std::vector<std::int32_t>& catColumn(Index c) const { return cat_.at(c); }
  const CategoricalStats& catStats(Index c) const { return stats_.at(c); }

  /// Index into the numeric (categorical) sub-order; -1 when absent.
  Index numericIndexOf(const std::string& name) const;
  Index catIndexOf(const std::string& name) const;

  Vec point(Index row) const;  // numeric coordinates of one tuple

 private:
  Schema schema_;
  Box domain_;
  std::vector<Vec> numeric_;
  std::vector<std::vector<std::int32_t>> cat_;
  std::vector<CategoricalStats> stats_;
  Index n_ = 0;
};

/// Exact frequency map of a categorical attribute.
/// Throws std::invalid_argument for unknown or numeric attributes.
const CategoricalStats& categoricalStats(const Dataset& ds, const std::string& attribute);

/// Per-attribute domain bounds and kinds read from a manifest
/// (key=value lines: kind.<name>, lo.<name>, hi.<name>; '#' comments).
struct Manifest {
  std::map<std::string, AttrKind> kinds;
  std::map<std::string, double> lo;
  std::map<std::string, double> hi;
  std::map<std::string, std::string> extra;  // unrecognized keys, preserved
};

Manifest readManifest(const std::string& path);
void writeManifest(const Dataset& ds, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Loads a comma-separated file whose header row matches the schema names in
/// order. Parse failures name the offending row and column; missing cells are
/// rejected. Numeric parsing uses '.' as the decimal point regardless of locale.
Dataset loadCsv(const std::string& path, const Schema& schema,
                std::optional<Box> domainOverride = std::nullopt);

/// Schema from the CSV header: kinds and bounds taken from the manifest,
/// attributes absent from it default to numeric with data-derived bounds.
Dataset loadCsvWithManifest(const std::string& csvPath, const std::string& manifestPath);

/// Header row from the CSV; every attribute numeric.
Dataset loadCsvAllNumeric(const std::string& path);

void writeCsv(const Dataset& ds, const std::string& path);

}  // namespace sauna
