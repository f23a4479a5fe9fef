#include "ipdp/streams.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "ipdp/error.hpp"

namespace ipdp {

namespace {

std::mt19937_64 SubEngine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> SplitRow(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(Trim(line.substr(start)));
      return cells;
    }
    cells.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> ParseNumber(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

HyperplaneConcept HyperplaneConcept::Drifted() {
  HyperplaneConcept c;
  c.mu1 = 200.0;
  c.mu2 = 100.0;
  c.sigma1_sq = 40.0;
  c.sigma2_sq = 20.0;
  c.beta1 = -0.5;
  c.beta2 = 1.0;
  return c;
}

void HyperplaneConcept::Validate() const {
  if (!(sigma1_sq > 0 && sigma2_sq > 0 && sigma_eps_sq >= 0)) {
    throw ConfigError("hyperplane variances must be positive");
  }
  if (!(tau > 0 && tau < 1)) throw ConfigError("hyperplane threshold must lie in (0, 1)");
}

double HyperplaneConcept::Label(double x1, double x2, double noise) const {
  const double z = beta1 * x1 + beta2 * x2 + noise;
  return Sigmoid(z) >= tau ? 1.0 : 0.0;
}

HyperplaneGenerator::HyperplaneGenerator(HyperplaneConcept concept_params,
                                         std::uint64_t seed)
    : schema_(Schema::Make({"x1", "x2"})),
      x1_engine_(SubEngine(seed, 1)),
      x2_engine_(SubEngine(seed, 2)),
      noise_engine_(SubEngine(seed, 3)) {
  SetConcept(concept_params);
}

void HyperplaneGenerator::SetConcept(const HyperplaneConcept& c) {
  c.Validate();
  concept_ = c;
}

StreamRecord HyperplaneGenerator::Draw() {
  const double x1 = concept_.mu1 + std::sqrt(concept_.sigma1_sq) * x1_normal_(x1_engine_);
  const double x2 = concept_.mu2 + std::sqrt(concept_.sigma2_sq) * x2_normal_(x2_engine_);
  last_noise_ =
      concept_.mu_eps + std::sqrt(concept_.sigma_eps_sq) * noise_normal_(noise_engine_);
  Eigen::VectorXd values(2);
  values << x1, x2;
  return {FeatureVector(schema_, std::move(values)),
          concept_.Label(x1, x2, last_noise_), ++t_};
}

DriftSchedule::DriftSchedule(HyperplaneConcept concept_a,
                             HyperplaneConcept concept_b,
                             std::int64_t switch_at, std::uint64_t seed)
    : concept_a_(concept_a),
      concept_b_(concept_b),
      switch_at_(switch_at),
      generator_(concept_a, seed) {
  concept_b_.Validate();
  if (switch_at_ < 1) throw ConfigError("switch_at must be >= 1");
}

std::optional<StreamRecord> DriftSchedule::Next() {
  ++t_;
  if (t_ == switch_at_) generator_.SetConcept(concept_b_);
  StreamRecord record = generator_.Draw();
  record.t = t_;
  return record;
}

GaussianSource::GaussianSource(std::vector<std::string> features, double mean,
                               double stddev, std::uint64_t seed)
    : schema_(Schema::Make(std::move(features))),
      mean_(mean),
      stddev_(stddev),
      engine_(SubEngine(seed, 0)) {
  if (!(stddev_ > 0) || !std::isfinite(mean_)) {
    throw ConfigError("gaussian source needs finite mean and positive stddev");
  }
}

std::optional<StreamRecord> GaussianSource::Next() {
  Eigen::VectorXd values(schema_->size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values[i] = mean_ + stddev_ * normal_(engine_);
  }
  return StreamRecord{FeatureVector(schema_, std::move(values)), 0.0, ++t_};
}

std::pair<std::string, ColumnType> ParseTypeSpec(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ConfigError("type spec '" + std::string(spec) + "' is not name:type");
  }
  std::string name(Trim(spec.substr(0, colon)));
  std::string_view type = Trim(spec.substr(colon + 1));
  ColumnType column;
  if (type == "numeric") return {name, column};

  constexpr std::string_view kBinary = "binary(";
  if (type.substr(0, kBinary.size()) != kBinary || type.back() != ')') {
    throw ConfigError("unknown column type in '" + std::string(spec) + "'");
  }
  column.kind = ColumnType::Kind::kBinary;
  std::string_view body = type.substr(kBinary.size(), type.size() - kBinary.size() - 1);
  for (std::string_view entry : SplitRow(body)) {
    const std::size_t eq = entry.find('=');
    const auto code = eq == std::string_view::npos
                          ? std::nullopt
                          : ParseNumber(Trim(entry.substr(eq + 1)));
    if (!code || (*code != 0.0 && *code != 1.0)) {
      throw ConfigError("binary mapping entry '" + std::string(entry) +
                        "' must look like value=0 or value=1");
    }
    column.mapping[std::string(Trim(entry.substr(0, eq)))] = *code;
  }
  if (column.mapping.empty()) {
    throw ConfigError("binary column '" + name + "' has an empty mapping");
  }
  return {name, column};
}

TypeMap ParseTypeMap(const std::vector<std::string>& specs) {
  TypeMap types;
  for (const auto& spec : specs) {
    auto [name, column] = ParseTypeSpec(spec);
    types[name] = std::move(column);
  }
  return types;
}

CsvSource::CsvSource(const std::filesystem::path& path, std::string target_column,
                     TypeMap types)
    : in_(path), target_(std::move(target_column)), types_(std::move(types)) {
  if (!in_) throw IngestionError("cannot open '" + path.string() + "'", 0, "");
  std::string line;
  if (!std::getline(in_, line)) {
    throw IngestionError("'" + path.string() + "' has no header row", 1, "");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> features;
  for (std::string_view cell : SplitRow(line)) {
    header_.emplace_back(cell);
  }
  for (std::size_t c = 0; c < header_.size(); ++c) {
    auto it = types_.find(header_[c]);
    column_types_.push_back(it == types_.end() ? ColumnType{} : it->second);
    if (!target_.empty() && header_[c] == target_) {
      target_index_ = c;
      feature_slot_.push_back(-1);
    } else {
      feature_slot_.push_back(static_cast<Eigen::Index>(features.size()));
      features.push_back(header_[c]);
    }
  }
  if (!target_.empty() && !target_index_) {
    throw IngestionError("target column '" + target_ + "' is missing", 1, target_);
  }
  for (const auto& [name, _] : types_) {
    bool found = false;
    for (const auto& h : header_) found = found || h == name;
    if (!found) throw IngestionError("typed column '" + name + "' is missing", 1, name);
  }
  try {
    schema_ = Schema::Make(std::move(features));
  } catch (const ConfigError& e) {
    throw IngestionError(std::string("bad header: ") + e.what(), 1, "");
  }
}

double CsvSource::ParseCell(std::string_view cell, std::size_t column) const {
  const ColumnType& type = column_types_[column];
  if (type.kind == ColumnType::Kind::kBinary) {
    auto it = type.mapping.find(std::string(cell));
    if (it == type.mapping.end()) {
      throw IngestionError("row " + std::to_string(line_) + ", column '" +
                               header_[column] + "': unmapped value '" +
                               std::string(cell) + "'",
                           line_, header_[column]);
    }
    return it->second;
  }
  if (auto value = ParseNumber(cell)) return *value;
  throw IngestionError("row " + std::to_string(line_) + ", column '" +
                           header_[column] + "': cannot parse '" +
                           std::string(cell) + "' as a number",
                       line_, header_[column]);
}

std::optional<StreamRecord> CsvSource::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (Trim(line).empty()) continue;
    const auto cells = SplitRow(line);
    if (cells.size() != header_.size()) {
      throw IngestionError("row " + std::to_string(line_) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header_.size()),
                           line_, "");
    }
    Eigen::VectorXd values(schema_->size());
    double y = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = ParseCell(cells[c], c);
      if (feature_slot_[c] < 0) {
        y = v;
      } else {
        values[feature_slot_[c]] = v;
      }
    }
    return StreamRecord{FeatureVector(schema_, std::move(values)), y, ++t_};
  }
  return std::nullopt;
}

std::vector<StreamRecord> ReadAll(RecordSource& source,
                                  std::optional<std::int64_t> limit) {
  std::vector<StreamRecord> records;
  while (!limit || static_cast<std::int64_t>(records.size()) < *limit) {
    auto record = source.Next();
    if (!record) break;
    records.push_back(std::move(*record));
  }
  return records;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const SchemaPtr& schema,
                     std::string target_column)
    : out_(out), schema_(schema) {
  for (const auto& name : schema_->names()) out_ << name << ',';
  out_ << target_column << '\n';
}

void CsvWriter::Write(const StreamRecord& record) {
  if (!SameSchema(schema_, record.x.schema())) {
    throw SchemaMismatchError("record schema differs from the CSV header");
  }
  for (Eigen::Index i = 0; i < record.x.size(); ++i) {
    out_ << FormatDouble(record.x[i]) << ',';
  }
  out_ << FormatDouble(record.y) << '\n';
}

}  // namespace ipdp
