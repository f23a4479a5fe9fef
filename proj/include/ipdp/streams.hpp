#ifndef IPDP_STREAMS_HPP_
#define IPDP_STREAMS_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ipdp/model.hpp"

namespace ipdp {

// Anything that yields StreamRecords in order. Generators never run dry.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<StreamRecord> Next() = 0;
  virtual const SchemaPtr& schema() const = 0;
};

// Two Gaussian features and a thresholded logistic label:
//   Z = beta1 * X1 + beta2 * X2 + eps,  y = 1 iff sigmoid(Z) >= tau.
struct HyperplaneConcept {
  double mu1 = 100.0;
  double mu2 = 200.0;
  double sigma1_sq = 20.0;
  double sigma2_sq = 40.0;
  double beta1 = 1.0;
  double beta2 = -0.5;
  double mu_eps = 0.0;
  double sigma_eps_sq = 1.0;
  double tau = 0.1;

  // Concept before the drift: mu = (100, 200), var = (20, 40), beta = (1, -0.5).
  static HyperplaneConcept Initial() { return {}; }
  // Concept after the drift: mu = (200, 100), var = (40, 20), beta = (-0.5, 1).
  static HyperplaneConcept Drifted();

  void Validate() const;
  double Label(double x1, double x2, double noise) const;
};

// iid draws from one HyperplaneConcept. Each random variable has its own
// engine derived from the seed, so X1, X2 and the noise can be replayed
// independently and concepts can be swapped without disturbing the draws.
class HyperplaneGenerator : public RecordSource {
 public:
  HyperplaneGenerator(HyperplaneConcept concept_params, std::uint64_t seed);

  std::optional<StreamRecord> Next() override { return Draw(); }
  StreamRecord Draw();
  const SchemaPtr& schema() const override { return schema_; }

  const HyperplaneConcept& current() const { return concept_; }
  void SetConcept(const HyperplaneConcept& c);
  double last_noise() const { return last_noise_; }

 private:
  HyperplaneConcept concept_;
  SchemaPtr schema_;
  std::mt19937_64 x1_engine_;
  std::mt19937_64 x2_engine_;
  std::mt19937_64 noise_engine_;
  std::normal_distribution<double> x1_normal_;
  std::normal_distribution<double> x2_normal_;
  std::normal_distribution<double> noise_normal_;
  double last_noise_ = 0.0;
  std::int64_t t_ = 0;
};

// Sudden drift: records with t < switch_at come from concept_a, the rest
// from concept_b. Record times start at 1.
class DriftSchedule : public RecordSource {
 public:
  DriftSchedule(HyperplaneConcept concept_a, HyperplaneConcept concept_b,
                std::int64_t switch_at, std::uint64_t seed);

  std::optional<StreamRecord> Next() override;
  const SchemaPtr& schema() const override { return generator_.schema(); }

  const HyperplaneConcept& concept_a() const { return concept_a_; }
  const HyperplaneConcept& concept_b() const { return concept_b_; }
  std::int64_t switch_at() const { return switch_at_; }
  const HyperplaneGenerator& generator() const { return generator_; }

 private:
  HyperplaneConcept concept_a_;
  HyperplaneConcept concept_b_;
  std::int64_t switch_at_;
  HyperplaneGenerator generator_;
  std::int64_t t_ = 0;
};

// iid N(mean, stddev^2) features with y = 0; a static test bed.
class GaussianSource : public RecordSource {
 public:
  GaussianSource(std::vector<std::string> features, double mean, double stddev,
                 std::uint64_t seed);

  std::optional<StreamRecord> Next() override;
  const SchemaPtr& schema() const override { return schema_; }

 private:
  SchemaPtr schema_;
  double mean_;
  double stddev_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::int64_t t_ = 0;
};

// How a CSV column is turned into a number.
struct ColumnType {
  enum class Kind { kNumeric, kBinary };
  Kind kind = Kind::kNumeric;
  std::map<std::string, double> mapping;  // kBinary: raw cell -> 0/1
};

using TypeMap = std::map<std::string, ColumnType, std::less<>>;

// Parses `name:numeric` or `name:binary(A=0,B=1)`. Throws ConfigError.
std::pair<std::string, ColumnType> ParseTypeSpec(std::string_view spec);
TypeMap ParseTypeMap(const std::vector<std::string>& specs);

// Reads a comma-separated file with a header row. Columns without an entry in
// the type map are numeric. Every column except the target is a feature; with
// an empty target name all columns are features and y is 0.
class CsvSource : public RecordSource {
 public:
  CsvSource(const std::filesystem::path& path, std::string target_column,
            TypeMap types = {});

  std::optional<StreamRecord> Next() override;
  const SchemaPtr& schema() const override { return schema_; }
  const std::string& target_column() const { return target_; }

 private:
  double ParseCell(std::string_view cell, std::size_t column) const;

  std::ifstream in_;
  std::string target_;
  TypeMap types_;
  std::vector<std::string> header_;
  std::vector<ColumnType> column_types_;
  std::vector<Eigen::Index> feature_slot_;  // -1 for the target column
  std::optional<std::size_t> target_index_;
  SchemaPtr schema_;
  std::size_t line_ = 1;
  std::int64_t t_ = 0;
};

std::vector<StreamRecord> ReadAll(RecordSource& source,
                                  std::optional<std::int64_t> limit = std::nullopt);

// Writes the header and records so that CsvSource reads them back exactly.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const SchemaPtr& schema, std::string target_column);
  void Write(const StreamRecord& record);

 private:
  std::ostream& out_;
  SchemaPtr schema_;
};

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace ipdp

#endif  // IPDP_STREAMS_HPP_
