#ifndef IPDP_APP_HPP_
#define IPDP_APP_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ipdp/adwin.hpp"
#include "ipdp/batch_pdp.hpp"
#include "ipdp/explainer.hpp"
#include "ipdp/model.hpp"
#include "ipdp/streams.hpp"

namespace ipdp {

struct SourceSpec {
  std::string type = "hyperplane";  // hyperplane | gaussian | csv
  std::optional<std::int64_t> n;   // required for generators
  // hyperplane
  std::int64_t switch_at = 20000;
  HyperplaneConcept concept_a = HyperplaneConcept::Initial();
  HyperplaneConcept concept_b = HyperplaneConcept::Drifted();
  // gaussian
  std::vector<std::string> features = {"x1", "x2"};
  double mean = 0.0;
  double stddev = 1.0;
  // csv
  std::string path;
  std::string target;
  std::vector<std::string> types;
};

struct ModelSpec {
  std::string type = "sgd_logistic";  // sgd_logistic | sgd_linear | constant | linear
  double learning_rate = LinearSgdModel::kDefaultLearningRate;
  double value = 0.0;                     // constant
  std::map<std::string, double> weights;  // linear, and initial SGD weights
  double bias = 0.0;
  bool train = true;       // false freezes SGD models during a run
  std::string train_path;  // batch-pdp: CSV used to fit SGD models offline
  std::string train_target;
  int epochs = 1;
};

struct RunConfig {
  SourceSpec source;
  ModelSpec model;
  std::vector<std::string> features;  // empty: every feature of the source
  PdpConfig pdp;
  AdwinConfig detector;
  std::int64_t cadence = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool explain_first = true;
  // batch-pdp
  std::string batch_feature;
  Eigen::Index batch_grid_size = 20;
  std::optional<SourceSpec> batch_data;

  void Validate() const;
};

// Throws ConfigError on unknown keys or ill-typed values.
RunConfig ParseRunConfig(const nlohmann::json& j);
RunConfig LoadRunConfig(const std::string& path);

std::unique_ptr<RecordSource> MakeSource(const SourceSpec& spec, std::uint64_t seed);
std::unique_ptr<IncrementalModel> MakeModel(const ModelSpec& spec,
                                            const SchemaPtr& schema);

nlohmann::json FrameToJson(const ExplanationFrame& frame);
nlohmann::json EventToJson(const DriftEvent& event);

struct PrequentialStats {
  std::int64_t steps = 0;
  std::int64_t frames = 0;
  std::size_t max_explainer_state = 0;  // largest per-feature state_size()
};

// Drives the test-then-train loop: for each record, frames are produced from
// the current model and then the model learns (or the reverse when
// explain_first is false). Stops after `limit` records or when the source is
// exhausted.
PrequentialStats RunPrequential(
    RecordSource& source, IncrementalModel& model, MultiExplainer& explainer,
    std::optional<std::int64_t> limit, bool explain_first,
    const std::function<void(const std::vector<ExplanationFrame>&)>& on_frames);

// Subcommands. Each writes its primary output to `out` and diagnostics to
// `err`, returning the process exit code.
int CmdExplain(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdDetect(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdBatchPdp(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdGenerate(const RunConfig& config, std::ostream& out, std::ostream& err);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kIngestion = 3;
inline constexpr int kRuntime = 4;
}  // namespace exit_code

// Full command line entry point.
int RunCli(int argc, const char* const* argv);

}  // namespace ipdp

#endif  // IPDP_APP_HPP_
