#include "ipdp/app.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "ipdp/error.hpp"

namespace ipdp {

using nlohmann::json;

namespace {

void CheckKeys(const json& j, std::initializer_list<std::string_view> allowed,
               std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

HyperplaneConcept ParseConcept(const json& j, HyperplaneConcept c) {
  CheckKeys(j,
            {"mu1", "mu2", "sigma1_sq", "sigma2_sq", "beta1", "beta2", "mu_eps",
             "sigma_eps_sq", "tau"},
            "hyperplane concept");
  Read(j, "mu1", c.mu1);
  Read(j, "mu2", c.mu2);
  Read(j, "sigma1_sq", c.sigma1_sq);
  Read(j, "sigma2_sq", c.sigma2_sq);
  Read(j, "beta1", c.beta1);
  Read(j, "beta2", c.beta2);
  Read(j, "mu_eps", c.mu_eps);
  Read(j, "sigma_eps_sq", c.sigma_eps_sq);
  Read(j, "tau", c.tau);
  c.Validate();
  return c;
}

SourceSpec ParseSource(const json& j) {
  CheckKeys(j,
            {"type", "n", "switch_at", "concept_a", "concept_b", "features", "mean",
             "stddev", "path", "target", "types"},
            "source");
  SourceSpec s;
  Read(j, "type", s.type);
  if (j.contains("n")) s.n = j.at("n").get<std::int64_t>();
  Read(j, "switch_at", s.switch_at);
  if (j.contains("concept_a")) s.concept_a = ParseConcept(j.at("concept_a"), s.concept_a);
  if (j.contains("concept_b")) s.concept_b = ParseConcept(j.at("concept_b"), s.concept_b);
  Read(j, "features", s.features);
  Read(j, "mean", s.mean);
  Read(j, "stddev", s.stddev);
  Read(j, "path", s.path);
  Read(j, "target", s.target);
  Read(j, "types", s.types);
  return s;
}

ModelSpec ParseModel(const json& j) {
  CheckKeys(j,
            {"type", "learning_rate", "value", "weights", "bias", "train",
             "train_path", "train_target", "epochs"},
            "model");
  ModelSpec m;
  Read(j, "type", m.type);
  Read(j, "learning_rate", m.learning_rate);
  Read(j, "value", m.value);
  Read(j, "weights", m.weights);
  Read(j, "bias", m.bias);
  Read(j, "train", m.train);
  Read(j, "train_path", m.train_path);
  Read(j, "train_target", m.train_target);
  Read(j, "epochs", m.epochs);
  return m;
}

RangeStrategy ParseRange(const json& j) {
  CheckKeys(j,
            {"type", "window", "q_low", "q_high", "capacity", "entrance_probability",
             "policy"},
            "pdp.range");
  const std::string type = j.value("type", std::string("quantile"));
  if (type == "minmax") {
    MinMaxRange r;
    Read(j, "window", r.window);
    return r;
  }
  if (type != "quantile") throw ConfigError("unknown range type '" + type + "'");
  QuantileRange q;
  Read(j, "q_low", q.q_low);
  Read(j, "q_high", q.q_high);
  Read(j, "capacity", q.capacity);
  Read(j, "entrance_probability", q.entrance_probability);
  const std::string policy = j.value("policy", std::string("oldest"));
  if (policy == "uniform") {
    q.policy = VictimPolicy::kUniform;
  } else if (policy != "oldest") {
    throw ConfigError("unknown reservoir policy '" + policy + "'");
  }
  return q;
}

PdpConfig ParsePdp(const json& j) {
  CheckKeys(j, {"alpha", "grid_size", "range"}, "pdp");
  PdpConfig p;
  Read(j, "alpha", p.alpha);
  Read(j, "grid_size", p.grid_size);
  if (j.contains("range")) p.range = ParseRange(j.at("range"));
  return p;
}

AdwinConfig ParseDetector(const json& j) {
  CheckKeys(j, {"delta", "max_buckets", "min_sub_window", "variance_aware", "clock"}, "detector");
  AdwinConfig a;
  Read(j, "delta", a.delta);
  Read(j, "max_buckets", a.max_buckets);
  Read(j, "min_sub_window", a.min_sub_window);
  Read(j, "variance_aware", a.variance_aware);
  Read(j, "clock", a.clock);
  return a;
}

bool IsGenerator(const SourceSpec& s) { return s.type != "csv"; }

std::vector<std::string> ResolveFeatures(const RunConfig& config,
                                         const SchemaPtr& schema) {
  if (config.features.empty()) return schema->names();
  for (const auto& f : config.features) {
    if (!schema->Find(f)) {
      throw ConfigError("feature '" + f + "' is not part of the source schema");
    }
  }
  return config.features;
}

// Maps library exceptions onto exit codes.
int Guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return exit_code::kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const IngestionError& e) {
    err << "ingestion error: " << e.what() << '\n';
    return exit_code::kIngestion;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return exit_code::kRuntime;
  }
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void RunConfig::Validate() const {
  static const std::set<std::string> kSources = {"hyperplane", "gaussian", "csv"};
  if (!kSources.count(source.type)) {
    throw ConfigError("unknown source type '" + source.type + "'");
  }
  if (source.n && *source.n < 0) throw ConfigError("source.n must be >= 0");
  if (source.type == "csv" && source.path.empty()) {
    throw ConfigError("csv source needs a path");
  }
  static const std::set<std::string> kModels = {"sgd_logistic", "sgd_linear",
                                                "constant", "linear"};
  if (!kModels.count(model.type)) {
    throw ConfigError("unknown model type '" + model.type + "'");
  }
  if (model.epochs < 1) throw ConfigError("model.epochs must be >= 1");
  if (cadence < 1) throw ConfigError("cadence must be >= 1");
  pdp.Validate();
  detector.Validate();
  if (batch_grid_size < 2) throw ConfigError("batch grid size must be >= 2");
}

RunConfig ParseRunConfig(const json& j) {
  try {
    CheckKeys(j,
              {"source", "model", "features", "pdp", "detector", "cadence", "seed",
               "out", "order", "batch"},
              "config");
    RunConfig c;
    if (j.contains("source")) c.source = ParseSource(j.at("source"));
    if (j.contains("model")) c.model = ParseModel(j.at("model"));
    Read(j, "features", c.features);
    if (j.contains("pdp")) c.pdp = ParsePdp(j.at("pdp"));
    if (j.contains("detector")) c.detector = ParseDetector(j.at("detector"));
    Read(j, "cadence", c.cadence);
    Read(j, "seed", c.seed);
    Read(j, "out", c.out);
    const std::string order = j.value("order", std::string("explain_then_train"));
    if (order == "train_then_explain") {
      c.explain_first = false;
    } else if (order != "explain_then_train") {
      throw ConfigError("unknown order '" + order + "'");
    }
    if (j.contains("batch")) {
      const json& b = j.at("batch");
      CheckKeys(b, {"feature", "grid_size", "data"}, "batch");
      Read(b, "feature", c.batch_feature);
      Read(b, "grid_size", c.batch_grid_size);
      if (b.contains("data")) c.batch_data = ParseSource(b.at("data"));
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return ParseRunConfig(j);
}

std::unique_ptr<RecordSource> MakeSource(const SourceSpec& spec, std::uint64_t seed) {
  if (spec.type == "hyperplane") {
    return std::make_unique<DriftSchedule>(spec.concept_a, spec.concept_b,
                                           spec.switch_at, seed);
  }
  if (spec.type == "gaussian") {
    return std::make_unique<GaussianSource>(spec.features, spec.mean, spec.stddev,
                                            seed);
  }
  if (spec.type == "csv") {
    return std::make_unique<CsvSource>(spec.path, spec.target,
                                       ParseTypeMap(spec.types));
  }
  throw ConfigError("unknown source type '" + spec.type + "'");
}

std::unique_ptr<IncrementalModel> MakeModel(const ModelSpec& spec,
                                            const SchemaPtr& schema) {
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(schema->size());
  for (const auto& [name, w] : spec.weights) {
    const auto index = schema->Find(name);
    if (!index) throw ConfigError("model weight for unknown feature '" + name + "'");
    weights[*index] = w;
  }
  if (spec.type == "constant") {
    return std::make_unique<StaticModel>(StaticModel::Constant(spec.value));
  }
  if (spec.type == "linear") {
    return std::make_unique<StaticModel>(
        StaticModel::Linear(schema, std::move(weights), spec.bias));
  }
  std::unique_ptr<LinearSgdModel> model;
  if (spec.type == "sgd_logistic") {
    model = std::make_unique<SgdLogistic>(schema, spec.learning_rate);
  } else if (spec.type == "sgd_linear") {
    model = std::make_unique<SgdLinear>(schema, spec.learning_rate);
  } else {
    throw ConfigError("unknown model type '" + spec.type + "'");
  }
  model->SetParameters(std::move(weights), spec.bias);
  return model;
}

json FrameToJson(const ExplanationFrame& frame) {
  return json{{"t", frame.t},
              {"feature", frame.feature},
              {"grid", std::vector<double>(frame.grid.begin(), frame.grid.end())},
              {"estimates",
               std::vector<double>(frame.estimates.begin(), frame.estimates.end())},
              {"importance", frame.importance},
              {"eval_min", frame.eval_min},
              {"eval_max", frame.eval_max}};
}

json EventToJson(const DriftEvent& event) {
  return json{{"t", event.t}, {"feature", event.feature}, {"frame", FrameToJson(event.frame)}};
}

PrequentialStats RunPrequential(
    RecordSource& source, IncrementalModel& model, MultiExplainer& explainer,
    std::optional<std::int64_t> limit, bool explain_first,
    const std::function<void(const std::vector<ExplanationFrame>&)>& on_frames) {
  PrequentialStats stats;
  while (!limit || stats.steps < *limit) {
    auto record = source.Next();
    if (!record) break;
    if (!explain_first) model.LearnOne(record->x, record->y);
    auto frames = explainer.Observe(model, record->x);
    if (explain_first) model.LearnOne(record->x, record->y);
    ++stats.steps;
    stats.frames += static_cast<std::int64_t>(frames.size());
    for (const auto& e : explainer.explainers()) {
      stats.max_explainer_state = std::max(stats.max_explainer_state, e.state_size());
    }
    if (on_frames && !frames.empty()) on_frames(frames);
  }
  return stats;
}

namespace {

struct Session {
  std::unique_ptr<RecordSource> source;
  std::unique_ptr<IncrementalModel> model;
  std::unique_ptr<MultiExplainer> explainer;
  std::optional<std::int64_t> limit;
};

Session OpenSession(const RunConfig& config) {
  config.Validate();
  if (IsGenerator(config.source) && !config.source.n) {
    throw ConfigError("generator sources need source.n");
  }
  Session s;
  s.source = MakeSource(config.source, config.seed);
  s.limit = config.source.n;
  s.model = MakeModel(config.model, s.source->schema());
  if (!config.model.train) {
    s.model = std::make_unique<StaticModel>(
        [frozen = std::shared_ptr<IncrementalModel>(std::move(s.model))](
            const FeatureVector& x) { return frozen->Predict(x); });
  }
  PdpConfig pdp = config.pdp;
  pdp.seed = config.seed;
  s.explainer = std::make_unique<MultiExplainer>(
      ResolveFeatures(config, s.source->schema()), pdp);
  return s;
}

}  // namespace

int CmdExplain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    Session s = OpenSession(config);
    RunPrequential(*s.source, *s.model, *s.explainer, s.limit, config.explain_first,
                   [&](const std::vector<ExplanationFrame>& frames) {
                     for (const auto& f : frames) {
                       if (f.t % config.cadence == 0) out << FrameToJson(f).dump() << '\n';
                     }
                   });
    out.flush();
  });
}

int CmdDetect(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    Session s = OpenSession(config);
    ExplanationDriftMonitor monitor(config.detector);
    RunPrequential(*s.source, *s.model, *s.explainer, s.limit, config.explain_first,
                   [&](const std::vector<ExplanationFrame>& frames) {
                     for (const auto& f : frames) {
                       if (auto event = monitor.Observe(f)) {
                         out << EventToJson(*event).dump() << '\n';
                       }
                     }
                   });
    out.flush();
  });
}

int CmdBatchPdp(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    config.Validate();
    const SourceSpec& data_spec = config.batch_data ? *config.batch_data : config.source;
    if (IsGenerator(data_spec) && !data_spec.n) {
      throw ConfigError("generator data sources need n");
    }
    auto source = MakeSource(data_spec, config.seed);
    const auto records = ReadAll(*source, data_spec.n);
    if (records.empty()) throw IngestionError("data source yielded no rows", 0, "");
    std::vector<FeatureVector> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(r.x);
    const Dataset data = Dataset::FromRecords(rows);

    std::string feature = config.batch_feature;
    if (feature.empty()) {
      if (config.features.size() != 1) {
        throw ConfigError("batch-pdp needs exactly one feature (--feature)");
      }
      feature = config.features.front();
    }
    if (!data.schema()->Find(feature)) {
      throw ConfigError("feature '" + feature + "' is not part of the data schema");
    }

    auto model = MakeModel(config.model, data.schema());
    if (!config.model.train_path.empty()) {
      for (int epoch = 0; epoch < config.model.epochs; ++epoch) {
        CsvSource train(config.model.train_path, config.model.train_target,
                        ParseTypeMap(data_spec.types));
        if (!SameSchema(train.schema(), data.schema())) {
          throw ConfigError("training CSV columns differ from the data columns");
        }
        while (auto r = train.Next()) model->LearnOne(r->x, r->y);
      }
    }

    const Eigen::VectorXd grid = FeatureRangeGrid(data, feature, config.batch_grid_size);
    const Eigen::VectorXd curve = BatchPdp(*model, data, feature, grid);
    if (EndsWith(config.out, ".csv")) {
      out << "grid,estimate\n";
      for (Eigen::Index k = 0; k < grid.size(); ++k) {
        out << FormatDouble(grid[k]) << ',' << FormatDouble(curve[k]) << '\n';
      }
    } else {
      out << json{{"feature", feature},
                  {"grid", std::vector<double>(grid.begin(), grid.end())},
                  {"estimates", std::vector<double>(curve.begin(), curve.end())}}
                 .dump()
          << '\n';
    }
    out.flush();
  });
}

int CmdGenerate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    config.Validate();
    if (!IsGenerator(config.source)) throw ConfigError("generate needs a generator source");
    if (!config.source.n) throw ConfigError("generate needs source.n");
    auto source = MakeSource(config.source, config.seed);
    CsvWriter writer(out, source->schema(), "y");
    for (std::int64_t i = 0; i < *config.source.n; ++i) writer.Write(*source->Next());
    out.flush();
  });
}

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Incremental partial dependence explanations for data streams"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<std::int64_t> cadence;
  std::optional<double> alpha;
  std::optional<Eigen::Index> grid_size;
  std::string feature;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    cmd->add_option("--cadence", cadence, "emit every Nth frame");
    cmd->add_option("--alpha", alpha, "smoothing parameter");
    cmd->add_option("--grid-size", grid_size, "number of grid points");
  };
  auto* explain = app.add_subcommand("explain", "stream iPDP frames as JSON lines");
  auto* detect = app.add_subcommand("detect", "ADWIN drift events on importance");
  auto* batch = app.add_subcommand("batch-pdp", "batch partial dependence curve");
  auto* generate = app.add_subcommand("generate", "write a generator stream as CSV");
  for (auto* cmd : {explain, detect, batch, generate}) add_common(cmd);
  batch->add_option("--feature", feature, "feature to explain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kConfig;
  }

  RunConfig config;
  const int code = Guarded(std::cerr, [&] {
    if (!config_path.empty()) config = LoadRunConfig(config_path);
    if (seed) config.seed = *seed;
    if (!out_path.empty()) config.out = out_path;
    if (cadence) config.cadence = *cadence;
    if (alpha) config.pdp.alpha = *alpha;
    if (grid_size) {
      config.pdp.grid_size = *grid_size;
      config.batch_grid_size = *grid_size;
    }
    if (!feature.empty()) config.batch_feature = feature;
    config.Validate();
  });
  if (code != exit_code::kOk) return code;

  std::ofstream file;
  if (!config.out.empty()) {
    file.open(config.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "runtime error: cannot open output '" << config.out << "'\n";
      return exit_code::kRuntime;
    }
  }
  std::ostream& out = config.out.empty() ? std::cout : file;
  if (explain->parsed()) return CmdExplain(config, out, std::cerr);
  if (detect->parsed()) return CmdDetect(config, out, std::cerr);
  if (batch->parsed()) return CmdBatchPdp(config, out, std::cerr);
  return CmdGenerate(config, out, std::cerr);
}

}  // namespace ipdp
