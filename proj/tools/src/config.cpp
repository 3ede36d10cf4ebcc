#include "fastfix/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fastfix/error.hpp"

namespace fastfix::cli {
namespace {

using json = nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads keys from one JSON object and rejects any it did not consume.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const auto it = node_.find(key);
    seen_.insert(key);
    if (it == node_.end()) return;
    convert(*it, join(path_, key), out);
  }

  template <typename Fn>
  void object(const std::string& key, Fn&& fn) {
    const auto it = node_.find(key);
    seen_.insert(key);
    if (it == node_.end()) return;
    Reader sub(*it, join(path_, key));
    fn(sub);
    sub.finish();
  }

  void finish() const {
    for (const auto& [k, v] : node_.items()) {
      if (!seen_.count(k)) throw ConfigError(join(path_, k), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  static void convert(const json& v, const std::string& path, bool& out) {
    if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
    out = v.get<bool>();
  }
  static void convert(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    out = v.get<double>();
  }
  static void convert(const json& v, const std::string& path, int& out) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    out = v.get<int>();
  }
  static void convert(const json& v, const std::string& path, std::uint64_t& out) {
    if (!v.is_number_unsigned()) throw ConfigError(path, "expected a nonnegative integer");
    out = v.get<std::uint64_t>();
  }
  static void convert(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    out = v.get<std::string>();
  }
  static void convert(const json& v, const std::string& path, std::optional<double>& out) {
    if (v.is_null()) {
      out.reset();
      return;
    }
    double d = 0.0;
    convert(v, path, d);
    out = d;
  }
  static void convert(const json& v, const std::string& path, std::vector<std::size_t>& out) {
    if (!v.is_array()) throw ConfigError(path, "expected an array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::uint64_t x = 0;
      convert(v[i], path + "[" + std::to_string(i) + "]", x);
      out.push_back(static_cast<std::size_t>(x));
    }
  }
  static void convert(const json& v, const std::string& path, DataSource& out) {
    std::string s;
    convert(v, path, s);
    if (s == "synthetic") {
      out = DataSource::synthetic;
    } else if (s == "cifar10") {
      out = DataSource::cifar10;
    } else if (s == "file") {
      out = DataSource::file;
    } else {
      throw ConfigError(path, "expected one of synthetic, cifar10, file");
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* source_name(DataSource s) {
  switch (s) {
    case DataSource::cifar10:
      return "cifar10";
    case DataSource::file:
      return "file";
    case DataSource::synthetic:
      break;
  }
  return "synthetic";
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    validate(cfg);
    return cfg;
  }
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }

  Reader r(root, "");
  r.read("seed", cfg.seed);
  r.read("output_dir", cfg.output_dir);
  r.object("data", [&](Reader& d) {
    auto& dc = cfg.data;
    d.read("source", dc.source);
    d.read("path", dc.path);
    d.read("test_path", dc.test_path);
    d.read("n_labeled", dc.n_labeled);
    d.read("labeled_also_unlabeled", dc.labeled_also_unlabeled);
    d.object("synthetic", [&](Reader& s) {
      s.read("train_count", dc.synth_train);
      s.read("test_count", dc.synth_test);
      s.read("train_seed", dc.synth_train_seed);
      s.read("test_seed", dc.synth_test_seed);
      s.read("pattern_seed", dc.synth_pattern_seed);
      s.read("classes", dc.synth.classes);
      s.read("channels", dc.synth.channels);
      s.read("height", dc.synth.height);
      s.read("width", dc.synth.width);
      s.read("nuisance", dc.synth.nuisance);
      s.read("noise", dc.synth.noise);
      s.read("max_shift", dc.synth.max_shift);
    });
  });
  auto& tc = cfg.train;
  r.object("schedule", [&](Reader& s) {
    s.read("l", tc.schedule.l);
    s.read("u", tc.schedule.u);
    s.read("mu", tc.schedule.mu);
    s.read("T", tc.schedule.T);
    s.read("alpha", tc.schedule.alpha);
    s.read("cbs_enabled", tc.schedule.cbs_enabled);
    s.read("base_lambda", tc.schedule.base_lambda);
  });
  r.object("threshold", [&](Reader& s) {
    s.read("tau", tc.tau);
    s.read("cpl_enabled", tc.cpl_enabled);
  });
  r.object("augment", [&](Reader& s) {
    s.read("labeled_strong_aug", tc.labeled_strong_aug);
    s.read("op_count", tc.strong.op_count);
    s.read("magnitude", tc.strong.magnitude);
    s.read("cutout_fraction", tc.strong.cutout_fraction);
  });
  r.object("optim", [&](Reader& s) {
    s.read("lr", tc.sgd.lr);
    s.read("momentum", tc.sgd.momentum);
    s.read("weight_decay", tc.sgd.weight_decay);
    s.read("ema_decay", tc.ema_decay);
  });
  r.object("model", [&](Reader& s) { s.read("widths", tc.widths); });
  r.object("train", [&](Reader& s) {
    s.read("eval_every", tc.eval_every);
    s.read("eval_batch", tc.eval_batch);
    s.read("target_accuracy", tc.target_accuracy);
  });
  r.object("federated", [&](Reader& s) {
    auto& f = cfg.federated;
    s.read("n_clients", f.n_clients);
    s.read("n_groups", f.n_groups);
    s.read("clients_per_round", f.clients_per_round);
    s.read("rounds", f.rounds);
    s.read("local_iterations", f.local_iterations);
    s.read("labeled_per_client", f.labeled_per_client);
    s.read("dominant_fraction", f.dominant_fraction);
    s.read("parallel", f.parallel);
  });
  r.object("stream", [&](Reader& s) {
    s.read("n_chunks", cfg.stream.n_chunks);
    s.read("initial_fraction", cfg.stream.initial_fraction);
  });
  r.finish();

  tc.seed = cfg.seed;
  cfg.federated.seed = cfg.seed;
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  const auto& d = cfg.data;
  const auto& tc = cfg.train;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["data"] = {{"source", source_name(d.source)},
               {"path", d.path},
               {"test_path", d.test_path},
               {"n_labeled", d.n_labeled},
               {"labeled_also_unlabeled", d.labeled_also_unlabeled},
               {"synthetic",
                {{"train_count", d.synth_train},
                 {"test_count", d.synth_test},
                 {"train_seed", d.synth_train_seed},
                 {"test_seed", d.synth_test_seed},
                 {"pattern_seed", d.synth_pattern_seed},
                 {"classes", d.synth.classes},
                 {"channels", d.synth.channels},
                 {"height", d.synth.height},
                 {"width", d.synth.width},
                 {"nuisance", d.synth.nuisance},
                 {"noise", d.synth.noise},
                 {"max_shift", d.synth.max_shift}}}};
  j["schedule"] = {{"l", tc.schedule.l},         {"u", tc.schedule.u},
                   {"mu", tc.schedule.mu},       {"T", tc.schedule.T},
                   {"alpha", tc.schedule.alpha}, {"cbs_enabled", tc.schedule.cbs_enabled},
                   {"base_lambda", tc.schedule.base_lambda}};
  j["threshold"] = {{"tau", tc.tau}, {"cpl_enabled", tc.cpl_enabled}};
  j["augment"] = {{"labeled_strong_aug", tc.labeled_strong_aug},
                  {"op_count", tc.strong.op_count},
                  {"magnitude", tc.strong.magnitude},
                  {"cutout_fraction", tc.strong.cutout_fraction}};
  j["optim"] = {{"lr", tc.sgd.lr},
                {"momentum", tc.sgd.momentum},
                {"weight_decay", tc.sgd.weight_decay},
                {"ema_decay", tc.ema_decay}};
  j["model"] = {{"widths", tc.widths}};
  nlohmann::ordered_json target = nullptr;
  if (tc.target_accuracy) target = *tc.target_accuracy;
  j["train"] = {{"eval_every", tc.eval_every}, {"eval_batch", tc.eval_batch},
                {"target_accuracy", target}};
  const auto& f = cfg.federated;
  j["federated"] = {{"n_clients", f.n_clients},
                    {"n_groups", f.n_groups},
                    {"clients_per_round", f.clients_per_round},
                    {"rounds", f.rounds},
                    {"local_iterations", f.local_iterations},
                    {"labeled_per_client", f.labeled_per_client},
                    {"dominant_fraction", f.dominant_fraction},
                    {"parallel", f.parallel}};
  j["stream"] = {{"n_chunks", cfg.stream.n_chunks},
                 {"initial_fraction", cfg.stream.initial_fraction}};
  return j;
}

void validate(const RunConfig& cfg) {
  cfg.train.validate();
  cfg.federated.validate();
  cfg.stream.validate();
  const auto& d = cfg.data;
  if (d.n_labeled == 0) throw ConfigError("data.n_labeled", "must be positive");
  namespace fs = std::filesystem;
  switch (d.source) {
    case DataSource::synthetic: {
      const auto& s = d.synth;
      if (s.classes < 2) throw ConfigError("data.synthetic.classes", "must be at least 2");
      if (s.channels == 0) throw ConfigError("data.synthetic.channels", "must be positive");
      if (s.height == 0 || s.width == 0) {
        throw ConfigError("data.synthetic.height", "image sides must be positive");
      }
      if (d.synth_train == 0) throw ConfigError("data.synthetic.train_count", "must be positive");
      if (d.synth_test == 0) throw ConfigError("data.synthetic.test_count", "must be positive");
      if (d.n_labeled % s.classes != 0) {
        throw ConfigError("data.n_labeled", "must be a multiple of the class count");
      }
      if (d.n_labeled > d.synth_train) {
        throw ConfigError("data.n_labeled", "exceeds the training set size");
      }
      break;
    }
    case DataSource::cifar10:
      if (d.path.empty() || !fs::is_directory(d.path)) {
        throw ConfigError("data.path", "CIFAR-10 directory '" + d.path + "' does not exist");
      }
      break;
    case DataSource::file:
      if (d.path.empty() || !fs::is_regular_file(d.path)) {
        throw ConfigError("data.path", "dataset file '" + d.path + "' does not exist");
      }
      if (d.test_path.empty() || !fs::is_regular_file(d.test_path)) {
        throw ConfigError("data.test_path", "dataset file '" + d.test_path + "' does not exist");
      }
      break;
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

LoadedData load_data(const RunConfig& cfg) {
  const auto& d = cfg.data;
  LoadedData out;
  switch (d.source) {
    case DataSource::synthetic: {
      SynthOptions o = d.synth;
      o.count = d.synth_train;
      o.seed = d.synth_train_seed;
      out.train = synth_generate(o, d.synth_pattern_seed);
      out.train.name = "synthetic-train";
      o.count = d.synth_test;
      o.seed = d.synth_test_seed;
      out.test = synth_generate(o, d.synth_pattern_seed);
      out.test.name = "synthetic-test";
      break;
    }
    case DataSource::cifar10:
      out.train = load_cifar10_binary(d.path, CifarSplit::train);
      out.test = load_cifar10_binary(d.path, CifarSplit::test);
      break;
    case DataSource::file:
      out.train = read_dataset(d.path);
      out.test = read_dataset(d.test_path);
      break;
  }
  return out;
}

}  // namespace fastfix::cli
