#include "pdl/neural/train.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "pdl/rng.hpp"

namespace pdl::neural {

void TrainConfig::validate() const {
  if (hidden_units == 0) throw PreconditionError("hidden units must be > 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw PreconditionError("dropout must be in [0, 1)");
  if (epochs == 0) throw PreconditionError("epochs must be > 0");
  if (folds < 2) throw PreconditionError("folds must be >= 2");
  if (!(learning_rate > 0.0)) throw PreconditionError("learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw PreconditionError("Adam betas must be in [0, 1)");
  if (!(epsilon > 0.0)) throw PreconditionError("Adam epsilon must be > 0");
}

TrainResult train(std::span<const EncodedSequence> dataset, LstmShape shape, const TrainConfig& cfg,
                  std::uint64_t seed) {
  cfg.validate();
  if (dataset.empty()) throw PreconditionError("training set is empty");
  for (const auto& seq : dataset) {
    if (seq.inputs.cols != shape.d || seq.targets.cols != shape.n) {
      throw PreconditionError("training sequences do not share the layout");
    }
  }
  TrainResult result{LstmParameters::initialized(shape, derive_seed(seed, 0)), {}};
  Rng rng(derive_seed(seed, 1));
  Adam adam(shape.size(), {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon});
  LstmParameters grad(shape);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  const double keep_scale = 1.0 / (1.0 - cfg.dropout_rate);
  Matrix mask;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t target_sum = 0;
    for (auto idx : order) {
      const auto& seq = dataset[idx];
      if (seq.target_steps() == 0) continue;
      const Matrix* m = nullptr;
      if (cfg.dropout_rate > 0.0) {
        mask = Matrix(seq.steps, shape.h);
        for (auto& x : mask.data) x = rng.uniform() < cfg.dropout_rate ? 0.0 : keep_scale;
        m = &mask;
      }
      grad.zero();
      const double loss = loss_and_gradient(result.params, seq, grad, m);
      if (!std::isfinite(loss)) throw NumericError("training loss diverged in epoch", epoch + 1);
      loss_sum += loss * static_cast<double>(seq.target_steps());
      target_sum += seq.target_steps();
      adam.step(result.params, grad);
    }
    result.loss_history.push_back(target_sum == 0 ? 0.0 : loss_sum / static_cast<double>(target_sum));
  }
  return result;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t count, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("folds must be >= 2");
  if (count < k) {
    throw PreconditionError("need at least " + std::to_string(k) + " traces for " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(f * count / k),
                    perm.begin() + static_cast<std::ptrdiff_t>((f + 1) * count / k));
  }
  return folds;
}

Accuracy accuracy(const LstmParameters& params, const EncodedSequence& seq) {
  Accuracy acc;
  if (seq.labels.empty()) return acc;
  const auto fwd = lstm_forward(params, seq);
  for (std::size_t t = 0; t < seq.labels.size(); ++t) {
    if (predict(fwd.probs, t) == seq.labels[t]) ++acc.correct;
    ++acc.total;
  }
  return acc;
}

CrossValidation cross_validate(std::span<const PlanTrace> traces, const EncodingLayout& layout,
                               const TrainConfig& cfg) {
  cfg.validate();
  CrossValidation cv{layout, batch_len(traces), cfg, {}};
  std::vector<EncodedSequence> encoded;
  encoded.reserve(traces.size());
  for (const auto& t : traces) encoded.push_back(encode_training(t, layout, cv.batch_len));

  const auto folds = make_folds(traces.size(), cfg.folds, derive_seed(cfg.rng_seed, 0));
  const LstmShape shape{layout.d, cfg.hidden_units, layout.n};
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held(traces.size(), false);
    for (auto i : folds[f]) held[i] = true;
    std::vector<EncodedSequence> training;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      if (!held[i]) training.push_back(encoded[i]);
    }
    auto result = train(training, shape, cfg, derive_seed(cfg.rng_seed, f + 1));
    FoldModel fold{folds[f], std::move(result.params), std::move(result.loss_history), {}};
    for (auto i : folds[f]) fold.training_encoding += accuracy(fold.params, encoded[i]);
    cv.folds.push_back(std::move(fold));
  }
  return cv;
}

Rational replay_agreement(const ActionModel& model, std::span<const PlanTrace> traces) {
  std::int64_t agree = 0;
  std::int64_t total = 0;
  for (const auto& trace : traces) {
    for (std::size_t t = 0; t < trace.length(); ++t) {
      ++total;
      const auto& ga = trace.actions()[t];
      if (is_applicable(trace.states()[t], ga, model) && apply(trace.states()[t], ga, model) == trace.states()[t + 1]) {
        ++agree;
      }
    }
  }
  return total == 0 ? Rational(0) : Rational(agree, total);
}

std::vector<ModelScore> score_models(const CrossValidation& cv, std::span<const PlanTrace> traces,
                                     const SampledModelSet& models) {
  std::vector<ModelScore> scores;
  for (const auto& m : models.models) {
    ModelScore s;
    s.id = m.id;
    s.reference = m.reference;
    Rational sum(0);
    for (const auto& fold : cv.folds) {
      Accuracy acc;
      for (auto i : fold.validation) {
        if (i >= traces.size()) throw PreconditionError("fold refers to a missing trace");
        acc += accuracy(fold.params, encode_validation(traces[i], cv.layout, m.model, cv.batch_len));
      }
      s.fold_accuracy.push_back(acc.value());
      sum += acc.value();
    }
    s.mean_accuracy = cv.folds.empty() ? Rational(0) : sum / static_cast<std::int64_t>(cv.folds.size());
    s.replay_agreement = replay_agreement(m.model, traces);
    for (const auto& e : m.model.entries()) {
      s.pre_size += e.pre().size();
      s.total_predicates += e.total();
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

bool ranks_before(const ModelScore& a, const ModelScore& b) {
  if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
  if (a.replay_agreement != b.replay_agreement) return a.replay_agreement > b.replay_agreement;
  if (a.pre_size != b.pre_size) return a.pre_size > b.pre_size;
  if (a.total_predicates != b.total_predicates) return a.total_predicates < b.total_predicates;
  return a.id < b.id;
}

std::size_t select_best(const std::vector<ModelScore>& scores) {
  if (scores.empty()) throw PreconditionError("no models to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (ranks_before(scores[i], scores[best])) best = i;
  }
  return best;
}

namespace {

constexpr char kMagic[8] = {'P', 'D', 'L', 'L', 'S', 'T', 'M', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[pos + i])} << (8 * i);
  return v;
}

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

}  // namespace

std::string serialize_parameters(const CrossValidation& cv) {
  if (cv.folds.empty()) throw PreconditionError("no trained folds to serialize");
  const auto& shape = cv.folds.front().params.shape();
  nlohmann::json header;
  header["format_version"] = 1;
  header["d"] = shape.d;
  header["h"] = shape.h;
  header["n"] = shape.n;
  header["layout_hash"] = hex(cv.layout.hash());
  header["batch_len"] = cv.batch_len;
  header["gate_order"] = "ifog";
  header["blocks"] = {"W", "U", "b", "V", "c"};
  header["parameters_per_fold"] = shape.size();
  const auto& c = cv.config;
  header["config"] = {{"hidden_units", c.hidden_units}, {"dropout_rate", c.dropout_rate}, {"epochs", c.epochs},
                      {"folds", c.folds},          {"learning_rate", c.learning_rate}, {"beta1", c.beta1},
                      {"beta2", c.beta2},          {"epsilon", c.epsilon},         {"rng_seed", c.rng_seed}};
  auto& folds = header["folds"] = nlohmann::json::array();
  for (const auto& f : cv.folds) {
    folds.push_back({{"validation", f.validation},
                     {"loss_history", f.loss_history},
                     {"training_encoding_correct", f.training_encoding.correct},
                     {"training_encoding_total", f.training_encoding.total}});
  }
  const std::string text = header.dump();
  std::string out(kMagic, sizeof(kMagic));
  put_u64(out, text.size());
  out += text;
  for (const auto& f : cv.folds) {
    for (double x : f.params.data()) put_u64(out, std::bit_cast<std::uint64_t>(x));
  }
  return out;
}

CrossValidation parse_parameters(std::string_view bytes, const EncodingLayout& layout) {
  if (bytes.size() < 16 || bytes.substr(0, 8) != std::string_view(kMagic, 8)) {
    throw Error("not a parameter file (bad magic)");
  }
  const std::uint64_t len = get_u64(bytes, 8);
  if (len > bytes.size() - 16) throw Error("parameter file header is truncated");
  CrossValidation cv;
  cv.layout = layout;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(16, len));
    if (header.at("format_version").get<int>() != 1) throw Error("unsupported parameter file version");
    if (header.at("layout_hash").get<std::string>() != hex(layout.hash())) {
      throw Error("parameter file was trained on a different encoding layout");
    }
    const LstmShape shape{header.at("d").get<std::size_t>(), header.at("h").get<std::size_t>(),
                          header.at("n").get<std::size_t>()};
    if (shape.d != layout.d || shape.n != layout.n) throw Error("parameter shapes do not match the layout");
    cv.batch_len = header.at("batch_len").get<std::size_t>();
    const auto& c = header.at("config");
    cv.config.hidden_units = c.at("hidden_units").get<std::size_t>();
    cv.config.dropout_rate = c.at("dropout_rate").get<double>();
    cv.config.epochs = c.at("epochs").get<std::size_t>();
    cv.config.folds = c.at("folds").get<std::size_t>();
    cv.config.learning_rate = c.at("learning_rate").get<double>();
    cv.config.beta1 = c.at("beta1").get<double>();
    cv.config.beta2 = c.at("beta2").get<double>();
    cv.config.epsilon = c.at("epsilon").get<double>();
    cv.config.rng_seed = c.at("rng_seed").get<std::uint64_t>();
    const auto& folds = header.at("folds");
    const std::size_t per_fold = shape.size();
    if (bytes.size() - 16 - len != folds.size() * per_fold * 8) throw Error("parameter payload has the wrong size");
    std::size_t pos = 16 + len;
    for (const auto& f : folds) {
      FoldModel fold{f.at("validation").get<std::vector<std::size_t>>(), LstmParameters(shape),
                     f.at("loss_history").get<std::vector<double>>(),
                     {f.at("training_encoding_correct").get<std::size_t>(),
                      f.at("training_encoding_total").get<std::size_t>()}};
      for (auto& x : fold.params.data()) {
        x = std::bit_cast<double>(get_u64(bytes, pos));
        pos += 8;
      }
      cv.folds.push_back(std::move(fold));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed parameter header: ") + e.what());
  }
  return cv;
}

}  // namespace pdl::neural
