#include "pdl/config.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pdl/error.hpp"

namespace pdl {

std::string PipelineConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string double_text(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_unsigned(const std::string& value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw Error("expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw Error("expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw Error("expected true or false, got '" + value + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"domain", [](PipelineConfig& c, const std::string& v) { c.domain = v; }},
      {"generator", [](PipelineConfig& c, const std::string& v) { c.generator = v; }},
      {"unitary", [](PipelineConfig& c, const std::string& v) { c.unitary = v; }},
      {"run_root", [](PipelineConfig& c, const std::string& v) { c.run_root = v; }},
      {"seed", [](PipelineConfig& c, const std::string& v) { c.seed = parse_unsigned<std::uint64_t>(v); }},
      {"traces", [](PipelineConfig& c, const std::string& v) { c.traces = parse_unsigned<std::size_t>(v); }},
      {"strategy", [](PipelineConfig& c, const std::string& v) { c.planner.strategy = parse_strategy(v); }},
      {"max_expansions",
       [](PipelineConfig& c, const std::string& v) { c.planner.max_expansions = parse_unsigned<std::size_t>(v); }},
      {"strict_del", [](PipelineConfig& c, const std::string& v) { c.candidates.strict_del = parse_bool(v); }},
      {"max_rel", [](PipelineConfig& c, const std::string& v) { c.candidates.max_rel = parse_unsigned<std::size_t>(v); }},
      {"min_support", [](PipelineConfig& c, const std::string& v) { c.min_support = parse_rational(v); }},
      {"min_confidence", [](PipelineConfig& c, const std::string& v) { c.min_confidence = parse_rational(v); }},
      {"tolerance", [](PipelineConfig& c, const std::string& v) { c.tolerance = parse_rational(v); }},
      {"schedule_start",
       [](PipelineConfig& c, const std::string& v) { c.schedule_start = parse_unsigned<std::size_t>(v); }},
      {"skip_mining", [](PipelineConfig& c, const std::string& v) { c.skip_mining = parse_bool(v); }},
      {"budget", [](PipelineConfig& c, const std::string& v) { c.budget = parse_unsigned<std::size_t>(v); }},
      {"include_reference", [](PipelineConfig& c, const std::string& v) { c.include_reference = parse_bool(v); }},
      {"hidden", [](PipelineConfig& c, const std::string& v) { c.train.hidden_units = parse_unsigned<std::size_t>(v); }},
      {"dropout", [](PipelineConfig& c, const std::string& v) { c.train.dropout_rate = parse_double(v); }},
      {"epochs", [](PipelineConfig& c, const std::string& v) { c.train.epochs = parse_unsigned<std::size_t>(v); }},
      {"folds", [](PipelineConfig& c, const std::string& v) { c.train.folds = parse_unsigned<std::size_t>(v); }},
      {"lr", [](PipelineConfig& c, const std::string& v) { c.train.learning_rate = parse_double(v); }},
      {"beta1", [](PipelineConfig& c, const std::string& v) { c.train.beta1 = parse_double(v); }},
      {"beta2", [](PipelineConfig& c, const std::string& v) { c.train.beta2 = parse_double(v); }},
      {"epsilon", [](PipelineConfig& c, const std::string& v) { c.train.epsilon = parse_double(v); }},
  };
  return table;
}

}  // namespace

std::string PipelineConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"domain", domain},
      {"generator", generator},
      {"unitary", unitary},
      {"traces", std::to_string(traces)},
      {"strategy", to_string(planner.strategy)},
      {"max_expansions", std::to_string(planner.max_expansions)},
      {"strict_del", candidates.strict_del ? "true" : "false"},
      {"max_rel", std::to_string(candidates.max_rel)},
      {"min_support", rational_text(min_support)},
      {"min_confidence", rational_text(min_confidence)},
      {"tolerance", rational_text(tolerance)},
      {"schedule_start", std::to_string(schedule_start)},
      {"skip_mining", skip_mining ? "true" : "false"},
      {"budget", std::to_string(budget)},
      {"include_reference", include_reference ? "true" : "false"},
      {"hidden", std::to_string(train.hidden_units)},
      {"dropout", double_text(train.dropout_rate)},
      {"epochs", std::to_string(train.epochs)},
      {"folds", std::to_string(train.folds)},
      {"lr", double_text(train.learning_rate)},
      {"beta1", double_text(train.beta1)},
      {"beta2", double_text(train.beta2)},
      {"epsilon", double_text(train.epsilon)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string PipelineConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str().substr(0, 12);
}

PipelineConfig parse_config(std::string_view text, const std::string& base_dir) {
  PipelineConfig cfg;
  cfg.base_dir = base_dir;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line = std::string(text.substr(pos, end - pos));
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no, 1);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("unknown key '" + key + "'", line_no, 1);
    if (!seen.insert(key).second) throw ParseError("key '" + key + "' given twice", line_no, 1);
    if (value.empty()) throw ParseError("key '" + key + "' has no value", line_no, eq + 2);
    try {
      it->second(cfg, value);
    } catch (const Error& e) {
      throw ParseError(key + ": " + e.what(), line_no, eq + 2);
    }
  }
  for (const char* required : {"domain", "generator", "unitary"}) {
    if (seen.count(required) == 0) throw Error(std::string("config is missing '") + required + "'");
  }
  if (cfg.traces == 0) throw Error("traces must be > 0");
  if (cfg.budget == 0) throw Error("budget must be > 0");
  if (cfg.schedule_start == 0) throw Error("schedule_start must be > 0");
  cfg.train.validate();
  return cfg;
}

}  // namespace pdl
