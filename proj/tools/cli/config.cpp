#include "cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace cli {

namespace {

enum class Type { Int, Real, Bool, Text, List };

struct KeySpec {
  const char* key;
  Type type;
  std::optional<Value> def;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool open_lo = false;
  bool open_hi = false;
  std::vector<std::string> choices = {};
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

KeySpec integer(const char* key, std::int64_t def, double lo, double hi) {
  return {key, Type::Int, Value(def), lo, hi};
}
KeySpec real(const char* key, double def, double lo, double hi, bool open_lo, bool open_hi) {
  return {key, Type::Real, Value(def), lo, hi, open_lo, open_hi};
}
KeySpec choice(const char* key, std::optional<std::string> def, std::vector<std::string> choices) {
  KeySpec s{key, Type::Text, std::nullopt};
  if (def) s.def = Value(*def);
  s.choices = std::move(choices);
  return s;
}

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      choice("command", std::nullopt, known_commands()),
      integer("seed", 42, 0, 9007199254740992.0),

      integer("geometry.p", 2, 1, 4),
      integer("geometry.n", 4, 2, 10),
      integer("geometry.k", 2, 1, 6),
      real("geometry.epsilon", 0.3, 0, kPi / 2, true, true),

      {"grassmann.lambda", Type::List, Value(std::vector<double>{1.0})},
      integer("grassmann.samples", 100, 1, 100000),
      integer("grassmann.grid", 2048, 64, 1 << 20),

      integer("sphere.samples", 10000, 1000, 200000),
      integer("sphere.leaves", 8, 0, 64),
      integer("sphere.neighbors", 12, 1, 64),
      real("sphere.cutoff_factor", 3.0, 0, 100, true, false),
      real("sphere.leaf_band", 1e-2, 0, 0.5, true, true),
      real("sphere.boundary_band", 1e-6, 0, 0.5, false, true),
      integer("sphere.grid", 4096, 64, 1 << 20),

      integer("quadric.samples", 1000, 1, 1000000),
      integer("quadric.k", 2, 1, 8),

      choice("mesh.kind", std::nullopt, {"torus-grid", "icosphere"}),
      integer("mesh.nu", 32, 8, 4096),
      integer("mesh.nv", 32, 8, 4096),
      integer("mesh.level", 3, 2, 8),

      choice("flow.target", std::nullopt, {"sphere", "product-spheres", "grassmann-2-4"}),
      integer("flow.sphere_dim", 2, 1, 16),
      integer("flow.second_dim", 2, 1, 16),
      real("flow.product_scale", 1.0, 0, kInf, true, true),
      choice("flow.init", std::string("cap"), {"constant", "identity", "great-circle", "cap"}),
      real("flow.cap_radius", 0.4, 0, kPi, true, false),
      choice("flow.region", std::string("none"), {"none", "tube"}),
      choice("flow.mode", std::string("free"), {"free", "constrained"}),
      // Default depends on the domain: 0.2 on torus grids, 0.1 on icospheres.
      {"flow.step", Type::Real, std::nullopt, 0, 10, true, false},
      integer("flow.max_iters", 50000, 0, 1e9),
      real("flow.tension_tol", 1e-6, 0, 1, true, false),
      real("flow.oscillation_tol", 1e-2, 0, kPi, true, false),
      integer("flow.trace_every", 10, 1, 1e9),

      choice("gauss.immersion", std::nullopt, {"equator", "clifford-torus", "generalized-clifford", "distance-sphere"}),
      integer("gauss.k", 2, 1, 6),
      integer("gauss.m", 3, 2, 8),
      integer("gauss.p", 1, 1, 4),
      integer("gauss.q", 1, 1, 4),
      real("gauss.radius", 0.8, 0, 1, true, true),
      integer("gauss.grid", 64, 2, 4096),
      {"gauss.h1_zero", Type::Bool, Value(false)},
      {"gauss.circle", Type::List, Value(std::vector<double>{})},
      choice("gauss.region", std::string("auto"), {"auto", "tube", "grassmann"}),

      {"output.dir", Type::Text, Value(std::string("out"))},
  };
  return keys;
}

const KeySpec* find_spec(const std::string& key) {
  for (const KeySpec& s : schema())
    if (key == s.key) return &s;
  return nullptr;
}

[[noreturn]] void usage(const std::string& tag, const std::string& msg) { throw CliError(kExitUsage, tag, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const char c = k[i];
    if (c == '.' && k[i - 1] == '.') return false;
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) return std::nullopt;
  return v;
}

std::optional<double> to_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(const std::string& raw, const std::string& key) {
  if (raw.size() < 2 || raw.back() != '"') usage("syntax", "unterminated string for key '" + key + "'");
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c == '"') usage("syntax", "stray quote in value of key '" + key + "'");
    if (c == '\\') {
      if (i + 2 >= raw.size()) usage("syntax", "dangling escape in key '" + key + "'");
      c = raw[++i];
      if (c != '"' && c != '\\') usage("syntax", "unsupported escape in key '" + key + "'");
    }
    out.push_back(c);
  }
  return out;
}

Value parse_value(const std::string& raw, const KeySpec& spec) {
  const std::string key = spec.key;
  auto bad = [&]() -> Value { usage("syntax", "malformed value for key '" + key + "': " + raw); };
  switch (spec.type) {
    case Type::Text:
      if (raw.empty() || raw.front() != '"') usage("type", "key '" + key + "' expects a quoted string");
      return unquote(raw, key);
    case Type::Bool:
      if (raw == "true") return true;
      if (raw == "false") return false;
      usage("type", "key '" + key + "' expects true or false");
    case Type::Int:
      if (auto v = to_int(raw)) return *v;
      if (to_real(raw)) usage("type", "key '" + key + "' expects an integer");
      return bad();
    case Type::Real:
      if (auto v = to_int(raw)) return static_cast<double>(*v);
      if (auto v = to_real(raw)) return *v;
      return bad();
    case Type::List: {
      if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') usage("type", "key '" + key + "' expects an array");
      std::vector<double> out;
      const std::string body = trim(raw.substr(1, raw.size() - 2));
      if (body.empty()) return out;
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
          if (ss.eof()) break;  // trailing comma
          return bad();
        }
        auto v = to_real(item);
        if (!v) return bad();
        out.push_back(*v);
      }
      return out;
    }
  }
  return bad();
}

void check_range(const KeySpec& s, double v) {
  const bool below = s.open_lo ? v <= s.lo : v < s.lo;
  const bool above = s.open_hi ? v >= s.hi : v > s.hi;
  if (below || above) {
    std::ostringstream os;
    os << "key '" << s.key << "' = " << format_real(v) << " outside " << (s.open_lo ? "(" : "[") << format_real(s.lo)
       << ", " << format_real(s.hi) << (s.open_hi ? ")" : "]");
    usage("range", os.str());
  }
}

std::string toml_real(double v) {
  std::string s = format_real(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string render(const Value& v) {
  struct {
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return toml_real(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return quote(x); }
    std::string operator()(const std::vector<double>& xs) const {
      std::string s = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + toml_real(xs[i]);
      return s + "]";
    }
  } visitor;
  return std::visit(visitor, v);
}

template <class T>
const T& get(const std::map<std::string, Value>& values, const std::string& key) {
  auto it = values.find(key);
  if (it == values.end()) usage("missing-key", "missing required key '" + key + "'");
  const T* p = std::get_if<T>(&it->second);
  if (p == nullptr) throw std::logic_error("config key '" + key + "' has another type");
  return *p;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds = {
      "grassmann geodesic", "grassmann tmax", "grassmann region", "sphere region", "sphere disconnect",
      "quadric roundtrip",  "quadric chart",  "flow run",         "gauss audit"};
  return cmds;
}

std::int64_t ExperimentConfig::integer(const std::string& key) const { return get<std::int64_t>(values_, key); }
double ExperimentConfig::real(const std::string& key) const { return get<double>(values_, key); }
bool ExperimentConfig::boolean(const std::string& key) const { return get<bool>(values_, key); }
const std::string& ExperimentConfig::text(const std::string& key) const { return get<std::string>(values_, key); }
const std::vector<double>& ExperimentConfig::list(const std::string& key) const {
  return get<std::vector<double>>(values_, key);
}

std::optional<std::string> ExperimentConfig::command() const {
  if (!has("command")) return std::nullopt;
  return text("command");
}

void ExperimentConfig::set(const std::string& key, Value v) {
  const KeySpec* s = find_spec(key);
  if (s == nullptr) usage("unknown-key", "unknown key '" + key + "'");
  if (s->type == Type::Real && std::holds_alternative<std::int64_t>(v))
    v = static_cast<double>(std::get<std::int64_t>(v));
  const bool ok = (s->type == Type::Int && std::holds_alternative<std::int64_t>(v)) ||
                  (s->type == Type::Real && std::holds_alternative<double>(v)) ||
                  (s->type == Type::Bool && std::holds_alternative<bool>(v)) ||
                  (s->type == Type::Text && std::holds_alternative<std::string>(v)) ||
                  (s->type == Type::List && std::holds_alternative<std::vector<double>>(v));
  if (!ok) usage("type", "key '" + key + "' has the wrong type");
  if (s->type == Type::Int) check_range(*s, static_cast<double>(std::get<std::int64_t>(v)));
  if (s->type == Type::Real) {
    if (!std::isfinite(std::get<double>(v))) usage("range", "key '" + key + "' must be finite");
    check_range(*s, std::get<double>(v));
  }
  if (s->type == Type::List) {
    for (double x : std::get<std::vector<double>>(v))
      if (!std::isfinite(x)) usage("range", "key '" + key + "' must hold finite numbers");
  }
  if (!s->choices.empty()) {
    const auto& t = std::get<std::string>(v);
    if (std::find(s->choices.begin(), s->choices.end(), t) == s->choices.end()) {
      std::string allowed;
      for (const auto& c : s->choices) allowed += (allowed.empty() ? "" : "|") + c;
      usage("range", "key '" + key + "' = \"" + t + "\" not one of " + allowed);
    }
  }
  values_[key] = std::move(v);
}

ExperimentConfig parse_config(const std::string& text, const std::optional<std::string>& command) {
  ExperimentConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') usage("syntax", where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) usage("syntax", where + ": invalid section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) usage("syntax", where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (!valid_key(key)) usage("syntax", where + ": invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    const KeySpec* spec = find_spec(full);
    if (spec == nullptr) usage("unknown-key", "unknown key '" + full + "'");
    if (seen.count(full)) usage("syntax", where + ": duplicate key '" + full + "'");
    seen[full] = lineno;
    cfg.set(full, parse_value(raw, *spec));
  }
  for (const KeySpec& s : schema())
    if (!cfg.has(s.key) && s.def) cfg.set(s.key, *s.def);
  if (!cfg.has("flow.step") && cfg.has("mesh.kind"))
    cfg.set("flow.step", cfg.text("mesh.kind") == "icosphere" ? 0.1 : 0.2);

  std::optional<std::string> cmd = command;
  if (!cmd) cmd = cfg.command();
  if (cmd) validate(cfg, *cmd);
  return cfg;
}

void validate(const ExperimentConfig& cfg, const std::string& command) {
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) usage("usage", "unknown command '" + command + "'");
  if (auto named = cfg.command(); named && *named != command)
    usage("usage", "config names command '" + *named + "' but '" + command + "' was requested");

  const auto p = cfg.integer("geometry.p"), n = cfg.integer("geometry.n");
  if (n <= p) usage("range", "key 'geometry.n' must exceed geometry.p");
  const auto& lambda = cfg.list("grassmann.lambda");
  if (lambda.empty() || static_cast<std::int64_t>(lambda.size()) > std::min(p, n - p))
    usage("range", "key 'grassmann.lambda' needs between 1 and min(p, n-p) entries");
  if (std::any_of(lambda.begin(), lambda.end(), [](double x) { return x < 0; }) ||
      std::all_of(lambda.begin(), lambda.end(), [](double x) { return x == 0; }))
    usage("range", "key 'grassmann.lambda' needs non-negative rates, not all zero");
  if (command == "grassmann region" && p != 2)
    usage("range", "key 'geometry.p' must be 2 for the main region");
  if (command == "flow run") {
    const std::string& kind = cfg.text("mesh.kind");
    const std::string& target = cfg.text("flow.target");
    const std::string& init = cfg.text("flow.init");
    const bool tube = cfg.text("flow.region") == "tube";
    if (tube && target != "sphere") usage("range", "key 'flow.region' = \"tube\" needs flow.target = \"sphere\"");
    if (cfg.text("flow.mode") == "constrained" && !tube)
      usage("range", "key 'flow.mode' = \"constrained\" needs flow.region = \"tube\"");
    if (init == "identity" && (kind != "icosphere" || target != "sphere" || cfg.integer("flow.sphere_dim") != 2))
      usage("range", "key 'flow.init' = \"identity\" needs an icosphere domain and an S2 target");
    if (init == "great-circle" && (kind != "torus-grid" || target != "sphere" || cfg.integer("flow.sphere_dim") != 2))
      usage("range", "key 'flow.init' = \"great-circle\" needs a torus-grid domain and an S2 target");
  }

  if (command == "gauss audit") {
    const std::string& imm = cfg.text("gauss.immersion");
    const auto k = cfg.integer("gauss.k"), m = cfg.integer("gauss.m");
    if (imm == "equator" && k >= m) usage("range", "key 'gauss.k' must be below gauss.m");
    if (imm == "distance-sphere" && m < 2) usage("range", "key 'gauss.m' must be at least 2");
    const auto& circle = cfg.list("gauss.circle");
    if (!circle.empty()) {
      if (circle.size() != 2 || circle[0] == circle[1])
        usage("range", "key 'gauss.circle' needs two distinct axis indices");
      for (double c : circle)
        if (c != std::floor(c) || c < 1) usage("range", "key 'gauss.circle' holds 1-based axis indices");
    }
  }
}

std::string serialize(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const KeySpec& s : schema()) {
    const std::string key = s.key;
    if (!cfg.has(key)) continue;
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      os << "\n[" << sec << "]\n";
      section = sec;
    }
    os << leaf << " = " << render(cfg.values().at(key)) << "\n";
  }
  return os.str();
}

}  // namespace cli
