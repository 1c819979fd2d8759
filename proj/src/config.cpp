#include "srsp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "srsp/ensemble.hpp"
#include "srsp/error.hpp"

namespace srsp {

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Strang: return "strang";
    case Scheme::Lie: return "lie";
    case Scheme::DuhamelMidpoint: return "duhamel_midpoint";
  }
  return "unknown";
}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;  // 0 for command-line overrides
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"domain", {"dimension", "lengths", "modes", "oversampling"}},
      {"physics", {"mass", "wavefunctions", "weights", "coupling"}},
      {"initial", {"seed", "damping", "snapshot"}},
      {"integration", {"scheme", "dt", "steps", "cadence", "guard_factor"}},
      {"output", {"directory", "snapshot_cadence", "plot"}},
      {"verify", {"trials", "seed", "tamper_eigenvalue"}},
      {"converge", {"dt_levels", "mode_levels", "dt", "time", "reference_divisor"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class Parser {
 public:
  Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (line > 0) os << ':' << line;
    os << ": " << msg;
    throw Error(code, os.str());
  }

  void read(std::string_view text) {
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string line(text.substr(pos, end - pos));
      pos = end + 1;
      ++line_no;
      if (auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) {
        if (end == text.size()) break;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']') fail(ErrorCode::Parse, line_no, "unterminated section header");
        section = lower(trim(std::string_view(line).substr(1, line.size() - 2)));
        if (!known_keys().contains(section)) fail(ErrorCode::Parse, line_no, "unknown section [" + section + "]");
      } else {
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorCode::Parse, line_no, "expected `key = value`");
        if (section.empty()) fail(ErrorCode::Parse, line_no, "key outside of any [section]");
        const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
        set(section + "." + key, trim(std::string_view(line).substr(eq + 1)), line_no);
      }
      if (end == text.size()) break;
    }
  }

  void set(const std::string& dotted, std::string value, std::size_t line) {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) fail(ErrorCode::Parse, line, "expected section.key, got '" + dotted + "'");
    const auto section = dotted.substr(0, dot);
    const auto key = dotted.substr(dot + 1);
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) fail(ErrorCode::Parse, line, "unknown section [" + section + "]");
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      fail(ErrorCode::Parse, line, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) fail(ErrorCode::Parse, line, dotted + ": empty value");
    entries_[dotted] = {std::move(value), line};
  }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t line_of(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

  double number(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? to_double(key, *e) : fallback;
  }

  long long integer(const std::string& key, long long fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    long long v = 0;
    const auto& s = e->value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorCode::Parse, e->line, key + ": expected an integer, got '" + s + "'");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const long long v = integer(key, static_cast<long long>(fallback));
    if (v < 0) fail(ErrorCode::Constraint, line_of(key), key + ": must be >= 0");
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    const auto v = lower(e->value);
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    fail(ErrorCode::Parse, e->line, key + ": expected on/off, got '" + e->value + "'");
  }

  std::string text(const std::string& key, std::string fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  std::vector<double> number_list(const std::string& key) const {
    const Entry* e = find(key);
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, Entry{trim(item), e->line}));
    return out;
  }

  double to_double(const std::string& key, const Entry& e) const {
    double v = 0.0;
    const auto& s = e.value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorCode::Parse, e.line, key + ": expected a number, got '" + s + "'");
    return v;
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source, const std::vector<ConfigOverride>& overrides) {
  Parser p(source);
  p.read(text);
  for (const auto& [key, value] : overrides) p.set(lower(key), value, 0);

  RunConfig cfg;
  // Constraint errors name their field as "section.key: ..."; attach its line.
  auto guarded = [&](auto&& body) {
    try {
      body();
    } catch (const Error& err) {
      const std::string msg = err.what();
      const bool located = msg.rfind(std::string(source), 0) == 0;
      if (!located && (err.code() == ErrorCode::Constraint || err.code() == ErrorCode::InvalidArgument)) {
        const auto colon = msg.find(':');
        const std::string field = colon == std::string::npos ? std::string{} : msg.substr(0, colon);
        p.fail(ErrorCode::Constraint, p.line_of(field), msg);
      }
      throw;
    }
  };

  guarded([&] {
    auto& dom = cfg.domain;
    dom.dimension = static_cast<int>(p.integer("domain.dimension", 1));
    if (dom.dimension < 1 || dom.dimension > kMaxDimension) throw Error(ErrorCode::Constraint, "domain.dimension: must be 1, 2 or 3");
    const auto d = static_cast<std::size_t>(dom.dimension);
    auto broadcast = [&](const std::string& key, std::vector<double> fallback) {
      std::vector<double> v = p.find(key) ? p.number_list(key) : std::move(fallback);
      if (v.size() == 1) v.assign(d, v.front());
      if (v.size() != d) throw Error(ErrorCode::Constraint, key + ": expected 1 or " + std::to_string(d) + " entries");
      return v;
    };
    dom.lengths = broadcast("domain.lengths", {1.0});
    dom.modes.clear();
    for (double n : broadcast("domain.modes", {32.0})) {
      if (n != static_cast<double>(static_cast<int>(n))) throw Error(ErrorCode::Constraint, "domain.modes: entries must be integers");
      dom.modes.push_back(static_cast<int>(n));
    }
    dom.oversampling = static_cast<int>(p.integer("domain.oversampling", 2));
    dom.validate();
  });

  guarded([&] {
    cfg.mass = p.number("physics.mass", 1.0);
    if (!(cfg.mass > 0.0)) throw Error(ErrorCode::Constraint, "physics.mass: must be > 0");
    cfg.coupling = p.boolean("physics.coupling", true);
    const std::string weights = p.text("physics.weights", "geometric(0.5)");
    const bool has_count = p.find("physics.wavefunctions") != nullptr;
    cfg.wavefunctions = p.count("physics.wavefunctions", 4);
    if (lower(weights).rfind("geometric(", 0) == 0) {
      if (weights.back() != ')') throw Error(ErrorCode::Constraint, "physics.weights: malformed geometric(r)");
      const std::string inner = weights.substr(10, weights.size() - 11);
      const double r = p.to_double("physics.weights", Entry{trim(inner), p.line_of("physics.weights")});
      if (cfg.wavefunctions < 1) throw Error(ErrorCode::Constraint, "physics.wavefunctions: K must be >= 1");
      cfg.weights = geometric_weights(cfg.wavefunctions, r);
    } else {
      auto w = p.number_list("physics.weights");
      if (has_count && w.size() != cfg.wavefunctions)
        throw Error(ErrorCode::Constraint, "physics.weights: count does not match physics.wavefunctions");
      cfg.wavefunctions = w.size();
      cfg.weights = normalize_weights(std::move(w));
    }
    if (cfg.wavefunctions > cfg.domain.mode_count())
      throw Error(ErrorCode::Constraint, "physics.wavefunctions: K exceeds the number of retained modes");
  });

  guarded([&] {
    cfg.seed = static_cast<std::uint64_t>(p.count("initial.seed", 1));
    cfg.damping = p.number("initial.damping", 1.0);
    if (!(cfg.damping >= 0.0)) throw Error(ErrorCode::Constraint, "initial.damping: must be >= 0");
    cfg.snapshot = p.text("initial.snapshot", "");
  });

  guarded([&] {
    auto& in = cfg.integration;
    const std::string scheme = lower(p.text("integration.scheme", "strang"));
    if (scheme == "strang") in.scheme = Scheme::Strang;
    else if (scheme == "lie") in.scheme = Scheme::Lie;
    else if (scheme == "duhamel_midpoint") in.scheme = Scheme::DuhamelMidpoint;
    else throw Error(ErrorCode::Constraint, "integration.scheme: expected strang, lie or duhamel_midpoint");
    in.dt = p.number("integration.dt", 1e-3);
    in.steps = p.count("integration.steps", 1000);
    in.cadence = p.count("integration.cadence", 10);
    in.guard_factor = p.number("integration.guard_factor", 1e3);
    in.coupling = cfg.coupling ? Coupling::On : Coupling::Off;
    in.validate();
  });

  guarded([&] {
    cfg.directory = p.text("output.directory", "srsp_out");
    cfg.snapshot_cadence = p.count("output.snapshot_cadence", 0);
    cfg.plot = p.boolean("output.plot", false);
  });

  guarded([&] {
    cfg.trials = p.count("verify.trials", 100);
    if (cfg.trials < 1) throw Error(ErrorCode::Constraint, "verify.trials: must be >= 1");
    cfg.verify_seed = static_cast<std::uint64_t>(p.count("verify.seed", 1));
    cfg.tamper_eigenvalue = p.number("verify.tamper_eigenvalue", 1.0);
    if (!(cfg.tamper_eigenvalue > 0.0)) throw Error(ErrorCode::Constraint, "verify.tamper_eigenvalue: must be > 0");
  });

  guarded([&] {
    cfg.dt_levels = p.count("converge.dt_levels", 5);
    if (cfg.dt_levels < 4) throw Error(ErrorCode::Constraint, "converge.dt_levels: at least 4 levels required");
    cfg.n_levels = p.count("converge.mode_levels", 3);
    if (cfg.n_levels < 3) throw Error(ErrorCode::Constraint, "converge.mode_levels: at least 3 levels required");
    cfg.converge_dt = p.number("converge.dt", 1e-2);
    if (!(cfg.converge_dt > 0.0)) throw Error(ErrorCode::Constraint, "converge.dt: must be > 0");
    cfg.converge_time = p.number("converge.time", 0.5);
    if (!(cfg.converge_time > 0.0)) throw Error(ErrorCode::Constraint, "converge.time: must be > 0");
    cfg.reference_divisor = p.count("converge.reference_divisor", 16);
    if (cfg.reference_divisor < 2) throw Error(ErrorCode::Constraint, "converge.reference_divisor: must be >= 2");
  });
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), overrides);
}

}  // namespace srsp
