#include "sigmaflow_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/symfun.hpp"

namespace sigmaflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

long parse_integer(const std::string& token) {
  long v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ConfigError("expected an integer, got '" + token + "'");
  }
  return v;
}

struct Entry {
  int line = 0;
  std::vector<std::string> values;
};

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    if (line > 0) throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    throw ConfigError(source_ + ": " + msg);
  }

  void add(int line, const std::string& key, std::vector<std::string> values) {
    if (key == "psi0_mode") {
      modes_.push_back({line, std::move(values)});
      return;
    }
    if (entries_.count(key)) {
      fail(line, "duplicate key '" + key + "' (first set on line " +
                     std::to_string(entries_[key].line) + ")");
    }
    entries_[key] = {line, std::move(values)};
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  const Entry* single(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    if (it->second.values.size() != 1) fail(it->second.line, "'" + key + "' takes one value");
    return &it->second;
  }

  template <class F>
  auto convert(const Entry& e, const std::string& what, F f) const {
    try {
      return f(e.values[0]);
    } catch (const ConfigError& err) {
      fail(e.line, what + ": " + err.what());
    }
  }

  void integer(const std::string& key, int& out) const {
    if (const Entry* e = single(key)) {
      out = static_cast<int>(convert(*e, key, parse_integer));
    }
  }
  void real(const std::string& key, double& out) const {
    if (const Entry* e = single(key)) out = convert(*e, key, parse_number);
  }
  void text(const std::string& key, std::string& out) const {
    if (const Entry* e = single(key)) out = e->values[0];
  }
  void list(const std::string& key, std::vector<double>& out) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    out.clear();
    for (const std::string& v : it->second.values) {
      try {
        out.push_back(parse_number(v));
      } catch (const ConfigError& err) {
        fail(it->second.line, key + ": " + err.what());
      }
    }
  }

  const std::vector<Entry>& modes() const { return modes_; }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
  std::vector<Entry> modes_;
};

const char* const kKeys[] = {"n",   "k",      "N",      "mode",     "b",       "alpha",
                             "G_re", "G_im",  "H_re",   "H_im",     "psi0_mode", "dt0",
                             "t_max", "tol",  "log_every", "slack", "strict",  "theta",
                             "seed", "csv",   "report", "snapshot"};

bool known(const std::string& key) {
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

HermitianMatrix assemble(int n, const std::vector<double>& re, const std::vector<double>& im,
                         const char* name) {
  if (re.empty() && im.empty()) return HermitianMatrix::identity(n);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (re.size() != nn) {
    throw ConfigError(std::string(name) + "_re needs " + std::to_string(nn) + " entries");
  }
  if (!im.empty() && im.size() != nn) {
    throw ConfigError(std::string(name) + "_im needs " + std::to_string(nn) + " entries");
  }
  std::vector<cplx> e(nn);
  for (std::size_t i = 0; i < nn; ++i) e[i] = cplx(re[i], im.empty() ? 0.0 : im[i]);
  try {
    return HermitianMatrix(n, e);
  } catch (const std::exception& err) {
    throw ConfigError(std::string(name) + " is not Hermitian: " + err.what());
  }
}

}  // namespace

double parse_number(const std::string& token) {
  // term := factor (('*' | '/') factor)*, factor := (number | pi) ['^' integer]
  const std::string s = token;
  std::size_t pos = 0;
  double sign = 1.0;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
    if (s[pos] == '-') sign = -1.0;
    ++pos;
  }
  auto bad = [&]() -> ConfigError { return ConfigError("malformed number '" + token + "'"); };

  auto factor = [&]() {
    double v;
    if (s.compare(pos, 2, "pi") == 0) {
      v = std::numbers::pi;
      pos += 2;
    } else {
      const auto res = std::from_chars(s.data() + pos, s.data() + s.size(), v);
      if (res.ec != std::errc()) throw bad();
      pos = static_cast<std::size_t>(res.ptr - s.data());
    }
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      int e = 0;
      const auto res = std::from_chars(s.data() + pos, s.data() + s.size(), e);
      if (res.ec != std::errc()) throw bad();
      pos = static_cast<std::size_t>(res.ptr - s.data());
      v = std::pow(v, e);
    }
    return v;
  };

  double value = factor();
  while (pos < s.size()) {
    const char op = s[pos++];
    if (op == '*') {
      value *= factor();
    } else if (op == '/') {
      value /= factor();
    } else {
      throw bad();
    }
  }
  value *= sign;
  if (!std::isfinite(value)) throw ConfigError("non-finite number '" + token + "'");
  return value;
}

TorusGrid RunConfig::grid() const { return TorusGrid(n, N); }

Background RunConfig::background() const {
  Background bg;
  bg.G = assemble(n, G_re, G_im, "G");
  bg.H = assemble(n, H_re, H_im, "H");
  bg.k = k;
  if (augmented) {
    if (alpha) {
      bg.augment = {binomial(n, k - 1) / (*alpha * binomial(n, k))};
    } else {
      bg.augment = b;
    }
  }
  if (!psi0.empty()) {
    const TorusGrid g = grid();
    std::vector<FourierMode> modes;
    for (const ModeSpec& m : psi0) {
      FourierMode f;
      for (std::size_t a = 0; a < m.wave.size(); ++a) f.wave[a] = m.wave[a];
      f.amplitude = m.amplitude;
      f.phase = m.phase;
      modes.push_back(f);
    }
    bg.psi0 = PotentialField::from_modes(g, modes);
  }
  validate(bg);
  return bg;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  Reader r(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) r.fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) r.fail(line_no, "missing key before '='");
    if (!known(key)) r.fail(line_no, "unknown key '" + key + "'");
    std::vector<std::string> values = tokens(line.substr(eq + 1));
    if (values.empty()) r.fail(line_no, "key '" + key + "' has no value");
    r.add(line_no, key, std::move(values));
  }

  RunConfig c;
  r.integer("n", c.n);
  r.integer("k", c.k);
  r.integer("N", c.N);
  std::string mode = "plain";
  r.text("mode", mode);
  if (mode == "augmented") {
    c.augmented = true;
  } else if (mode != "plain") {
    r.fail(r.line("mode"), "mode must be 'plain' or 'augmented', got '" + mode + "'");
  }
  r.list("b", c.b);
  if (r.has("alpha")) {
    double a = 0.0;
    r.real("alpha", a);
    c.alpha = a;
  }
  r.list("G_re", c.G_re);
  r.list("G_im", c.G_im);
  r.list("H_re", c.H_re);
  r.list("H_im", c.H_im);
  r.real("dt0", c.flow.dt0);
  r.real("t_max", c.flow.t_max);
  r.real("tol", c.flow.tol);
  r.integer("log_every", c.flow.log_every);
  r.real("slack", c.flow.slack);
  if (r.has("strict")) {
    std::string s;
    r.text("strict", s);
    if (s != "true" && s != "false") r.fail(r.line("strict"), "strict must be true or false");
    c.flow.strict = s == "true";
  }
  r.real("theta", c.theta);
  if (const Entry* e = r.single("seed")) {
    const long s = r.convert(*e, "seed", parse_integer);
    if (s < 0) r.fail(e->line, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  r.text("csv", c.csv);
  r.text("report", c.report);
  r.text("snapshot", c.snapshot);

  if (c.n < 1 || c.n > kMaxDim) r.fail(r.line("n"), "n must lie in [1, 4]");
  if (c.k < 1 || c.k > c.n) r.fail(r.line("k"), "k must lie in [1, n]");
  if (c.N < 8 || (c.N & (c.N - 1)) != 0) r.fail(r.line("N"), "N must be a power of two >= 8");
  if (!(c.flow.t_max >= 0.0)) r.fail(r.line("t_max"), "t_max must be nonnegative");
  if (!(c.flow.tol > 0.0)) r.fail(r.line("tol"), "tol must be positive");
  if (!(c.flow.dt0 >= 0.0)) r.fail(r.line("dt0"), "dt0 must be nonnegative");
  if (c.flow.log_every < 1) r.fail(r.line("log_every"), "log_every must be at least 1");
  if (!(c.flow.slack >= 0.0)) r.fail(r.line("slack"), "slack must be nonnegative");
  if (!(c.theta > 0.0)) r.fail(r.line("theta"), "theta must be positive");

  if (c.augmented) {
    if (c.alpha && !c.b.empty()) r.fail(r.line("alpha"), "give either b or alpha, not both");
    if (!c.alpha && c.b.empty()) r.fail(r.line("mode"), "augmented mode needs b or alpha");
    if (c.alpha && !(*c.alpha > 0.0)) r.fail(r.line("alpha"), "alpha must be positive");
    for (double v : c.b)
      if (!(v > 0.0)) r.fail(r.line("b"), "b entries must be positive");
    const int p = c.alpha ? 1 : static_cast<int>(c.b.size());
    if (c.n + p > kMaxDim) r.fail(r.line(c.alpha ? "alpha" : "b"), "n + len(b) must not exceed 4");
  } else if (!c.b.empty()) {
    r.fail(r.line("b"), "b requires mode = augmented");
  }

  const std::size_t nn = static_cast<std::size_t>(c.n) * c.n;
  for (const char* key : {"G_re", "G_im", "H_re", "H_im"}) {
    std::vector<double> v;
    r.list(key, v);
    if (r.has(key) && v.size() != nn) {
      r.fail(r.line(key), std::string(key) + " needs " + std::to_string(nn) + " entries, got " +
                              std::to_string(v.size()));
    }
  }
  if ((r.has("G_im") && !r.has("G_re")) || (r.has("H_im") && !r.has("H_re"))) {
    r.fail(r.has("G_im") && !r.has("G_re") ? r.line("G_im") : r.line("H_im"),
           "imaginary part given without the real part");
  }

  for (const Entry& e : r.modes()) {
    const std::size_t want = 2 * static_cast<std::size_t>(c.n) + 2;
    if (e.values.size() != want) {
      r.fail(e.line, "psi0_mode needs " + std::to_string(2 * c.n) +
                         " wave numbers, an amplitude and a phase");
    }
    ModeSpec m;
    try {
      for (int a = 0; a < 2 * c.n; ++a) m.wave.push_back(static_cast<int>(parse_integer(e.values[a])));
      m.amplitude = parse_number(e.values[2 * c.n]);
      m.phase = parse_number(e.values[2 * c.n + 1]);
    } catch (const ConfigError& err) {
      r.fail(e.line, std::string("psi0_mode: ") + err.what());
    }
    c.psi0.push_back(std::move(m));
  }

  // Matrices and modes are checked one by one so errors point at their line.
  auto check = [&](int line, auto&& f) {
    try {
      f();
    } catch (const std::exception& err) {
      r.fail(line, err.what());
    }
  };
  check(r.line("G_re"), [&] {
    MetricFrame frame(assemble(c.n, c.G_re, c.G_im, "G"));
  });
  check(r.line("H_re"), [&] {
    try {
      MetricFrame frame(assemble(c.n, c.H_re, c.H_im, "H"));
    } catch (const DomainError&) {
      throw ConfigError("H is not positive definite");
    }
  });
  for (std::size_t m = 0; m < c.psi0.size(); ++m) {
    check(r.modes()[m].line, [&] {
      RunConfig single = c;
      single.psi0 = {c.psi0[m]};
      (void)single.background();
    });
  }
  check(0, [&] { (void)c.background(); });
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return parse_config(in, path);
}

}  // namespace sigmaflow::cli
