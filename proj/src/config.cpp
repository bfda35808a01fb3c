#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "fttc/error.hpp"
#include "fttc/runner.hpp"

namespace fttc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void key_error(std::string_view key, const std::string& what) {
  throw_config("config key '" + std::string(key) + "': " + what);
}

double to_double(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    key_error(key, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::size_t to_size(std::string_view key, std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    key_error(key, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  key_error(key, "expected true or false, got '" + std::string(s) + "'");
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T, class F>
std::vector<T> to_list(std::string_view key, std::string_view s, F conv) {
  std::vector<T> out;
  for (auto item : split_list(s)) out.push_back(conv(key, item));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out;
}

const char* model_name(ModelKind m) { return m == ModelKind::dna ? "dna" : "harmonic"; }
const char* format_name(StateFormat f) { return f == StateFormat::tt ? "tt" : "ft"; }
const char* scheme_name(RunScheme s) {
  switch (s) {
    case RunScheme::chebyshev_recurrence: return "chebyshev-recurrence";
    case RunScheme::chebyshev_clenshaw: return "chebyshev-clenshaw";
    case RunScheme::soft: return "soft";
  }
  return "";
}

struct Key {
  const char* name;
  const char* help;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class M>
Key double_key(const char* name, const char* help, M member) {
  return {name, help, [=](RunConfig& c, std::string_view v) { c.*member = to_double(name, v); },
          [=](const RunConfig& c) { return format_double(c.*member); }};
}

template <class M>
Key size_key(const char* name, const char* help, M member) {
  return {name, help, [=](RunConfig& c, std::string_view v) { c.*member = to_size(name, v); },
          [=](const RunConfig& c) { return std::to_string(c.*member); }};
}

template <class M>
Key bool_key(const char* name, const char* help, M member) {
  return {name, help, [=](RunConfig& c, std::string_view v) { c.*member = to_bool(name, v); },
          [=](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

template <class M>
Key string_key(const char* name, const char* help, M member) {
  return {name, help, [=](RunConfig& c, std::string_view v) { c.*member = std::string(trim(v)); },
          [=](const RunConfig& c) { return c.*member; }};
}

template <class M>
Key doubles_key(const char* name, const char* help, M member) {
  return {name, help,
          [=](RunConfig& c, std::string_view v) { c.*member = to_list<double>(name, v, to_double); },
          [=](const RunConfig& c) { return join(c.*member); }};
}

template <class M>
Key sizes_key(const char* name, const char* help, M member) {
  return {name, help,
          [=](RunConfig& c, std::string_view v) {
            c.*member = to_list<std::size_t>(name, v, to_size);
          },
          [=](const RunConfig& c) { return join(c.*member); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"model", "potential model: dna | harmonic",
       [](RunConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "dna") c.model = ModelKind::dna;
         else if (v == "harmonic") c.model = ModelKind::harmonic;
         else key_error("model", "expected dna or harmonic, got '" + std::string(v) + "'");
       },
       [](const RunConfig& c) { return std::string(model_name(c.model)); }},
      double_key("alpha_scale", "dna potential scale [au]", &RunConfig::alpha_scale),
      double_key("beta", "dna nearest-neighbour coupling, applied to every bond [au]",
                 &RunConfig::beta),
      double_key("omega", "harmonic frequency [au]", &RunConfig::omega),
      size_key("dim", "number of coordinates D", &RunConfig::dim),
      doubles_key("x_min", "lower domain bound per coordinate [au]", &RunConfig::x_min),
      doubles_key("x_max", "upper domain bound per coordinate [au]", &RunConfig::x_max),
      sizes_key("n", "grid points per coordinate, power of two", &RunConfig::n),
      size_key("degree", "Legendre degree per coordinate for format = ft", &RunConfig::degree),
      {"format", "state representation: tt (grid) | ft (functional)",
       [](RunConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "tt") c.format = StateFormat::tt;
         else if (v == "ft") c.format = StateFormat::ft;
         else key_error("format", "expected tt or ft, got '" + std::string(v) + "'");
       },
       [](const RunConfig& c) { return std::string(format_name(c.format)); }},
      double_key("mass", "particle mass [au]", &RunConfig::mass),
      double_key("width", "initial Gaussian width w [au]", &RunConfig::width),
      doubles_key("x0", "initial Gaussian centre per coordinate [au]", &RunConfig::x0),
      doubles_key("p0", "initial Gaussian momentum per coordinate [au]", &RunConfig::p0),
      {"scheme", "propagator: chebyshev-recurrence | chebyshev-clenshaw | soft",
       [](RunConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "chebyshev-recurrence") c.scheme = RunScheme::chebyshev_recurrence;
         else if (v == "chebyshev-clenshaw") c.scheme = RunScheme::chebyshev_clenshaw;
         else if (v == "soft") c.scheme = RunScheme::soft;
         else key_error("scheme", "unknown scheme '" + std::string(v) + "'");
       },
       [](const RunConfig& c) { return std::string(scheme_name(c.scheme)); }},
      double_key("t_final", "final time [au]", &RunConfig::t_final),
      double_key("tau", "checkpoint interval [au]", &RunConfig::tau),
      size_key("n_terms", "Chebyshev terms per step", &RunConfig::n_terms),
      bool_key("auto_trim", "stop the Chebyshev series once the Bessel weights are negligible",
               &RunConfig::auto_trim),
      double_key("dt", "split-operator step for scheme = soft [au]", &RunConfig::dt),
      double_key("round_tol", "relative rounding tolerance", &RunConfig::round_tol),
      size_key("rmax", "rank cap", &RunConfig::rmax),
      string_key("out_dir", "output directory", &RunConfig::out_dir),
      doubles_key("slice_times", "times at which density slices are written [au]",
                  &RunConfig::slice_times),
      size_key("slice_p", "first slice coordinate (0-based)", &RunConfig::slice_p),
      size_key("slice_q", "second slice coordinate (0-based)", &RunConfig::slice_q),
      bool_key("slice_reduced", "also write reduced densities (tt only)",
               &RunConfig::slice_reduced),
      size_key("checkpoint_every", "state checkpoint every k intervals, 0 = final only",
               &RunConfig::checkpoint_every),
      string_key("resume_from", "checkpoint file to resume from (empty = start at t = 0)",
                 &RunConfig::resume_from),
      double_key("resume_time", "time of the resume checkpoint [au]", &RunConfig::resume_time),
      sizes_key("n_list", "term counts for the convergence study", &RunConfig::n_list),
      doubles_key("t_list", "final times for the convergence study [au]", &RunConfig::t_list),
      doubles_key("dt_list", "step lengths for the split-operator comparison [au]",
                  &RunConfig::dt_list),
  };
  return table;
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

/// k with |k step - total| <= 1e-12 max(1, total), or nothing.
bool divides(double step, double total, std::size_t* k) {
  const double q = std::round(total / step);
  if (q < 0 || std::abs(q * step - total) > 1e-12 * std::max(1.0, std::abs(total))) return false;
  if (k) *k = static_cast<std::size_t>(q);
  return true;
}

template <class T>
void check_broadcast(const char* key, const std::vector<T>& v, std::size_t dim) {
  if (v.size() != 1 && v.size() != dim) {
    key_error(key, "expected 1 or " + std::to_string(dim) + " values, got " +
                       std::to_string(v.size()));
  }
}

template <class T>
T at(const std::vector<T>& v, std::size_t i) {
  return v.size() == 1 ? v[0] : v[i];
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void RunConfig::validate() const {
  if (dim < 1) key_error("dim", "must be at least 1");
  if (!(mass > 0.0)) key_error("mass", "must be positive");
  if (model == ModelKind::dna && !(alpha_scale > 0.0)) key_error("alpha_scale", "must be positive");
  if (model == ModelKind::harmonic && !(omega >= 0.0)) key_error("omega", "must be non-negative");
  check_broadcast("x_min", x_min, dim);
  check_broadcast("x_max", x_max, dim);
  check_broadcast("n", n, dim);
  check_broadcast("x0", x0, dim);
  check_broadcast("p0", p0, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(at(x_max, i) > at(x_min, i))) key_error("x_max", "must exceed x_min");
    if (!power_of_two(at(n, i))) {
      key_error("n", "must be a power of two >= 2, got " + std::to_string(at(n, i)));
    }
  }
  if (format == StateFormat::ft && degree < 2) key_error("degree", "must be at least 2");
  if (!(width > 0.0)) key_error("width", "must be positive");
  if (!(t_final >= 0.0)) key_error("t_final", "must be non-negative");
  if (!(tau > 0.0)) key_error("tau", "must be positive");
  if (!divides(tau, t_final, nullptr)) key_error("tau", "must divide t_final");
  if (n_terms < 1) key_error("n_terms", "must be at least 1");
  if (!(round_tol >= 0.0)) key_error("round_tol", "must be non-negative");
  if (rmax < 1) key_error("rmax", "must be at least 1");
  if (scheme == RunScheme::soft) {
    if (format != StateFormat::tt) key_error("scheme", "soft requires format = tt");
    if (!(dt > 0.0)) key_error("dt", "must be positive");
    if (!divides(dt, tau, nullptr)) key_error("dt", "must divide tau");
  }
  if (!slice_times.empty()) {
    if (dim < 2) key_error("slice_times", "slices need dim >= 2");
    if (slice_p >= dim) key_error("slice_p", "out of range");
    if (slice_q >= dim) key_error("slice_q", "out of range");
    if (slice_p == slice_q) key_error("slice_q", "must differ from slice_p");
    for (double t : slice_times) {
      std::size_t k = 0;
      if (!(t >= 0.0) || t > t_final * (1 + 1e-12) || !divides(tau, t, &k)) {
        key_error("slice_times", "every time must be a multiple of tau within [0, t_final]");
      }
    }
  }
  if (slice_reduced && format != StateFormat::tt) key_error("slice_reduced", "requires format = tt");
  if (!resume_from.empty()) {
    if (!(resume_time >= 0.0) || resume_time > t_final * (1 + 1e-12) ||
        !divides(tau, resume_time, nullptr)) {
      key_error("resume_time", "must be a multiple of tau within [0, t_final]");
    }
  }
  for (std::size_t v : n_list) {
    if (v < 1) key_error("n_list", "entries must be at least 1");
  }
  for (double v : t_list) {
    if (!(v >= 0.0)) key_error("t_list", "entries must be non-negative");
  }
  for (double v : dt_list) {
    if (!(v > 0.0)) key_error("dt_list", "entries must be positive");
  }
}

HamiltonianSpec RunConfig::hamiltonian() const {
  if (model == ModelKind::dna) return {mass, DnaModel{alpha_scale, beta}};
  return {mass, HarmonicModel{omega}};
}

GridSpec RunConfig::grid() const {
  GridSpec g;
  for (std::size_t i = 0; i < dim; ++i) g.axes.push_back({at(x_min, i), at(x_max, i), at(n, i)});
  return g;
}

std::vector<Basis> RunConfig::bases() const {
  std::vector<Basis> out;
  for (std::size_t i = 0; i < dim; ++i) out.push_back({at(x_min, i), at(x_max, i), degree});
  return out;
}

GaussianParams RunConfig::gaussian() const {
  GaussianParams g{width, {}, {}};
  for (std::size_t i = 0; i < dim; ++i) {
    g.x0.push_back(at(x0, i));
    g.p0.push_back(at(p0, i));
  }
  return g;
}

std::size_t RunConfig::checkpoints() const {
  std::size_t k = 0;
  if (!divides(tau, t_final, &k)) key_error("tau", "must divide t_final");
  return k;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw_config("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const auto it = std::find_if(keys().begin(), keys().end(),
                                 [&](const Key& k) { return key == k.name; });
    if (it == keys().end()) key_error(key, "unknown key (line " + std::to_string(line_no) + ")");
    if (!seen.insert(std::string(key)).second) key_error(key, "given more than once");
    it->set(c, line.substr(eq + 1));
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string print_config(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(c) + "\n";
  return out;
}

std::string default_config_text() {
  const RunConfig c;
  std::string out;
  for (const auto& k : keys()) {
    out += "# " + std::string(k.help) + "\n" + k.name + " = " + k.get(c) + "\n";
  }
  return out;
}

}  // namespace fttc
