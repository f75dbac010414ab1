#include "tgp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

/// Key lookup that remembers which keys were consumed.
class Reader {
 public:
  explicit Reader(const FlatConfig& flat) {
    for (const auto& [k, v] : flat) values_.emplace(k, v);
  }

  std::optional<std::string> take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  }

  double number(const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? parse_number(key, *v) : fallback;
  }

  long integer(const std::string& key, long fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    long out = 0;
    const auto* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': expected an integer, got '" + *v + "'");
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + *v + "'");
  }

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
      if (k.starts_with(prefix)) out.push_back(k);
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [k, v] : values_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ConfigError("unknown key '" + k + "'");
      }
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> used_;
};

template <typename F>
auto as_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    if (std::string_view(e.what()).starts_with("key '")) throw;
    throw ConfigError("key '" + key + "': " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

KernelSpec read_law(Reader& r, const std::string& channel) {
  const std::string prefix = "law." + channel + ".";
  const std::string variant = r.take(prefix + "variant").value_or("fourier");
  const LawKind kind = as_config_error(prefix + "variant", [&] { return parse_law_tag(variant); });
  auto kernel = [&] {
    const bool unit = r.boolean(prefix + "kernel.unit_mass", false);
    return parse_terms(prefix + "kernel.terms", r.require(prefix + "kernel.terms"), unit);
  };
  switch (kind) {
    case LawKind::Fourier:
      return Fourier{};
    case LawKind::GurtinPipkin: {
      PronyKernel k = kernel();
      return as_config_error(prefix + "kernel.terms", [&] { return KernelSpec(GurtinPipkin{k}); });
    }
    case LawKind::Cattaneo: {
      const double tau = parse_number(prefix + "tau", r.require(prefix + "tau"));
      return as_config_error(prefix + "tau", [&] { return KernelSpec(Cattaneo{tau}); });
    }
    case LawKind::ColemanGurtin: {
      const double ell = parse_number(prefix + "ell", r.require(prefix + "ell"));
      PronyKernel k = kernel();
      return as_config_error(prefix + "ell", [&] { return KernelSpec(ColemanGurtin{ell, k}); });
    }
  }
  throw ConfigError("unreachable law variant");
}

void echo_law(FlatConfig& out, const std::string& channel, const KernelSpec& law) {
  const std::string prefix = "law." + channel + ".";
  out.emplace_back(prefix + "variant", law_tag(law.kind()));
  auto kernel = [&](const PronyKernel& k) {
    out.emplace_back(prefix + "kernel.terms", format_terms(k));
    out.emplace_back(prefix + "kernel.unit_mass", k.unit_mass() ? "true" : "false");
  };
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GurtinPipkin>) {
          kernel(l.kernel);
        } else if constexpr (std::is_same_v<T, Cattaneo>) {
          out.emplace_back(prefix + "tau", format_number(l.tau));
        } else if constexpr (std::is_same_v<T, ColemanGurtin>) {
          out.emplace_back(prefix + "ell", format_number(l.ell));
          kernel(l.kernel);
        }
      },
      law.law());
}

BoundarySet parse_bcs(const std::string& key, const std::string& v) {
  if (v == "mixed") return BoundarySet::MixedDN;
  if (v == "dirichlet") return BoundarySet::FullDirichlet;
  throw ConfigError("key '" + key + "': expected mixed or dirichlet, got '" + v + "'");
}

ModelConfig read_model(Reader& r) {
  ModelConfig c;
  for (const auto& name : param_names()) {
    param_ref(c.params, name) = r.number("params." + name, 1.0);
  }
  as_config_error("params", [&] {
    c.params.validate();
    return 0;
  });
  c.law_theta = read_law(r, "theta");
  c.law_xi = read_law(r, "xi");
  if (auto v = r.take("bcs")) c.bcs = parse_bcs("bcs", *v);
  c.cells = static_cast<int>(r.integer("mesh.n", 32));
  if (c.cells < 2) throw ConfigError("key 'mesh.n': need at least 2 cells");
  return c;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) {
    if (item.empty()) throw ConfigError("key '" + key + "': empty list entry");
    out.push_back(parse_number(key, item));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FlatConfig parse_flat(std::string_view text) {
  FlatConfig out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : out) {
      if (k == key) throw ConfigError("duplicate key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

FlatConfig read_flat(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_flat(buf.str());
}

std::string format_flat(const FlatConfig& flat) {
  std::string out;
  for (const auto& [k, v] : flat) out += k + " = " + v + "\n";
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_number(const std::string& key, const std::string& value) {
  double out = 0.0;
  const std::string s = trim(value);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
  return out;
}

std::string format_terms(const PronyKernel& k) {
  std::string out;
  for (const auto& t : k.terms()) {
    if (!out.empty()) out += ", ";
    out += format_number(t.weight) + ":" + format_number(t.rate);
  }
  return out;
}

PronyKernel parse_terms(const std::string& key, const std::string& value, bool unit_mass) {
  if (trim(value).empty()) throw ConfigError("key '" + key + "': empty term list");
  std::vector<PronyTerm> terms;
  for (const auto& item : split(value, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("key '" + key + "': term '" + item + "' is not 'c:b'");
    terms.push_back({parse_number(key, item.substr(0, colon)), parse_number(key, item.substr(colon + 1))});
  }
  return as_config_error(key, [&] { return PronyKernel(std::move(terms), unit_mass); });
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names{"rho1", "rho2",  "rho3",  "rho4",   "k",     "b",
                                              "gamma", "sigma", "varpi1", "varpi2", "L"};
  return names;
}

double& param_ref(PhysicalParams& p, std::string_view name) {
  if (name == "rho1") return p.rho1;
  if (name == "rho2") return p.rho2;
  if (name == "rho3") return p.rho3;
  if (name == "rho4") return p.rho4;
  if (name == "k") return p.k;
  if (name == "b") return p.b;
  if (name == "gamma") return p.gamma;
  if (name == "sigma") return p.sigma;
  if (name == "varpi1") return p.varpi1;
  if (name == "varpi2") return p.varpi2;
  if (name == "L") return p.length;
  throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double param_value(const PhysicalParams& p, std::string_view name) {
  PhysicalParams copy = p;
  return param_ref(copy, name);
}

ModelConfig parse_model(std::string_view text) {
  Reader r(parse_flat(text));
  ModelConfig c = read_model(r);
  r.reject_unused();
  return c;
}

FlatConfig echo_model(const ModelConfig& config) {
  FlatConfig out;
  for (const auto& name : param_names()) {
    out.emplace_back("params." + name, format_number(param_value(config.params, name)));
  }
  echo_law(out, "theta", config.law_theta);
  echo_law(out, "xi", config.law_xi);
  out.emplace_back("bcs", bcs_tag(config.bcs));
  out.emplace_back("mesh.n", std::to_string(config.cells));
  return out;
}

bool same_model(const ModelConfig& a, const ModelConfig& b) { return echo_model(a) == echo_model(b); }

// ---------------------------------------------------------------------------

std::string study_tag(StudyKind kind) {
  switch (kind) {
    case StudyKind::Simulate: return "simulate";
    case StudyKind::Spectrum: return "spectrum";
    case StudyKind::Resolvent: return "resolvent";
    case StudyKind::Sweep: return "sweep";
    case StudyKind::Combo: return "combo";
    case StudyKind::CattaneoEquivalence: return "cattaneo-eq";
    case StudyKind::SingularLimit: return "limit";
  }
  return "?";
}

StudyKind parse_study_tag(const std::string& tag) {
  for (auto k : {StudyKind::Simulate, StudyKind::Spectrum, StudyKind::Resolvent, StudyKind::Sweep, StudyKind::Combo,
                 StudyKind::CattaneoEquivalence, StudyKind::SingularLimit}) {
    if (study_tag(k) == tag) return k;
  }
  throw ConfigError("unknown study kind '" + tag + "'");
}

std::vector<ParamRange> default_sweep_ranges() {
  std::vector<ParamRange> out;
  for (const char* n : {"rho1", "rho2", "k", "b", "gamma", "sigma", "varpi1", "varpi2"}) out.push_back({n, 0.1, 10.0});
  return out;
}

void StudySpec::validate() const {
  if (simulate.dt <= 0.0 || !(simulate.t_final > 0.0)) throw ConfigError("simulate.dt and simulate.t_final must be > 0");
  if (!(simulate.transient >= 0.0 && simulate.transient < 1.0)) throw ConfigError("simulate.transient must lie in [0, 1)");
  if (!(resolvent.lambda_min > 0.0 && resolvent.lambda_max > resolvent.lambda_min)) {
    throw ConfigError("resolvent range needs 0 < lambda_min < lambda_max");
  }
  if (resolvent.log_points < 1 || resolvent.refine_points < 0 || resolvent.anchored_eigenvalues < 0) {
    throw ConfigError("resolvent point counts must be non-negative (log points >= 1)");
  }
  if (sweep.draws < 0) throw ConfigError("sweep.draws must be >= 0");
  if (sweep.ranges.empty()) throw ConfigError("sweep ranges are empty");
  for (const auto& r : sweep.ranges) {
    if (!(r.lo > 0.0 && r.hi >= r.lo)) throw ConfigError("sweep.range." + r.name + " needs 0 < lo <= hi");
  }
  if (limit.eps.empty()) throw ConfigError("limit.eps ladder is empty");
  for (std::size_t i = 0; i < limit.eps.size(); ++i) {
    if (!(limit.eps[i] > 0.0 && limit.eps[i] <= 1.0)) throw ConfigError("limit.eps entries must lie in (0, 1]");
    if (i > 0 && !(limit.eps[i] < limit.eps[i - 1])) throw ConfigError("limit.eps ladder must be strictly decreasing");
  }
  if (limit.target != LawKind::Fourier && limit.target != LawKind::ColemanGurtin) {
    throw ConfigError("limit.target must be fourier or cg");
  }
  if (!(limit.ell > 0.0 && limit.ell < 1.0)) throw ConfigError("limit.ell must lie in (0, 1)");
  if (limit.tracked < 1) throw ConfigError("limit.tracked must be >= 1");
}

StudySpec parse_study(std::string_view text) {
  Reader r(parse_flat(text));
  StudySpec s;
  s.base = read_model(r);
  if (auto v = r.take("study.kind")) s.kind = parse_study_tag(*v);
  s.seed = static_cast<std::uint64_t>(r.integer("study.seed", 1));
  s.output = r.take("study.output").value_or("");
  s.plot = r.boolean("study.plot", false);
  const long threads = r.integer("study.threads", 0);
  if (threads < 0) throw ConfigError("key 'study.threads' must be >= 0");
  s.threads = static_cast<unsigned>(threads);
  const std::string bcs = r.take("study.bcs").value_or(bcs_tag(s.base.bcs));
  if (bcs == "both") {
    s.bcs_list = {BoundarySet::MixedDN, BoundarySet::FullDirichlet};
  } else {
    s.bcs_list = {parse_bcs("study.bcs", bcs)};
  }

  s.simulate.dt = r.number("simulate.dt", s.simulate.dt);
  s.simulate.t_final = r.number("simulate.t_final", s.simulate.t_final);
  s.simulate.transient = r.number("simulate.transient", s.simulate.transient);
  if (auto v = r.take("simulate.initial")) {
    if (*v == "dominant") {
      s.simulate.initial = StudySpec::Simulate::Initial::Dominant;
    } else if (*v == "random") {
      s.simulate.initial = StudySpec::Simulate::Initial::Random;
    } else {
      throw ConfigError("key 'simulate.initial': expected dominant or random, got '" + *v + "'");
    }
  }

  auto& g = s.resolvent;
  g.lambda_min = r.number("resolvent.lambda_min", g.lambda_min);
  g.lambda_max = r.number("resolvent.lambda_max", g.lambda_max);
  g.log_points = static_cast<int>(r.integer("resolvent.points", g.log_points));
  g.anchored_eigenvalues = static_cast<int>(r.integer("resolvent.anchors", g.anchored_eigenvalues));
  g.refine_points = static_cast<int>(r.integer("resolvent.refine_points", g.refine_points));
  g.refine_halfwidth = r.number("resolvent.refine_halfwidth", g.refine_halfwidth);

  s.sweep.draws = static_cast<int>(r.integer("sweep.draws", s.sweep.draws));
  s.sweep.wave_speed_slices = r.boolean("sweep.wave_speed_slices", s.sweep.wave_speed_slices);
  s.sweep.diagnostic_zero_damping = r.boolean("sweep.diagnostic_zero_damping", s.sweep.diagnostic_zero_damping);
  s.sweep.threshold = r.number("sweep.threshold", s.sweep.threshold);
  s.sweep.ranges = default_sweep_ranges();
  for (const auto& key : r.keys_with_prefix("sweep.range.")) {
    const std::string name = key.substr(std::string("sweep.range.").size());
    as_config_error(key, [&] { return param_ref(s.base.params, name); });
    const auto values = split(*r.take(key), ',');
    if (values.size() == 1 && values[0].empty()) throw ConfigError("key '" + key + "': empty range");
    if (values.size() != 2) throw ConfigError("key '" + key + "': expected 'lo, hi'");
    const ParamRange range{name, parse_number(key, values[0]), parse_number(key, values[1])};
    auto it = std::find_if(s.sweep.ranges.begin(), s.sweep.ranges.end(),
                           [&](const ParamRange& p) { return p.name == name; });
    if (it != s.sweep.ranges.end()) {
      *it = range;
    } else {
      s.sweep.ranges.push_back(range);
    }
  }

  if (auto v = r.take("combo.kernel.terms")) s.combo.kernel = parse_terms("combo.kernel.terms", *v, false);
  s.combo.tau = r.number("combo.tau", s.combo.tau);
  s.combo.ell = r.number("combo.ell", s.combo.ell);

  s.cattaneo.tau = r.number("cattaneo.tau", s.cattaneo.tau);
  s.cattaneo.varsigma = r.number("cattaneo.varsigma", s.cattaneo.varsigma);
  s.cattaneo.threshold = r.number("cattaneo.threshold", s.cattaneo.threshold);

  if (auto v = r.take("limit.eps")) s.limit.eps = parse_list("limit.eps", *v);
  if (auto v = r.take("limit.target")) {
    s.limit.target = as_config_error("limit.target", [&] { return parse_law_tag(*v); });
  }
  s.limit.ell = r.number("limit.ell", s.limit.ell);
  if (auto v = r.take("limit.kernel.terms")) s.limit.kernel = parse_terms("limit.kernel.terms", *v, false);
  s.limit.tracked = static_cast<int>(r.integer("limit.tracked", s.limit.tracked));
  s.limit.threshold = r.number("limit.threshold", s.limit.threshold);

  r.reject_unused();
  s.validate();
  return s;
}

StudySpec load_study(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_study(buf.str());
}

}  // namespace tgp
