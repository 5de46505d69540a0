#include "micromacro/sweep.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "micromacro/metrics.hpp"
#include "micromacro/witnesses.hpp"

namespace micromacro {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty entry in grid '" + text + "'");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_number(parts[0]));
    } else if (parts.size() == 3) {
      const double a = parse_number(parts[0]);
      const double b = parse_number(parts[1]);
      const double n = parse_number(parts[2]);
      if (n < 1 || n != std::floor(n)) throw ConfigError("linspace count must be a positive integer");
      const int count = static_cast<int>(n);
      for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    } else {
      throw ConfigError("grid entry '" + item + "' is neither a number nor start:stop:count");
    }
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// RunConfig

RunConfig RunConfig::parse(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  cfg.format.clear();
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(number) + ": empty key or value");
    if (key == "experiment") cfg.experiment = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else cfg.settings[key].push_back(value);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void RunConfig::merge(const RunConfig& overrides) {
  if (!overrides.experiment.empty()) experiment = overrides.experiment;
  if (!overrides.out.empty()) out = overrides.out;
  if (!overrides.format.empty()) format = overrides.format;
  for (const auto& [key, values] : overrides.settings) settings[key] = values;
}

bool RunConfig::has(const std::string& key) const { return settings.count(key) > 0; }

std::vector<double> RunConfig::reals(const std::string& key,
                                     const std::vector<double>& fallback) const {
  auto it = settings.find(key);
  if (it == settings.end()) return fallback;
  std::vector<double> out;
  for (const auto& v : it->second) {
    const auto grid = parse_grid(v);
    out.insert(out.end(), grid.begin(), grid.end());
  }
  if (out.empty()) throw ConfigError("grid '" + key + "' is empty");
  return out;
}

std::vector<int> RunConfig::integers(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (double x : reals(key, {})) {
    if (x != std::floor(x) || std::abs(x) > 1e9)
      throw ConfigError("'" + key + "' needs integer values, got " + format_double(x));
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<std::string> RunConfig::texts(const std::string& key,
                                          const std::vector<std::string>& fallback) const {
  auto it = settings.find(key);
  if (it == settings.end()) return fallback;
  std::vector<std::string> out;
  for (const auto& v : it->second)
    for (const auto& s : split(v, ','))
      if (!s.empty()) out.push_back(s);
  if (out.empty()) throw ConfigError("'" + key + "' is empty");
  return out;
}

double RunConfig::real(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const auto v = reals(key, {});
  if (v.size() != 1) throw ConfigError("'" + key + "' takes a single value");
  return v[0];
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto v = texts(key, {});
  if (v.size() != 1) throw ConfigError("'" + key + "' takes a single value");
  return v[0];
}

std::uint64_t RunConfig::hash() const {
  std::string canon = experiment + "\n";
  for (const auto& [key, values] : settings) {
    canon += key + "=";
    for (const auto& v : values) {
      try {
        for (double x : parse_grid(v)) canon += format_double(x) + ",";
      } catch (const ConfigError&) {
        canon += v + ",";
      }
    }
    canon += "\n";
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

struct Common {
  double tail_tolerance = 1e-10;
  std::optional<int> fixed_cutoff;
  int max_cutoff = 600;

  int cutoff_for(double g) const {
    const GainParams gain{g};
    if (fixed_cutoff) {
      const double tail = macro_qubit_tail_mass(gain, *fixed_cutoff);
      if (tail > tail_tolerance)
        throw CutoffError("cutoff " + std::to_string(*fixed_cutoff) + " leaves tail mass " +
                              format_double(tail) + " at g=" + format_double(g),
                          tail, *fixed_cutoff);
      return *fixed_cutoff;
    }
    const int n = required_cutoff(gain, tail_tolerance);
    if (n > max_cutoff)
      throw CutoffError("g=" + format_double(g) + " needs cutoff " + std::to_string(n) +
                            " above max-cutoff " + std::to_string(max_cutoff),
                        macro_qubit_tail_mass(gain, max_cutoff), max_cutoff);
    return n;
  }
};

Common read_common(const RunConfig& cfg) {
  Common c;
  c.tail_tolerance = cfg.real("tail-tol", 1e-10);
  if (!(c.tail_tolerance > 0.0 && c.tail_tolerance < 1.0))
    throw ConfigError("tail-tol must lie in (0, 1)");
  if (cfg.has("cutoff")) {
    const auto v = cfg.integers("cutoff", {});
    if (v.size() != 1 || v[0] < 1) throw ConfigError("cutoff takes a single integer >= 1");
    c.fixed_cutoff = v[0];
  }
  const auto mc = cfg.integers("max-cutoff", {600});
  if (mc.size() != 1 || mc[0] < 1) throw ConfigError("max-cutoff takes a single integer >= 1");
  c.max_cutoff = mc[0];
  return c;
}

std::vector<double> gains(const RunConfig& cfg, const std::vector<double>& fallback) {
  auto g = cfg.reals("g", fallback);
  for (double x : g)
    if (x < 0.0) throw ConfigError("gain g must be >= 0, got " + format_double(x));
  return g;
}

std::vector<LossParams> losses(const RunConfig& cfg, const std::vector<double>& fallback_eta) {
  if (cfg.has("eta") && cfg.has("R")) throw ConfigError("give either eta or R, not both");
  std::vector<LossParams> out;
  if (cfg.has("R")) {
    for (double r : cfg.reals("R", {})) out.push_back(LossParams::from_R(r));
  } else {
    for (double e : cfg.reals("eta", fallback_eta)) out.push_back({e});
  }
  for (const auto& l : out)
    if (!(l.eta >= 0.0 && l.eta <= 1.0))
      throw ConfigError("eta must lie in [0, 1], got " + format_double(l.eta));
  return out;
}

std::vector<int> thresholds(const RunConfig& cfg, const std::vector<int>& fallback) {
  auto k = cfg.integers("k", fallback);
  for (int x : k)
    if (x < 0) throw ConfigError("threshold k must be >= 0");
  return k;
}

std::vector<double> injections(const RunConfig& cfg, const std::vector<double>& fallback) {
  auto p = cfg.reals("p", fallback);
  for (double x : p)
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("injection p must lie in [0, 1]");
  return p;
}

PolarizationBasis parse_basis(const std::string& s) {
  if (s == "HV" || s == "1") return PolarizationBasis::hv();
  if (s == "RL" || s == "2") return PolarizationBasis::circular();
  if (s == "+-" || s == "3") return PolarizationBasis::diagonal();
  if (s.rfind("phi=", 0) == 0) return PolarizationBasis::equatorial(parse_number(s.substr(4)));
  throw ConfigError("unknown basis '" + s + "' (use HV, RL, +- or phi=<radians>)");
}

void set_meta(SweepTable& t, const RunConfig& cfg, const Common& c) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, cfg.hash());
  t.meta = {{"experiment", t.experiment},
            {"config_hash", hash},
            {"cutoff", c.fixed_cutoff ? std::to_string(*c.fixed_cutoff) : "auto"},
            {"tail_tolerance", format_double(c.tail_tolerance)}};
}

using Row = std::vector<Cell>;
Cell I(long long v) { return v; }

SweepTable visibility_sweep(const RunConfig& cfg, const Common& c) {
  const auto g_grid = gains(cfg, {1.0});
  const auto loss_grid = losses(cfg, parse_grid("0.9:0.1:9"));
  const auto k_grid = thresholds(cfg, {0});
  const double phi = cfg.real("phi", 0.0);
  SweepTable t{"visibility", {}, {"R", "eta", "g", "k", "p_plus", "p_minus", "p_inconclusive",
                                  "visibility", "cutoff"}, {}};
  for (double g : g_grid) {
    const int cutoff = c.cutoff_for(g);
    const MacroQubit q = macro_qubit(phi, {g}, {cutoff, c.tail_tolerance});
    const PhotonDistribution dist = distribution_in_basis(q.state, q.state.basis());
    for (int k : k_grid)
      for (const auto& loss : loss_grid) {
        const OutcomeProbabilities pr = ofilter_probabilities(lossy_channel(dist, loss), k);
        t.rows.push_back({loss.R(), loss.eta, g, I(k), pr.plus, pr.minus, pr.inconclusive,
                          visibility(pr), I(cutoff)});
      }
  }
  return t;
}

SweepTable witness_sigma_sweep(const RunConfig& cfg, const Common& c) {
  const auto g_grid = gains(cfg, {0.0, 0.3, 0.6, 0.9, 1.2, 1.5});
  const auto loss_grid = losses(cfg, parse_grid("1:0:11"));
  SweepTable t{"witness-sigma", {}, {"eta", "R", "g", "term1", "term2", "term3", "S",
                                     "bound", "dichotomic_bound", "R_mean_n", "cutoff"}, {}};
  for (double g : g_grid) {
    const int cutoff = c.cutoff_for(g);
    const Cutoff cut{cutoff, c.tail_tolerance};
    const BranchEnsemble joint = micro_macro_state(0.0, {g}, cut).ensemble();
    const std::array<PseudoPauliOperator, 3> sigma{
        sigma_operator(1, {g}, cut), sigma_operator(2, {g}, cut), sigma_operator(3, {g}, cut)};
    for (const auto& loss : loss_grid) {
      const WitnessReport r = micro_macro_sigma_witness(lossy_channel(joint, loss), sigma);
      t.rows.push_back({loss.eta, loss.R(), g, r.terms[0], r.terms[1], r.terms[2], r.value,
                        r.bound, std::sqrt(3.0), loss.R() * mean_photon_number(GainParams{g}),
                        I(cutoff)});
    }
  }
  return t;
}

SweepTable witness_ofilter_sweep(const RunConfig& cfg, const Common& c) {
  const std::string state = cfg.text("state", "singlet");
  SweepTable t;
  t.experiment = "witness-ofilter";
  if (state == "separable") {
    const auto n_grid = cfg.integers("N", {20});
    const auto m_grid = cfg.integers("M", {64});
    for (int n : n_grid)
      if (n < 1 || n > 40) throw ConfigError("N must lie in [1, 40]");
    for (int m : m_grid)
      if (m < 8) throw ConfigError("M must be >= 8");
    const auto k_grid = thresholds(cfg, {});
    t.columns = {"k", "N", "M", "term1", "term2", "term3", "conclusive1", "conclusive2",
                 "conclusive3", "S", "bound", "ppt_separable", "negativity", "cutoff"};
    for (int n : n_grid)
      for (int m : m_grid) {
        const SeparableCounterexample sep = separable_counterexample(n, m);
        const PptReport ppt = ppt_test(sep.density());
        std::vector<int> ks = k_grid;
        if (ks.empty())
          for (int k = 0; k <= n; ++k) ks.push_back(k);
        for (int k : ks) {
          const WitnessReport r = ofilter_witness(sep.state, k);
          const auto& ct = *r.conclusive_terms;
          t.rows.push_back({I(k), I(n), I(m), r.terms[0], r.terms[1], r.terms[2], ct[0], ct[1],
                            ct[2], r.value, r.bound, I(ppt.separable ? 1 : 0), ppt.negativity,
                            I(n)});
        }
      }
    return t;
  }
  if (state != "singlet") throw ConfigError("state must be 'singlet' or 'separable'");
  const auto g_grid = gains(cfg, {0.5});
  const auto loss_grid = losses(cfg, {1.0});
  const auto k_grid = thresholds(cfg, {0});
  t.columns = {"eta", "R", "g", "k", "term1", "term2", "term3", "conclusive1", "conclusive2",
               "conclusive3", "S", "bound", "cutoff"};
  for (double g : g_grid) {
    const int cutoff = c.cutoff_for(g);
    const BranchEnsemble joint = micro_macro_state(0.0, {g}, {cutoff, c.tail_tolerance}).ensemble();
    for (const auto& loss : loss_grid) {
      const BranchEnsemble lossy = lossy_channel(joint, loss);
      for (int k : k_grid) {
        const WitnessReport r = ofilter_witness(lossy, k);
        const auto& ct = *r.conclusive_terms;
        t.rows.push_back({loss.eta, loss.R(), g, I(k), r.terms[0], r.terms[1], r.terms[2], ct[0],
                          ct[1], ct[2], r.value, r.bound, I(cutoff)});
      }
    }
  }
  return t;
}

SweepTable witness_stokes_sweep(const RunConfig& cfg, const Common& c) {
  const auto g_grid = gains(cfg, {0.3, 0.6, 1.0});
  const auto loss_grid = losses(cfg, {0.0, 0.25, 0.5, 0.75, 1.0});
  SweepTable t{"witness-stokes", {}, {"eta", "R", "g", "term1", "term2", "term3", "mean_n",
                                      "value", "two_eta", "cutoff"}, {}};
  for (double g : g_grid) {
    const int cutoff = c.cutoff_for(g);
    const BranchEnsemble joint = micro_macro_state(0.0, {g}, {cutoff, c.tail_tolerance}).ensemble();
    for (const auto& loss : loss_grid) {
      const WitnessReport r = simon_spin_witness(lossy_channel(joint, loss));
      t.rows.push_back({loss.eta, loss.R(), g, r.terms[0], r.terms[1], r.terms[2],
                        *r.mean_photon_number, r.value, 2 * loss.eta, I(cutoff)});
    }
  }
  return t;
}

DensityOperator conditioned_state(const std::string& source, double g, const LossParams& loss,
                                  double p, const Common& c, int& cutoff) {
  if (source == "analytic") {
    cutoff = 1;
    return attenuated_state_with_injection({p}, {g}, loss);
  }
  cutoff = c.cutoff_for(g);
  return simulate_attenuated_state({p}, {g}, loss, {cutoff, c.tail_tolerance});
}

std::string source_of(const RunConfig& cfg) {
  const std::string s = cfg.text("source", "analytic");
  if (s != "analytic" && s != "numeric") throw ConfigError("source must be 'analytic' or 'numeric'");
  return s;
}

SweepTable concurrence_sweep(const RunConfig& cfg, const Common& c) {
  SweepTable t;
  t.experiment = "concurrence";
  if (cfg.has("t")) {
    const auto t_grid = cfg.reals("t", {});
    for (double x : t_grid)
      if (!(x >= 0.0 && x < 1.0)) throw ConfigError("t must lie in [0, 1)");
    t.columns = {"t", "concurrence", "concurrence_matrix", "cutoff"};
    for (double x : t_grid)
      t.rows.push_back({x, concurrence_from_t(x),
                        concurrence_2x2(DensityOperator::qubit_pair(single_photon_state(x))).concurrence,
                        I(1)});
    return t;
  }
  const std::string source = source_of(cfg);
  const auto g_grid = gains(cfg, {3.0});
  const auto loss_grid = losses(cfg, {1e-4});
  const auto p_grid = injections(cfg, {1.0, 0.5, 0.25, 0.05});
  t.columns = {"g", "eta", "R", "p", "t", "concurrence", "concurrence_matrix", "p_crit",
               "surviving_fraction", "cutoff"};
  for (double p : p_grid)
    for (const auto& loss : loss_grid)
      for (double g : g_grid) {
        int cutoff = 1;
        const DensityOperator rho = conditioned_state(source, g, loss, p, c, cutoff);
        const double closed = concurrence_with_injection({g}, loss, {p});
        t.rows.push_back({g, loss.eta, loss.R(), p, attenuation_parameter({g}, loss), closed,
                          concurrence_2x2(rho).concurrence,
                          critical_injection_probability({g}, loss),
                          loss.eta > 0 ? closed / (loss.eta / 2) : std::nan(""), I(cutoff)});
      }
  return t;
}

SweepTable pcrit_sweep(const RunConfig& cfg, const Common&) {
  const auto g_grid = gains(cfg, {0.5, 1.0, 2.0, 3.0});
  const auto loss_grid = losses(cfg, {1e-4, 1e-2, 0.5});
  const double resolution = cfg.real("resolution", 1e-10);
  if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
  SweepTable t{"pcrit", {}, {"g", "eta", "R", "p_crit", "p_crit_ppt", "difference", "cutoff"}, {}};
  for (double g : g_grid)
    for (const auto& loss : loss_grid) {
      const double closed = critical_injection_probability({g}, loss);
      const double scan = ppt_critical_injection({g}, loss, resolution);
      t.rows.push_back({g, loss.eta, loss.R(), closed, scan, scan - closed, I(1)});
    }
  return t;
}

SweepTable ofilter_dist_sweep(const RunConfig& cfg, const Common&) {
  const auto n_grid = cfg.integers("n", {10});
  if (n_grid.size() != 1 || n_grid[0] < 0 || n_grid[0] > 400)
    throw ConfigError("n takes a single photon number in [0, 400]");
  const int n = n_grid[0];
  std::vector<PolarizationBasis> bases;
  std::vector<std::string> labels = cfg.texts("basis", {"+-", "RL"});
  for (const auto& b : labels) bases.push_back(parse_basis(b));
  const PolarizationBasis source = parse_basis(cfg.text("source-basis", "+-"));
  SweepTable t{"ofilter-dist", {}, {"diff", "n_pi", "m_perp", "probability", "basis", "cutoff"}, {}};
  const TwoModeVector state = TwoModeVector::fock(n, 0, n, source);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const PhotonDistribution d = distribution_in_basis(state, bases[b]);
    for (int m = 0; m <= n; ++m)
      t.rows.push_back({double(n - 2 * m), I(n - m), I(m), d.probability(n - m, m), labels[b], I(n)});
  }
  return t;
}

SweepTable density_sweep(const RunConfig& cfg, const Common& c) {
  const std::string source = source_of(cfg);
  const auto g_grid = gains(cfg, {3.0});
  const auto loss_grid = losses(cfg, {1e-4});
  const auto p_grid = injections(cfg, {1.0});
  static const char* labels[4] = {"HH", "HV", "VH", "VV"};
  SweepTable t;
  t.experiment = "density";
  t.columns = {"g", "eta", "R", "p", "t", "row"};
  for (const char* l : labels) {
    t.columns.push_back(std::string("re_") + l);
    t.columns.push_back(std::string("im_") + l);
  }
  t.columns.push_back("cutoff");
  for (double g : g_grid)
    for (const auto& loss : loss_grid)
      for (double p : p_grid) {
        int cutoff = 1;
        const DensityOperator rho = conditioned_state(source, g, loss, p, c, cutoff);
        for (int r = 0; r < 4; ++r) {
          Row row{g, loss.eta, loss.R(), p, attenuation_parameter({g}, loss), std::string(labels[r])};
          for (int col = 0; col < 4; ++col) {
            row.push_back(rho.matrix()(r, col).real());
            row.push_back(rho.matrix()(r, col).imag());
          }
          row.push_back(I(cutoff));
          t.rows.push_back(std::move(row));
        }
      }
  return t;
}

}  // namespace

SweepTable run_experiment(const RunConfig& config) {
  if (config.experiment.empty()) throw ConfigError("no experiment selected");
  const std::string fmt = config.format.empty() ? "csv" : config.format;
  if (fmt != "csv" && fmt != "records") throw ConfigError("format must be 'csv' or 'records'");
  const Common c = read_common(config);
  SweepTable t;
  const std::string& e = config.experiment;
  if (e == "visibility") t = visibility_sweep(config, c);
  else if (e == "witness-sigma") t = witness_sigma_sweep(config, c);
  else if (e == "witness-ofilter") t = witness_ofilter_sweep(config, c);
  else if (e == "witness-stokes") t = witness_stokes_sweep(config, c);
  else if (e == "concurrence") t = concurrence_sweep(config, c);
  else if (e == "pcrit") t = pcrit_sweep(config, c);
  else if (e == "ofilter-dist") t = ofilter_dist_sweep(config, c);
  else if (e == "density") t = density_sweep(config, c);
  else throw ConfigError("unknown experiment '" + e + "'");
  set_meta(t, config, c);
  if (e == "density") t.meta.emplace_back("basis_order", "HH,HV,VH,VV");
  return t;
}

// ---------------------------------------------------------------------------
// Writers

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const SweepTable& table) {
  for (const auto& [k, v] : table.meta) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\n";
  }
}

void write_records(std::ostream& os, const SweepTable& table) {
  nlohmann::ordered_json meta;
  for (const auto& [k, v] : table.meta) meta[k] = v;
  os << nlohmann::ordered_json{{"meta", meta}}.dump() << "\n";
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { rec[table.columns[i]] = v; }, row[i]);
    os << rec.dump() << "\n";
  }
}

void write_table(std::ostream& os, const SweepTable& table, const std::string& format) {
  if (format.empty() || format == "csv") write_csv(os, table);
  else if (format == "records") write_records(os, table);
  else throw ConfigError("format must be 'csv' or 'records'");
}

}  // namespace micromacro
